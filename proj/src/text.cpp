/* Copyright 2026 The SEJE Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "seje/text.hpp"

#include <algorithm>
#include <cctype>

namespace seje {

Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string cur;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c == '_') {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join(const Tokens& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.append(sep);
    out.append(tokens[i]);
  }
  return out;
}

Tokens split_underscore(std::string_view surface) {
  Tokens out;
  std::size_t start = 0;
  while (start <= surface.size()) {
    const std::size_t pos = surface.find('_', start);
    const std::size_t end = pos == std::string_view::npos ? surface.size() : pos;
    if (end > start) out.emplace_back(surface.substr(start, end - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string underscore_join(const Tokens& tokens) { return join(tokens, "_"); }

EntityJoiner::EntityJoiner(const std::set<std::string>& surfaces) {
  for (const auto& s : surfaces) add(s);
}

void EntityJoiner::add(const std::string& surface) {
  Tokens parts = split_underscore(surface);
  if (parts.empty()) return;
  auto& bucket = by_first_[parts.front()];
  if (std::find(bucket.begin(), bucket.end(), parts) != bucket.end()) return;
  bucket.push_back(std::move(parts));
  std::stable_sort(bucket.begin(), bucket.end(), [](const Tokens& a, const Tokens& b) { return a.size() > b.size(); });
  ++count_;
}

Tokens EntityJoiner::apply(const Tokens& tokens) const { return rewrite(tokens, nullptr); }

Tokens EntityJoiner::mask(const Tokens& tokens, const std::string& placeholder) const {
  return rewrite(tokens, &placeholder);
}

Tokens EntityJoiner::rewrite(const Tokens& tokens, const std::string* placeholder) const {
  Tokens out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::string& head = tokens[i];
    std::size_t matched = 0;
    if (head.find('_') != std::string::npos) {
      // an already-joined token counts as a match when it names an entity
      const Tokens parts = split_underscore(head);
      auto it = parts.empty() ? by_first_.end() : by_first_.find(parts.front());
      if (it != by_first_.end() && std::find(it->second.begin(), it->second.end(), parts) != it->second.end())
        matched = 1;
    } else if (auto it = by_first_.find(head); it != by_first_.end()) {
      for (const Tokens& cand : it->second) {
        if (i + cand.size() > tokens.size()) continue;
        if (std::equal(cand.begin(), cand.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
          matched = cand.size();
          break;
        }
      }
    }
    if (matched == 0) {
      out.push_back(head);
      ++i;
      continue;
    }
    if (placeholder) {
      out.push_back(*placeholder);
    } else if (matched == 1) {
      out.push_back(head);
    } else {
      out.push_back(underscore_join(Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                           tokens.begin() + static_cast<std::ptrdiff_t>(i + matched))));
    }
    i += matched;
  }
  return out;
}

}  // namespace seje
