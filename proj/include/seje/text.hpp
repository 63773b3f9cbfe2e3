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

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace seje {

using Tokens = std::vector<std::string>;

/// Lowercases and splits on anything that is not [a-z0-9_].
Tokens tokenize(std::string_view text);
std::string join(const Tokens& tokens, std::string_view sep = " ");
Tokens split_underscore(std::string_view surface);
/// "ditali pasta" tokens -> "ditali_pasta".
std::string underscore_join(const Tokens& tokens);

/// Rewrites token streams so that every known multi-word surface becomes a
/// single underscore-joined token. Matching is greedy longest-first.
class EntityJoiner {
 public:
  EntityJoiner() = default;
  explicit EntityJoiner(const std::set<std::string>& surfaces);

  void add(const std::string& surface);
  Tokens apply(const Tokens& tokens) const;
  /// Replaces matched entities with `placeholder` instead of joining them.
  Tokens mask(const Tokens& tokens, const std::string& placeholder) const;
  std::size_t size() const { return count_; }

 private:
  Tokens rewrite(const Tokens& tokens, const std::string* placeholder) const;

  // first token -> candidate token sequences, longest first
  std::map<std::string, std::vector<Tokens>> by_first_;
  std::size_t count_ = 0;
};

}  // namespace seje
