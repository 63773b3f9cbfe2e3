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

#include "seje/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "seje/common.hpp"

namespace seje {

static std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

const std::string* KeyValueConfig::find(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  consumed_.insert(key);
  return &it->second;
}

template <typename T>
static void parse_number(const std::string& key, const std::string& text, T& out) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  out = value;
}

void KeyValueConfig::read(const std::string& key, int& out) const {
  if (const auto* v = find(key)) parse_number(key, *v, out);
}
void KeyValueConfig::read(const std::string& key, double& out) const {
  if (const auto* v = find(key)) parse_number(key, *v, out);
}
void KeyValueConfig::read(const std::string& key, std::uint64_t& out) const {
  if (const auto* v = find(key)) parse_number(key, *v, out);
}
void KeyValueConfig::read(const std::string& key, std::string& out) const {
  if (const auto* v = find(key)) out = *v;
}
void KeyValueConfig::read(const std::string& key, bool& out) const {
  const auto* v = find(key);
  if (!v) return;
  if (*v == "true" || *v == "1" || *v == "yes" || *v == "on")
    out = true;
  else if (*v == "false" || *v == "0" || *v == "no" || *v == "off")
    out = false;
  else
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + *v + "'");
}

void KeyValueConfig::reject_unknown() const {
  for (const auto& [k, v] : values_)
    if (!consumed_.count(k)) throw ConfigError("unknown config key '" + k + "'");
}

}  // namespace seje
