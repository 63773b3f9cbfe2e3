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

#include <filesystem>
#include <map>
#include <string>

#include "seje/common.hpp"
#include "seje/nn.hpp"

namespace seje {

/// Versioned container of named matrices plus string metadata. Values are
/// stored as raw IEEE-754 doubles so reloads are bit-exact.
class Checkpoint {
 public:
  static constexpr std::uint32_t kVersion = 1;

  void put(const std::string& name, const Matrix& m) { tensors_[name] = m; }
  const Matrix& get(const std::string& name) const;
  bool contains(const std::string& name) const { return tensors_.count(name) > 0; }

  void set_meta(const std::string& key, const std::string& value) { meta_[key] = value; }
  const std::string& meta(const std::string& key) const;
  bool has_meta(const std::string& key) const { return meta_.count(key) > 0; }

  /// Stores every parameter under `prefix + param.name`.
  void put_params(const nn::ParamRefs& params, const std::string& prefix = "");
  /// Restores parameters by name; shapes must match.
  void get_params(const nn::ParamRefs& params, const std::string& prefix = "") const;

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  const std::map<std::string, Matrix>& tensors() const { return tensors_; }
  const std::map<std::string, std::string>& metadata() const { return meta_; }

 private:
  std::map<std::string, Matrix> tensors_;
  std::map<std::string, std::string> meta_;
};

}  // namespace seje
