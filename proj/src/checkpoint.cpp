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

#include "seje/checkpoint.hpp"

#include <cstring>
#include <fstream>

namespace seje {
namespace {

constexpr char kMagic[8] = {'S', 'E', 'J', 'E', 'C', 'K', 'P', 'T'};

template <class T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void write_string(std::ostream& os, const std::string& s) {
  write_pod<std::uint64_t>(os, s.size());
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

template <class T>
T read_pod(std::istream& is, const std::filesystem::path& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw SchemaError("truncated checkpoint: " + path.string());
  return v;
}

std::string read_string(std::istream& is, const std::filesystem::path& path) {
  const auto n = read_pod<std::uint64_t>(is, path);
  if (n > (1ULL << 32)) throw SchemaError("corrupt string length in " + path.string());
  std::string s(n, '\0');
  if (!is.read(s.data(), static_cast<std::streamsize>(n))) throw SchemaError("truncated checkpoint: " + path.string());
  return s;
}

}  // namespace

const Matrix& Checkpoint::get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw SchemaError("checkpoint has no tensor '" + name + "'");
  return it->second;
}

const std::string& Checkpoint::meta(const std::string& key) const {
  auto it = meta_.find(key);
  if (it == meta_.end()) throw SchemaError("checkpoint has no metadata key '" + key + "'");
  return it->second;
}

void Checkpoint::put_params(const nn::ParamRefs& params, const std::string& prefix) {
  for (const nn::Param* p : params) put(prefix + p->name, p->value);
}

void Checkpoint::get_params(const nn::ParamRefs& params, const std::string& prefix) const {
  for (nn::Param* p : params) {
    const Matrix& m = get(prefix + p->name);
    if (m.rows() != p->value.rows() || m.cols() != p->value.cols())
      throw SchemaError("shape mismatch for '" + prefix + p->name + "'");
    p->value = m;
  }
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  os.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(os, kVersion);
  write_pod<std::uint64_t>(os, meta_.size());
  for (const auto& [k, v] : meta_) {
    write_string(os, k);
    write_string(os, v);
  }
  write_pod<std::uint64_t>(os, tensors_.size());
  for (const auto& [name, m] : tensors_) {
    write_string(os, name);
    write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
    write_pod<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
    os.write(reinterpret_cast<const char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
  }
  if (!os) throw Error("write failed: " + path.string());
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path.string());
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw SchemaError("not a checkpoint file: " + path.string());
  const auto version = read_pod<std::uint32_t>(is, path);
  if (version != kVersion) throw SchemaError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ckpt;
  const auto n_meta = read_pod<std::uint64_t>(is, path);
  for (std::uint64_t i = 0; i < n_meta; ++i) {
    std::string k = read_string(is, path);
    ckpt.meta_[k] = read_string(is, path);
  }
  const auto n_tensors = read_pod<std::uint64_t>(is, path);
  for (std::uint64_t i = 0; i < n_tensors; ++i) {
    std::string name = read_string(is, path);
    const auto rows = read_pod<std::uint64_t>(is, path);
    const auto cols = read_pod<std::uint64_t>(is, path);
    Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
    if (!is.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double))))
      throw SchemaError("truncated tensor '" + name + "' in " + path.string());
    ckpt.tensors_[name] = std::move(m);
  }
  return ckpt;
}

}  // namespace seje
