// Copyright 2026 The magnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <bit>
#include <fstream>
#include <iterator>
#include <map>

#include "magnet/errors.hpp"
#include "magnet/trainer.hpp"

namespace magnet {

namespace {

constexpr std::size_t kMagicSize = sizeof(kCheckpointMagic) - 1;

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

class Reader {
 public:
  Reader(const std::string& bytes, std::string source) : bytes_(bytes), source_(std::move(source)) {}

  template <typename T>
  T get_le(const char* what) {
    need(sizeof(T), what);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string get_bytes(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n) {
      throw CheckpointError(source_ + ": truncated checkpoint while reading " + what);
    }
  }

  const std::string& bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, std::span<const Parameter* const> params) {
  std::string out(kCheckpointMagic, kMagicSize);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const Parameter* p : params) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
    out += p->name;
    put_le<std::uint32_t>(out, 2);
    put_le<std::uint64_t>(out, p->value.rows());
    put_le<std::uint64_t>(out, p->value.cols());
    for (double x : p->value.data()) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(x));
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open checkpoint for writing: " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("failed writing checkpoint: " + path.string());
}

std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint: " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  const std::string source = path.string();
  if (bytes.size() < kMagicSize || bytes.compare(0, kMagicSize, kCheckpointMagic) != 0) {
    throw CheckpointError(source + ": bad checkpoint header (expected magic \"MAGNET1\")");
  }
  Reader r(bytes, source);
  r.get_bytes(kMagicSize, "header");
  const auto count = r.get_le<std::uint32_t>("tensor count");
  std::vector<NamedTensor> out;
  for (std::uint32_t t = 0; t < count; ++t) {
    NamedTensor nt;
    const auto name_len = r.get_le<std::uint32_t>("name length");
    nt.name = r.get_bytes(name_len, "tensor name");
    const auto rank = r.get_le<std::uint32_t>("rank");
    if (rank != 2) {
      throw CheckpointError(source + ": tensor " + nt.name + " has unsupported rank " +
                            std::to_string(rank));
    }
    const auto rows = r.get_le<std::uint64_t>("dims");
    const auto cols = r.get_le<std::uint64_t>("dims");
    if (rows == 0 || cols == 0 || rows > (bytes.size() / 8) / cols) {
      throw CheckpointError(source + ": tensor " + nt.name + " has implausible dims");
    }
    std::vector<double> data(rows * cols);
    for (double& x : data) x = std::bit_cast<double>(r.get_le<std::uint64_t>("payload"));
    nt.value = Tensor(rows, cols, std::move(data));
    out.push_back(std::move(nt));
  }
  if (!r.at_end()) throw CheckpointError(source + ": trailing bytes after last tensor");
  return out;
}

void load_checkpoint(const std::filesystem::path& path, std::span<Parameter* const> params) {
  std::map<std::string, Parameter*> by_name;
  for (Parameter* p : params) by_name[p->name] = p;
  const auto tensors = read_checkpoint(path);
  std::map<std::string, const Tensor*> seen;
  for (const auto& nt : tensors) {
    if (by_name.find(nt.name) == by_name.end()) {
      throw CheckpointError(path.string() + ": unknown tensor name '" + nt.name + "'");
    }
    if (!seen.emplace(nt.name, &nt.value).second) {
      throw CheckpointError(path.string() + ": duplicate tensor '" + nt.name + "'");
    }
  }
  for (const auto& [name, p] : by_name) {
    const auto it = seen.find(name);
    if (it == seen.end()) throw CheckpointError(path.string() + ": missing tensor '" + name + "'");
    if (!it->second->same_shape(p->value)) {
      throw CheckpointError(path.string() + ": tensor '" + name + "' is " +
                            shape_string(*it->second) + ", expected " + shape_string(p->value));
    }
  }
  for (const auto& [name, p] : by_name) p->value = *seen.at(name);
}

}  // namespace magnet
