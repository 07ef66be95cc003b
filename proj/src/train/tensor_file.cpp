// Copyright 2026 The dctts Authors
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

#include "dctts/train/tensor_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "dctts/error.hpp"

namespace dctts::train {
namespace {

static_assert(std::endian::native == std::endian::little, "tensor files assume a little-endian host");
constexpr char kMagic[4] = {'D', 'C', 'T', 'S'};

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& origin) : bytes_(bytes), origin_(origin) {}

  void take(void* dst, std::size_t n) {
    if (pos_ + n > bytes_.size()) throw DataError(origin_ + ": truncated tensor file");
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    take(&v, 4);
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }
  const std::string& origin() const { return origin_; }

 private:
  const std::string& bytes_;
  const std::string& origin_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_tensor_file(const std::vector<NamedTensor>& tensors) {
  std::string out(kMagic, 4);
  put_u32(out, kTensorFileVersion);
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& t : tensors) {
    put_u32(out, static_cast<std::uint32_t>(t.name.size()));
    out += t.name;
    put_u32(out, 3);
    put_u32(out, static_cast<std::uint32_t>(t.value.batch()));
    put_u32(out, static_cast<std::uint32_t>(t.value.channels()));
    put_u32(out, static_cast<std::uint32_t>(t.value.time()));
    out.append(reinterpret_cast<const char*>(t.value.data()), t.value.size() * sizeof(float));
  }
  return out;
}

std::vector<NamedTensor> decode_tensor_file(const std::string& bytes, const std::string& origin) {
  Reader r(bytes, origin);
  char magic[4];
  r.take(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw DataError(origin + ": not a DCTS tensor file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kTensorFileVersion) {
    throw DataError(origin + ": unsupported tensor file version " + std::to_string(version));
  }
  const std::uint32_t count = r.u32();
  std::vector<NamedTensor> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    t.name.resize(r.u32());
    r.take(t.name.data(), t.name.size());
    const std::uint32_t rank = r.u32();
    if (rank == 0 || rank > 3) throw DataError(origin + ": tensor '" + t.name + "' has unsupported rank");
    std::size_t dims[3] = {1, 1, 1};
    for (std::uint32_t k = 0; k < rank; ++k) dims[3 - rank + k] = r.u32();
    t.value = ad::Tensor(ad::Shape{dims[0], dims[1], dims[2]});
    r.take(t.value.data(), t.value.size() * sizeof(float));
    out.push_back(std::move(t));
  }
  if (!r.done()) throw DataError(origin + ": trailing bytes after last tensor");
  return out;
}

void write_tensor_file(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::string bytes = encode_tensor_file(tensors);
  // Write-then-rename so an interrupted snapshot never replaces a good one.
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("failed writing " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::vector<NamedTensor> read_tensor_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open tensor file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return decode_tensor_file(ss.str(), path.string());
}

}  // namespace dctts::train
