/* Copyright 2026 The PLD Authors. All Rights Reserved.

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

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pld/error.h"
#include "pld/tensor.h"

namespace pld {
namespace {

constexpr char kMagic[4] = {'P', 'L', 'D', 'T'};
constexpr std::uint32_t kVersion = 1;

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t GetU32(std::string_view bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + i]))
         << (8 * i);
  }
  return v;
}

}  // namespace

std::string EncodePldt(const Tensor& tensor) {
  std::string out;
  out.reserve(12 + 4 * tensor.shape().size() + 4 * tensor.size());
  out.append(kMagic, 4);
  PutU32(out, kVersion);
  PutU32(out, static_cast<std::uint32_t>(tensor.ndim()));
  for (int d : tensor.shape()) PutU32(out, static_cast<std::uint32_t>(d));
  for (float v : tensor.data()) PutU32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

Tensor DecodePldt(std::string_view bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kFormat, "not a PLDT file (bad magic)");
  }
  const std::uint32_t version = GetU32(bytes, 4);
  if (version != kVersion) {
    throw Error(ErrorCode::kFormat,
                "unsupported PLDT version " + std::to_string(version));
  }
  const std::uint32_t ndim = GetU32(bytes, 8);
  if (ndim == 0 || ndim > 16 || bytes.size() < 12 + 4ull * ndim) {
    throw Error(ErrorCode::kFormat, "PLDT header is truncated or corrupt");
  }
  std::vector<int> shape(ndim);
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const std::uint32_t d = GetU32(bytes, 12 + 4 * i);
    if (d == 0 || d > (1u << 30)) {
      throw Error(ErrorCode::kFormat, "PLDT dimension out of range");
    }
    shape[i] = static_cast<int>(d);
    count *= d;
  }
  const std::size_t header = 12 + 4 * ndim;
  if (bytes.size() != header + 4 * count) {
    throw Error(ErrorCode::kFormat,
                "PLDT payload size mismatch: expected " +
                    std::to_string(4 * count) + " bytes, got " +
                    std::to_string(bytes.size() - header));
  }
  std::vector<float> data(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<float>(GetU32(bytes, header + 4 * i));
  }
  return Tensor(std::move(shape), std::move(data));
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

void WritePldt(const std::filesystem::path& path, const Tensor& tensor) {
  WriteFileBytes(path, EncodePldt(tensor));
}

Tensor ReadPldt(const std::filesystem::path& path) {
  try {
    return DecodePldt(ReadFileBytes(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace pld
