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

#ifndef PLD_TENSOR_H_
#define PLD_TENSOR_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pld {

// Dense row-major float32 array. Every dimension is positive and the flat
// buffer always holds exactly product(shape) values.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, float fill = 0.0f);
  Tensor(std::vector<int> shape, std::vector<float> data);

  static Tensor Scalar(float value) { return Tensor({1}, value); }

  const std::vector<int>& shape() const { return shape_; }
  int ndim() const { return static_cast<int>(shape_.size()); }
  int dim(int axis) const;
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }
  float* raw() { return data_.data(); }
  const float* raw() const { return data_.data(); }

  float& operator[](std::size_t i) { return data_[i]; }
  float operator[](std::size_t i) const { return data_[i]; }

  // Same data, new shape of equal element count.
  Tensor Reshaped(std::vector<int> shape) const;

  void Fill(float value);
  bool AllFinite() const;
  double Sum() const;
  double Mean() const { return data_.empty() ? 0.0 : Sum() / size(); }
  float Max() const;
  float Min() const;

  // Shape equality plus bitwise equality of every value.
  bool BitwiseEquals(const Tensor& other) const;

 private:
  std::vector<int> shape_;
  std::vector<float> data_;
};

std::size_t ShapeSize(std::span<const int> shape);
std::string ShapeToString(std::span<const int> shape);

// PLDT v1 tensor files: "PLDT", u32 version, u32 ndim, ndim x u32 dims, then
// the float32 payload. All integers and floats are little-endian.
std::string EncodePldt(const Tensor& tensor);
Tensor DecodePldt(std::string_view bytes);
void WritePldt(const std::filesystem::path& path, const Tensor& tensor);
Tensor ReadPldt(const std::filesystem::path& path);

// Whole-file helpers shared by the JSON writers.
std::string ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace pld

#endif  // PLD_TENSOR_H_
