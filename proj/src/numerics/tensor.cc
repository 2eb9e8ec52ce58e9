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

#include "pld/tensor.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include "pld/error.h"

namespace pld {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kFormat:
      return "format";
    case ErrorCode::kConfig:
      return "config";
    case ErrorCode::kData:
      return "data";
    case ErrorCode::kNonFinite:
      return "non_finite";
  }
  return "unknown";
}

std::size_t ShapeSize(std::span<const int> shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  return n;
}

std::string ShapeToString(std::span<const int> shape) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << "x";
    out << shape[i];
  }
  out << "]";
  return out.str();
}

namespace {

void CheckShape(const std::vector<int>& shape) {
  if (shape.empty()) {
    throw Error(ErrorCode::kShape, "tensor shape must have at least one axis");
  }
  for (int d : shape) {
    if (d <= 0) {
      throw Error(ErrorCode::kShape,
                  "tensor dimensions must be positive, got " +
                      ShapeToString(shape));
    }
  }
}

}  // namespace

Tensor::Tensor(std::vector<int> shape, float fill) : shape_(std::move(shape)) {
  CheckShape(shape_);
  data_.assign(ShapeSize(shape_), fill);
}

Tensor::Tensor(std::vector<int> shape, std::vector<float> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  CheckShape(shape_);
  if (ShapeSize(shape_) != data_.size()) {
    throw Error(ErrorCode::kShape,
                "shape " + ShapeToString(shape_) + " needs " +
                    std::to_string(ShapeSize(shape_)) + " values, got " +
                    std::to_string(data_.size()));
  }
}

int Tensor::dim(int axis) const {
  if (axis < 0) axis += ndim();
  if (axis < 0 || axis >= ndim()) {
    throw Error(ErrorCode::kShape, "axis out of range for shape " +
                                       ShapeToString(shape_));
  }
  return shape_[axis];
}

Tensor Tensor::Reshaped(std::vector<int> shape) const {
  return Tensor(std::move(shape), data_);
}

void Tensor::Fill(float value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float v) { return std::isfinite(v); });
}

double Tensor::Sum() const {
  double total = 0.0;
  for (float v : data_) total += v;
  return total;
}

float Tensor::Max() const { return *std::max_element(data_.begin(), data_.end()); }
float Tensor::Min() const { return *std::min_element(data_.begin(), data_.end()); }

bool Tensor::BitwiseEquals(const Tensor& other) const {
  return shape_ == other.shape_ &&
         (data_.empty() ||
          std::memcmp(data_.data(), other.data_.data(),
                      data_.size() * sizeof(float)) == 0);
}

}  // namespace pld
