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

#ifndef PLD_TESTS_TEST_UTIL_H_
#define PLD_TESTS_TEST_UTIL_H_

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pld/rng.h"
#include "pld/tensor.h"

namespace pld::testing {

inline Tensor RandomTensor(const std::vector<int>& shape, Rng& rng,
                           double lo = -1.0, double hi = 1.0) {
  Tensor t(shape);
  for (float& v : t.data()) v = static_cast<float>(rng.Uniform(lo, hi));
  return t;
}

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    const ::testing::TestInfo* info =
        ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "pld_test";
    if (info) name += std::string("_") + info->test_suite_name() + "_" + info->name();
    name += "_" + std::to_string(counter++);
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace pld::testing

#endif  // PLD_TESTS_TEST_UTIL_H_
