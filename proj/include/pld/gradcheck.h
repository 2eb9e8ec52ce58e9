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

#ifndef PLD_GRADCHECK_H_
#define PLD_GRADCHECK_H_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pld/autodiff.h"

namespace pld {

// Error of one parameter tensor: ||a - n|| / max(||a||, ||n||, 1e-8) with
// Euclidean norms over its values. For a single value this is the plain
// |a - n| / max(|a|, |n|, 1e-8).
struct ParameterGradError {
  std::string name;
  double relative_error = 0.0;
  double analytic_norm = 0.0;
  double numeric_norm = 0.0;
};

struct GradCheckResult {
  // Max over parameters of their relative error.
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::vector<ParameterGradError> per_parameter;
  std::size_t checked_values = 0;
  // Values whose difference was retaken with a smaller step because a relu
  // changed piece inside [x - step, x + step].
  std::size_t shrunk_values = 0;
  // Values left out because every step tried still crossed a relu kink.
  std::size_t skipped_values = 0;
};

// Records the loss of interest on the given tape. Called once for the
// analytic pass and twice per checked value for the central differences.
using LossBuilder = std::function<Var(Tape&)>;

// Compares Backward() gradients against central differences with step
// `epsilon` for every value of every parameter. A central difference is only
// a derivative estimate where the loss is smooth on the whole interval, so a
// value whose perturbed recordings change the relu activation pattern is
// retried with the step divided by 4, up to kMaxStepShrinks times, and
// skipped if it never settles. Parameter values are restored afterwards and
// their grads are left holding the analytic gradient. With no parameters the
// result is 0.
inline constexpr int kMaxStepShrinks = 3;
GradCheckResult FiniteDifferenceCheck(const std::vector<Parameter*>& params,
                                      const LossBuilder& build_loss,
                                      float epsilon);

}  // namespace pld

#endif  // PLD_GRADCHECK_H_
