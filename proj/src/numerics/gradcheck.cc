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

#include "pld/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>

#include "pld/error.h"

namespace pld {
namespace {

struct Evaluation {
  double loss;
  std::vector<std::uint8_t> pattern;
};

Evaluation Evaluate(const LossBuilder& build_loss) {
  Tape tape;
  const Var loss = build_loss(tape);
  return {tape.ScalarValue(loss), tape.ActivationPattern()};
}

}  // namespace

GradCheckResult FiniteDifferenceCheck(const std::vector<Parameter*>& params,
                                      const LossBuilder& build_loss,
                                      float epsilon) {
  if (!(epsilon > 0.0f)) {
    throw Error(ErrorCode::kInvalidArgument, "gradcheck epsilon must be > 0");
  }
  GradCheckResult result;
  for (Parameter* p : params) p->grad.Fill(0.0f);
  std::vector<std::uint8_t> base_pattern;
  {
    Tape tape;
    tape.Backward(build_loss(tape));
    base_pattern = tape.ActivationPattern();
  }
  for (Parameter* p : params) {
    double diff2 = 0.0, analytic2 = 0.0, numeric2 = 0.0;
    for (std::size_t k = 0; k < p->value.size(); ++k) {
      const float original = p->value[k];
      float step = epsilon;
      std::optional<double> numeric;
      for (int attempt = 0; attempt <= kMaxStepShrinks; ++attempt) {
        const float plus = original + step;
        const float minus = original - step;
        p->value[k] = plus;
        const Evaluation up = Evaluate(build_loss);
        p->value[k] = minus;
        const Evaluation down = Evaluate(build_loss);
        p->value[k] = original;
        if (up.pattern == base_pattern && down.pattern == base_pattern) {
          // Divide by the step actually taken after float rounding.
          numeric = (up.loss - down.loss) /
                    (static_cast<double>(plus) - static_cast<double>(minus));
          if (attempt > 0) ++result.shrunk_values;
          break;
        }
        step /= 4.0f;
      }
      if (!numeric) {
        ++result.skipped_values;
        continue;
      }
      const double analytic = p->grad[k];
      diff2 += (analytic - *numeric) * (analytic - *numeric);
      analytic2 += analytic * analytic;
      numeric2 += *numeric * *numeric;
      ++result.checked_values;
    }
    ParameterGradError e;
    e.name = p->name;
    e.analytic_norm = std::sqrt(analytic2);
    e.numeric_norm = std::sqrt(numeric2);
    e.relative_error = std::sqrt(diff2) /
                       std::max({e.analytic_norm, e.numeric_norm, 1e-8});
    if (e.relative_error > result.max_relative_error) {
      result.max_relative_error = e.relative_error;
      result.worst_parameter = e.name;
    }
    result.per_parameter.push_back(std::move(e));
  }
  return result;
}

}  // namespace pld
