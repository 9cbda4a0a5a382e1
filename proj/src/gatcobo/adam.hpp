/*
 * Copyright 2026 The gatcobo Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "gatcobo/autodiff.hpp"

#include <cstdint>
#include <vector>

namespace gatcobo {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // L2 strength added to the gradient (lambda * theta) before the moment
  // update.
  double weight_decay = 0.0;
};

// Adam with bias correction over a fixed set of Tensors. Moment arrays are
// created alongside the parameters and keep their shapes.
class Adam {
 public:
  Adam(std::vector<Tensor*> params, AdamOptions options);

  // Applies one update from the gradients currently held by the parameters.
  void step();
  void zeroGrad();

  std::int64_t stepCount() const { return step_; }
  const AdamOptions& options() const { return options_; }
  const std::vector<Matrix>& firstMoments() const { return m_; }
  const std::vector<Matrix>& secondMoments() const { return v_; }

 private:
  std::vector<Tensor*> params_;
  AdamOptions options_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::int64_t step_ = 0;
};

}  // namespace gatcobo
