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

#include "gatcobo/adam.hpp"

#include "gatcobo/errors.hpp"

#include <cmath>
#include <utility>

namespace gatcobo {

Adam::Adam(std::vector<Tensor*> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  if (!(options_.learning_rate > 0.0)) throw ContractError("Adam learning rate must be > 0");
  for (const Tensor* p : params_) {
    m_.emplace_back(p->rows(), p->cols());
    v_.emplace_back(p->rows(), p->cols());
  }
}

void Adam::zeroGrad() {
  for (Tensor* p : params_) p->zeroGrad();
}

void Adam::step() {
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    Matrix& theta = params_[i]->value();
    const Matrix& grad = params_[i]->grad();
    if (!grad.sameShape(theta) || !m_[i].sameShape(theta)) {
      throw DimensionError("Adam: parameter " + std::to_string(i) + " changed shape to " +
                           theta.shapeString());
    }
    for (std::size_t k = 0; k < theta.size(); ++k) {
      const double g = grad[k] + options_.weight_decay * theta[k];
      m_[i][k] = b1 * m_[i][k] + (1.0 - b1) * g;
      v_[i][k] = b2 * v_[i][k] + (1.0 - b2) * g * g;
      const double mhat = m_[i][k] / c1;
      const double vhat = v_[i][k] / c2;
      theta[k] -= options_.learning_rate * mhat / (std::sqrt(vhat) + options_.epsilon);
    }
  }
}

}  // namespace gatcobo
