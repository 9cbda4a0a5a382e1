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

#include "gatcobo/csr.hpp"
#include "gatcobo/matrix.hpp"

#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace gatcobo {

// A persistent array that can be watched by a Tape. Trainable parameters are
// Tensors; their gradient accumulates across backward passes until zeroGrad().
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Matrix value, bool requires_grad = true);

  const Matrix& value() const { return value_; }
  Matrix& value() { return value_; }
  const Matrix& grad() const { return grad_; }
  Matrix& grad() { return grad_; }
  bool requiresGrad() const { return requires_grad_; }
  std::size_t rows() const { return value_.rows(); }
  std::size_t cols() const { return value_.cols(); }

  void zeroGrad() { grad_.fill(0.0); }

 private:
  Matrix value_;
  Matrix grad_;
  bool requires_grad_ = false;
};

class Tape;

// Handle to a node recorded on a Tape.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Matrix& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
};

// Records primitive operations in creation order. Creation order is a
// topological order, so backward walks the record once from the end.
class Tape {
 public:
  // Receives the value and the adjoint of the node being processed.
  using BackwardFn =
      std::function<void(Tape&, const Matrix& output, const Matrix& adjoint)>;

  Var constant(Matrix value);
  Var watch(Tensor& tensor);

  const Matrix& value(Var v) const { return nodes_[v.id].value; }
  bool needsGrad(Var v) const { return nodes_[v.id].needs_grad; }
  std::size_t size() const { return nodes_.size(); }

  // Populates the gradient of every watched Tensor reachable from `loss`.
  // Gradients add onto whatever the Tensors already hold.
  void backward(Var loss);

  // Op-author interface.
  Var record(Matrix value, std::span<const Var> parents, BackwardFn backward);
  // Adjoint slot of a parent, or nullptr when the parent needs no gradient.
  Matrix* gradSlot(Var v);

 private:
  struct Node {
    Matrix value;
    Matrix adjoint;
    bool needs_grad = false;
    Tensor* bound = nullptr;
    BackwardFn backward;
  };
  std::vector<Node> nodes_;
};

namespace ad {

Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var scale(Var a, double factor);
Var hadamard(Var a, Var b);
Var sum(Var a);

Var leakyRelu(Var x, double slope = 0.2);
Var elu(Var x, double alpha = 1.0);
// Subgradient 0 at the kink.
Var relu(Var x);
// Throws DomainError on any nonpositive entry.
Var log(Var x);

// Softmax across each full row.
Var softmaxRows(Var logits);

// Softmax across the admissible entries of each row; masked entries are 0.
// `mask` is row-major with the logits' shape, nonzero meaning admissible.
// `row_used` (optional, one entry per row) marks rows consumed downstream; a
// used row without admissible entries raises DegenerateRowError, an unused one
// yields zeros.
Var rowSoftmaxMasked(Var logits, std::span<const unsigned char> mask,
                     std::span<const unsigned char> row_used = {});

// Sparse forms over a Csr support. Edge-valued tensors are (nnz x 1) in Csr
// entry order.
//   edgeLogits:  e_k = src[row(k)] + dst[col(k)]
//   edgeSoftmax: per-row softmax of edge values
//   spmm:        out_i = sum_k in row i  w_k * x[col(k)]
Var edgeLogits(Var src_score, Var dst_score, const Csr& csr);
Var edgeSoftmax(Var edge_logits, const Csr& csr);
Var spmm(Var edge_weights, const Csr& csr, Var x);

// Inverted dropout. Identity when rate == 0.
Var dropout(Var x, double rate, std::mt19937_64& rng);

Var concatCols(std::span<const Var> parts);
Var mean(std::span<const Var> parts);

// -sum_i weights[i] * log(max(probs(rows[i], labels[rows[i]]), clamp)).
// Probability rows must sum to 1 within 1e-6 and weights must be >= 0.
Var weightedCrossEntropy(Var probs, std::span<const int> labels,
                         std::span<const std::size_t> rows,
                         std::span<const double> weights, double clamp = 1e-12);

}  // namespace ad
}  // namespace gatcobo
