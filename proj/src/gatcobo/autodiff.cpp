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

#include "gatcobo/autodiff.hpp"

#include "gatcobo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace gatcobo {

Tensor::Tensor(Matrix value, bool requires_grad)
    : value_(std::move(value)), requires_grad_(requires_grad) {
  grad_ = Matrix(value_.rows(), value_.cols());
}

const Matrix& Var::value() const { return tape->value(*this); }

Var Tape::constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Tape::watch(Tensor& tensor) {
  Node n;
  n.value = tensor.value();
  n.needs_grad = tensor.requiresGrad();
  n.bound = tensor.requiresGrad() ? &tensor : nullptr;
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Tape::record(Matrix value, std::span<const Var> parents, BackwardFn backward) {
  Node n;
  n.value = std::move(value);
  for (const Var& p : parents) {
    if (p.tape != this) throw ContractError("operand recorded on a different tape");
    n.needs_grad = n.needs_grad || nodes_[p.id].needs_grad;
  }
  if (n.needs_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Matrix* Tape::gradSlot(Var v) {
  Node& n = nodes_[v.id];
  if (!n.needs_grad) return nullptr;
  if (n.adjoint.rows() != n.value.rows() || n.adjoint.cols() != n.value.cols() ||
      n.adjoint.size() != n.value.size()) {
    n.adjoint = Matrix(n.value.rows(), n.value.cols());
  }
  return &n.adjoint;
}

void Tape::backward(Var loss) {
  if (loss.tape != this) throw ContractError("backward on a foreign tape");
  const Matrix& lv = nodes_[loss.id].value;
  if (lv.rows() != 1 || lv.cols() != 1) {
    throw ContractError("backward requires a scalar loss, got " + lv.shapeString());
  }
  for (Node& n : nodes_) n.adjoint = Matrix();
  if (!nodes_[loss.id].needs_grad) return;
  nodes_[loss.id].adjoint = Matrix(1, 1, 1.0);

  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.needs_grad || n.adjoint.empty()) continue;
    if (n.bound != nullptr) {
      Matrix& g = n.bound->grad();
      for (std::size_t k = 0; k < g.size(); ++k) g[k] += n.adjoint[k];
    }
    if (n.backward) n.backward(*this, n.value, n.adjoint);
  }
}

namespace ad {
namespace {

void requireSameShape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.sameShape(b)) {
    throw DimensionError(std::string(op) + " shape mismatch: " + a.shapeString() + " vs " +
                         b.shapeString());
  }
}

template <typename F, typename G>
Var elementwise(Var x, F f, G dfdx) {
  const Matrix& xv = x.value();
  Matrix out(xv.rows(), xv.cols());
  for (std::size_t k = 0; k < xv.size(); ++k) out[k] = f(xv[k]);
  const Var parents[] = {x};
  return x.tape->record(std::move(out), parents, [x, dfdx](Tape& t, const Matrix&, const Matrix& g) {
    Matrix* gx = t.gradSlot(x);
    if (gx == nullptr) return;
    const Matrix& xv = t.value(x);
    for (std::size_t k = 0; k < g.size(); ++k) (*gx)[k] += g[k] * dfdx(xv[k]);
  });
}

// y_k * (g_k - sum_j g_j y_j) over one softmax group, given as a span of indices
// into the flat arrays.
template <typename Range>
void softmaxGroupBackward(const Range& idx, const Matrix& y, const Matrix& g, Matrix& gx) {
  double dot = 0.0;
  for (std::size_t k : idx) dot += g[k] * y[k];
  for (std::size_t k : idx) gx[k] += y[k] * (g[k] - dot);
}

}  // namespace

Var matmul(Var a, Var b) {
  Matrix out = gatcobo::matmul(a.value(), b.value());
  const Var parents[] = {a, b};
  return a.tape->record(std::move(out), parents, [a, b](Tape& t, const Matrix&, const Matrix& g) {
    if (Matrix* ga = t.gradSlot(a)) {
      const Matrix d = matmulTransB(g, t.value(b));
      for (std::size_t k = 0; k < d.size(); ++k) (*ga)[k] += d[k];
    }
    if (Matrix* gb = t.gradSlot(b)) {
      const Matrix d = matmulTransA(t.value(a), g);
      for (std::size_t k = 0; k < d.size(); ++k) (*gb)[k] += d[k];
    }
  });
}

Var add(Var a, Var b) {
  requireSameShape(a.value(), b.value(), "add");
  Matrix out = a.value();
  const Matrix& bv = b.value();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += bv[k];
  const Var parents[] = {a, b};
  return a.tape->record(std::move(out), parents, [a, b](Tape& t, const Matrix&, const Matrix& g) {
    for (Var v : {a, b}) {
      if (Matrix* gv = t.gradSlot(v))
        for (std::size_t k = 0; k < g.size(); ++k) (*gv)[k] += g[k];
    }
  });
}

Var scale(Var a, double factor) {
  Matrix out = a.value();
  for (double& v : out.values()) v *= factor;
  const Var parents[] = {a};
  return a.tape->record(std::move(out), parents, [a, factor](Tape& t, const Matrix&, const Matrix& g) {
    if (Matrix* ga = t.gradSlot(a))
      for (std::size_t k = 0; k < g.size(); ++k) (*ga)[k] += factor * g[k];
  });
}

Var hadamard(Var a, Var b) {
  requireSameShape(a.value(), b.value(), "hadamard");
  Matrix out = a.value();
  const Matrix& bv = b.value();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= bv[k];
  const Var parents[] = {a, b};
  return a.tape->record(std::move(out), parents, [a, b](Tape& t, const Matrix&, const Matrix& g) {
    const Matrix& av = t.value(a);
    const Matrix& bv = t.value(b);
    if (Matrix* ga = t.gradSlot(a))
      for (std::size_t k = 0; k < g.size(); ++k) (*ga)[k] += g[k] * bv[k];
    if (Matrix* gb = t.gradSlot(b))
      for (std::size_t k = 0; k < g.size(); ++k) (*gb)[k] += g[k] * av[k];
  });
}

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value().values()) s += v;
  const Var parents[] = {a};
  return a.tape->record(Matrix(1, 1, s), parents, [a](Tape& t, const Matrix&, const Matrix& g) {
    if (Matrix* ga = t.gradSlot(a))
      for (double& v : ga->values()) v += g[0];
  });
}

Var leakyRelu(Var x, double slope) {
  return elementwise(
      x, [slope](double v) { return v > 0.0 ? v : slope * v; },
      [slope](double v) { return v > 0.0 ? 1.0 : slope; });
}

Var elu(Var x, double alpha) {
  return elementwise(
      x, [alpha](double v) { return v > 0.0 ? v : alpha * std::expm1(v); },
      [alpha](double v) { return v > 0.0 ? 1.0 : alpha * std::exp(v); });
}

Var relu(Var x) {
  return elementwise(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v) { return v > 0.0 ? 1.0 : 0.0; });
}

Var log(Var x) {
  for (double v : x.value().values()) {
    if (!(v > 0.0)) throw DomainError("log of nonpositive value " + std::to_string(v));
  }
  return elementwise(
      x, [](double v) { return std::log(v); }, [](double v) { return 1.0 / v; });
}

Var softmaxRows(Var logits) {
  const Matrix& z = logits.value();
  Matrix y(z.rows(), z.cols());
  for (std::size_t r = 0; r < z.rows(); ++r) {
    const auto in = z.row(r);
    auto out = y.row(r);
    const double m = *std::max_element(in.begin(), in.end());
    double s = 0.0;
    for (std::size_t c = 0; c < in.size(); ++c) s += out[c] = std::exp(in[c] - m);
    for (double& v : out) v /= s;
  }
  const Var parents[] = {logits};
  return logits.tape->record(
      std::move(y), parents, [logits](Tape& t, const Matrix& y, const Matrix& g) {
        Matrix* gx = t.gradSlot(logits);
        if (gx == nullptr) return;
        const std::size_t cols = y.cols();
        std::vector<std::size_t> idx(cols);
        for (std::size_t r = 0; r < y.rows(); ++r) {
          for (std::size_t c = 0; c < cols; ++c) idx[c] = r * cols + c;
          softmaxGroupBackward(idx, y, g, *gx);
        }
      });
}

Var rowSoftmaxMasked(Var logits, std::span<const unsigned char> mask,
                     std::span<const unsigned char> row_used) {
  const Matrix& z = logits.value();
  if (mask.size() != z.size()) {
    throw DimensionError("mask of length " + std::to_string(mask.size()) +
                         " does not match logits " + z.shapeString());
  }
  if (!row_used.empty() && row_used.size() != z.rows()) {
    throw DimensionError("row_used length does not match logits rows");
  }
  Matrix y(z.rows(), z.cols());
  for (std::size_t r = 0; r < z.rows(); ++r) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < z.cols(); ++c)
      if (mask[r * z.cols() + c]) m = std::max(m, z(r, c));
    if (m == -std::numeric_limits<double>::infinity()) {
      if (row_used.empty() || row_used[r]) {
        throw DegenerateRowError("row " + std::to_string(r) +
                                 " has no admissible entry for softmax");
      }
      continue;
    }
    double s = 0.0;
    for (std::size_t c = 0; c < z.cols(); ++c)
      if (mask[r * z.cols() + c]) s += y(r, c) = std::exp(z(r, c) - m);
    for (std::size_t c = 0; c < z.cols(); ++c) y(r, c) /= s;
  }
  const Var parents[] = {logits};
  return logits.tape->record(
      std::move(y), parents, [logits](Tape& t, const Matrix& y, const Matrix& g) {
        Matrix* gx = t.gradSlot(logits);
        if (gx == nullptr) return;
        const std::size_t cols = y.cols();
        std::vector<std::size_t> idx(cols);
        for (std::size_t r = 0; r < y.rows(); ++r) {
          for (std::size_t c = 0; c < cols; ++c) idx[c] = r * cols + c;
          softmaxGroupBackward(idx, y, g, *gx);
        }
      });
}

Var edgeLogits(Var src_score, Var dst_score, const Csr& csr) {
  const Matrix& s = src_score.value();
  const Matrix& d = dst_score.value();
  if (s.rows() != csr.numNodes() || d.rows() != csr.numNodes() || s.cols() != 1 ||
      d.cols() != 1) {
    throw DimensionError("edgeLogits expects two (" + std::to_string(csr.numNodes()) +
                         "x1) scores, got " + s.shapeString() + " and " + d.shapeString());
  }
  Matrix e(csr.numEntries(), 1);
  for (std::size_t k = 0; k < csr.numEntries(); ++k)
    e[k] = s[csr.sources[k]] + d[csr.targets[k]];
  const Var parents[] = {src_score, dst_score};
  return src_score.tape->record(
      std::move(e), parents,
      [src_score, dst_score, &csr](Tape& t, const Matrix&, const Matrix& g) {
        if (Matrix* gs = t.gradSlot(src_score))
          for (std::size_t k = 0; k < g.size(); ++k) (*gs)[csr.sources[k]] += g[k];
        if (Matrix* gd = t.gradSlot(dst_score))
          for (std::size_t k = 0; k < g.size(); ++k) (*gd)[csr.targets[k]] += g[k];
      });
}

Var edgeSoftmax(Var edge_logits, const Csr& csr) {
  const Matrix& e = edge_logits.value();
  if (e.rows() != csr.numEntries() || e.cols() != 1) {
    throw DimensionError("edgeSoftmax expects (" + std::to_string(csr.numEntries()) +
                         "x1) logits, got " + e.shapeString());
  }
  Matrix y(e.rows(), 1);
  for (std::size_t i = 0; i < csr.numNodes(); ++i) {
    const std::size_t b = csr.offsets[i], end = csr.offsets[i + 1];
    if (b == end) continue;
    double m = e[b];
    for (std::size_t k = b + 1; k < end; ++k) m = std::max(m, e[k]);
    double s = 0.0;
    for (std::size_t k = b; k < end; ++k) s += y[k] = std::exp(e[k] - m);
    for (std::size_t k = b; k < end; ++k) y[k] /= s;
  }
  const Var parents[] = {edge_logits};
  return edge_logits.tape->record(
      std::move(y), parents, [edge_logits, &csr](Tape& t, const Matrix& y, const Matrix& g) {
        Matrix* gx = t.gradSlot(edge_logits);
        if (gx == nullptr) return;
        for (std::size_t i = 0; i < csr.numNodes(); ++i) {
          const std::size_t b = csr.offsets[i], end = csr.offsets[i + 1];
          double dot = 0.0;
          for (std::size_t k = b; k < end; ++k) dot += g[k] * y[k];
          for (std::size_t k = b; k < end; ++k) (*gx)[k] += y[k] * (g[k] - dot);
        }
      });
}

Var spmm(Var edge_weights, const Csr& csr, Var x) {
  const Matrix& w = edge_weights.value();
  const Matrix& xv = x.value();
  if (w.rows() != csr.numEntries() || w.cols() != 1) {
    throw DimensionError("spmm expects (" + std::to_string(csr.numEntries()) +
                         "x1) edge weights, got " + w.shapeString());
  }
  if (xv.rows() != csr.numNodes()) {
    throw DimensionError("spmm operand " + xv.shapeString() + " does not have " +
                         std::to_string(csr.numNodes()) + " rows");
  }
  const std::size_t f = xv.cols();
  Matrix out(csr.numNodes(), f);
  for (std::size_t k = 0; k < csr.numEntries(); ++k) {
    const double wk = w[k];
    const double* src = xv.data() + csr.targets[k] * f;
    double* dst = out.data() + csr.sources[k] * f;
    for (std::size_t c = 0; c < f; ++c) dst[c] += wk * src[c];
  }
  const Var parents[] = {edge_weights, x};
  return x.tape->record(
      std::move(out), parents, [edge_weights, x, &csr](Tape& t, const Matrix&, const Matrix& g) {
        const Matrix& w = t.value(edge_weights);
        const Matrix& xv = t.value(x);
        const std::size_t f = xv.cols();
        if (Matrix* gw = t.gradSlot(edge_weights)) {
          for (std::size_t k = 0; k < csr.numEntries(); ++k) {
            const double* gi = g.data() + csr.sources[k] * f;
            const double* xj = xv.data() + csr.targets[k] * f;
            double s = 0.0;
            for (std::size_t c = 0; c < f; ++c) s += gi[c] * xj[c];
            (*gw)[k] += s;
          }
        }
        if (Matrix* gx = t.gradSlot(x)) {
          for (std::size_t k = 0; k < csr.numEntries(); ++k) {
            const double wk = w[k];
            const double* gi = g.data() + csr.sources[k] * f;
            double* gj = gx->data() + csr.targets[k] * f;
            for (std::size_t c = 0; c < f; ++c) gj[c] += wk * gi[c];
          }
        }
      });
}

Var dropout(Var x, double rate, std::mt19937_64& rng) {
  if (rate < 0.0 || rate >= 1.0) throw ContractError("dropout rate must lie in [0, 1)");
  if (rate == 0.0) return x;
  const Matrix& xv = x.value();
  Matrix mask(xv.rows(), xv.cols());
  std::bernoulli_distribution keep(1.0 - rate);
  const double s = 1.0 / (1.0 - rate);
  for (double& m : mask.values()) m = keep(rng) ? s : 0.0;
  Var m = x.tape->constant(std::move(mask));
  return hadamard(x, m);
}

Var concatCols(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concatCols of nothing");
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const Var& p : parts) {
    if (p.rows() != rows) throw DimensionError("concatCols row mismatch");
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::size_t off = 0;
  for (const Var& p : parts) {
    const Matrix& v = p.value();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < v.cols(); ++c) out(r, off + c) = v(r, c);
    off += v.cols();
  }
  std::vector<Var> ps(parts.begin(), parts.end());
  return parts.front().tape->record(
      std::move(out), parts, [ps](Tape& t, const Matrix&, const Matrix& g) {
        std::size_t off = 0;
        for (const Var& p : ps) {
          const std::size_t pc = t.value(p).cols();
          if (Matrix* gp = t.gradSlot(p)) {
            for (std::size_t r = 0; r < gp->rows(); ++r)
              for (std::size_t c = 0; c < pc; ++c) (*gp)(r, c) += g(r, off + c);
          }
          off += pc;
        }
      });
}

Var mean(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("mean of nothing");
  Matrix out = parts.front().value();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    requireSameShape(out, parts[i].value(), "mean");
    const Matrix& v = parts[i].value();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += v[k];
  }
  const double inv = 1.0 / static_cast<double>(parts.size());
  for (double& v : out.values()) v *= inv;
  std::vector<Var> ps(parts.begin(), parts.end());
  return parts.front().tape->record(
      std::move(out), parts, [ps, inv](Tape& t, const Matrix&, const Matrix& g) {
        for (const Var& p : ps)
          if (Matrix* gp = t.gradSlot(p))
            for (std::size_t k = 0; k < g.size(); ++k) (*gp)[k] += inv * g[k];
      });
}

Var weightedCrossEntropy(Var probs, std::span<const int> labels,
                         std::span<const std::size_t> rows, std::span<const double> weights,
                         double clamp) {
  const Matrix& p = probs.value();
  if (rows.size() != weights.size()) {
    throw DimensionError("weightedCrossEntropy: " + std::to_string(rows.size()) + " rows but " +
                         std::to_string(weights.size()) + " weights");
  }
  if (labels.size() != p.rows()) {
    throw DimensionError("weightedCrossEntropy: labels do not cover " + p.shapeString());
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    if (r >= p.rows()) throw DimensionError("weightedCrossEntropy: row out of range");
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= p.cols()) {
      throw ContractError("weightedCrossEntropy: node " + std::to_string(r) +
                          " has no valid label");
    }
    if (weights[i] < 0.0) throw ContractError("weightedCrossEntropy: negative sample weight");
    double s = 0.0;
    for (double v : p.row(r)) s += v;
    if (std::abs(s - 1.0) > 1e-6) {
      throw ContractError("weightedCrossEntropy: probability row " + std::to_string(r) +
                          " sums to " + std::to_string(s));
    }
    loss -= weights[i] * std::log(std::max(p(r, static_cast<std::size_t>(y)), clamp));
  }
  std::vector<std::size_t> rs(rows.begin(), rows.end());
  std::vector<double> ws(weights.begin(), weights.end());
  std::vector<int> ls(labels.begin(), labels.end());
  const Var parents[] = {probs};
  return probs.tape->record(
      Matrix(1, 1, loss), parents,
      [probs, rs = std::move(rs), ws = std::move(ws), ls = std::move(ls), clamp](
          Tape& t, const Matrix&, const Matrix& g) {
        Matrix* gp = t.gradSlot(probs);
        if (gp == nullptr) return;
        const Matrix& p = t.value(probs);
        for (std::size_t i = 0; i < rs.size(); ++i) {
          const std::size_t c = static_cast<std::size_t>(ls[rs[i]]);
          const double pv = p(rs[i], c);
          if (pv > clamp) (*gp)(rs[i], c) -= g[0] * ws[i] / pv;
        }
      });
}

}  // namespace ad
}  // namespace gatcobo
