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

#include "gatcobo/cost_boost.hpp"

#include "gatcobo/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>

namespace gatcobo {

const char* costSchemeName(CostScheme scheme) {
  switch (scheme) {
    case CostScheme::kUniform: return "uniform";
    case CostScheme::kInverse: return "inverse";
    case CostScheme::kLog1p: return "log1p";
    case CostScheme::kExplicit: return "explicit";
  }
  return "unknown";
}

CostScheme parseCostScheme(const std::string& name) {
  if (name == "uniform" || name == "uni") return CostScheme::kUniform;
  if (name == "inverse" || name == "inv") return CostScheme::kInverse;
  if (name == "log1p" || name == "log") return CostScheme::kLog1p;
  if (name == "explicit") return CostScheme::kExplicit;
  throw ConfigError("unknown cost scheme '" + name + "'");
}

const char* labelCodingName(LabelCoding coding) {
  return coding == LabelCoding::kSamme ? "samme" : "onehot";
}

LabelCoding parseLabelCoding(const std::string& name) {
  if (name == "samme") return LabelCoding::kSamme;
  if (name == "onehot") return LabelCoding::kOneHot;
  throw ConfigError("unknown label coding '" + name + "' (expected samme or onehot)");
}

bool CostMatrix::satisfiesRowDominance() const {
  const std::size_t k = numClasses();
  for (std::size_t m = 0; m < k; ++m) {
    for (std::size_t n = 0; n < k; ++n) {
      if (m == n) continue;
      bool all_greater = true;
      for (std::size_t j = 0; j < k && all_greater; ++j)
        all_greater = values(m, j) > values(n, j);
      if (all_greater) return false;
    }
  }
  return true;
}

void CostMatrix::validate() const {
  if (values.rows() == 0 || values.rows() != values.cols()) {
    throw ConfigError("cost matrix must be square and nonempty, got " + values.shapeString());
  }
  for (double v : values.values()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigError("cost matrix entries must be finite and nonnegative");
    }
  }
  if (scheme == CostScheme::kExplicit && !satisfiesRowDominance()) {
    throw ConfigError("explicit cost matrix has a row that dominates another in every column");
  }
}

CostMatrix CostMatrix::fromJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cost matrix document is not valid JSON: ") + e.what());
  }
  CostMatrix c;
  c.scheme = parseCostScheme(doc.value("scheme", std::string("explicit")));
  if (!doc.contains("matrix") || !doc["matrix"].is_array()) {
    throw ConfigError("cost matrix document needs a 'matrix' array");
  }
  std::vector<std::vector<double>> rows;
  try {
    rows = doc["matrix"].get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cost matrix rows must be numeric arrays: ") + e.what());
  }
  try {
    c.values = Matrix::fromRows(rows);
  } catch (const DimensionError& e) {
    throw ConfigError(std::string("cost matrix: ") + e.what());
  }
  c.validate();
  return c;
}

std::string CostMatrix::toJson() const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < values.rows(); ++i)
    rows.push_back(std::vector<double>(values.row(i).begin(), values.row(i).end()));
  return nlohmann::json{{"scheme", costSchemeName(scheme)}, {"matrix", rows}}.dump();
}

CostMatrix buildCostMatrix(std::span<const std::size_t> counts, CostScheme scheme) {
  if (counts.empty()) throw ContractError("cost matrix for zero classes");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) {
      throw ContractError("class " + std::to_string(i) + " has zero samples; cost undefined");
    }
  }
  if (scheme == CostScheme::kExplicit) {
    throw ContractError("explicit cost matrices are loaded, not built from counts");
  }
  const std::size_t k = counts.size();
  CostMatrix c;
  c.scheme = scheme;
  c.values = Matrix(k, k, 1.0);
  if (scheme == CostScheme::kUniform) return c;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double ratio = static_cast<double>(counts[j]) / static_cast<double>(counts[i]);
      c.values(i, j) = scheme == CostScheme::kInverse ? ratio : std::log1p(ratio);
    }
  }
  return c;
}

std::size_t argmax(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < row.size(); ++k)
    if (row[k] > row[best]) best = k;
  return best;
}

Matrix sammeTransform(const Matrix& p, double clamp) {
  const std::size_t k = p.cols();
  Matrix h(p.rows(), k);
  if (k == 0) return h;
  const double km1 = static_cast<double>(k) - 1.0;
  std::vector<double> logs(k);
  for (std::size_t r = 0; r < p.rows(); ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      logs[c] = std::log(std::max(p(r, c), clamp));
      mean += logs[c];
    }
    mean /= static_cast<double>(k);
    for (std::size_t c = 0; c < k; ++c) h(r, c) = km1 * (logs[c] - mean);
  }
  return h;
}

double misclassificationCost(std::span<const double> h_row, int true_label,
                             const CostMatrix& costs) {
  if (true_label < 0 || static_cast<std::size_t>(true_label) >= costs.numClasses()) {
    throw ContractError("label " + std::to_string(true_label) + " outside the cost matrix");
  }
  return costs(static_cast<std::size_t>(true_label), argmax(h_row));
}

double weightMultiplier(std::span<const double> p_row, int true_label, double cost,
                        LabelCoding coding, double clamp) {
  const std::size_t k = p_row.size();
  const double kd = static_cast<double>(k);
  const double off = coding == LabelCoding::kSamme ? -1.0 / (kd - 1.0) : 0.0;
  double dot = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double y = static_cast<int>(c) == true_label ? 1.0 : off;
    dot += y * std::log(std::max(p_row[c], clamp));
  }
  return std::exp(-((kd - 1.0) / kd) * cost * dot);
}

WeightUpdate updateWeights(std::span<const double> weights, const Matrix& p,
                           std::span<const int> labels, std::span<const std::size_t> rows,
                           std::span<const double> costs, LabelCoding coding, double clamp) {
  if (weights.size() != rows.size() || costs.size() != rows.size()) {
    throw DimensionError("weights, costs and rows must align");
  }
  WeightUpdate out;
  out.weights.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t v = rows[i];
    out.weights[i] = weights[i] * weightMultiplier(p.row(v), labels[v], costs[i], coding, clamp);
    out.Z += out.weights[i];
  }
  if (!(out.Z > 0.0) || !std::isfinite(out.Z)) {
    throw TrainingError("sample weights degenerated (sum " + std::to_string(out.Z) +
                        ") during the boosting update");
  }
  for (double& w : out.weights) w /= out.Z;
  return out;
}

EnsembleDecision ensembleDecision(std::span<const Matrix> stage_scores) {
  if (stage_scores.empty()) throw ContractError("ensemble decision needs at least one stage");
  EnsembleDecision d;
  d.scores = stage_scores.front();
  for (std::size_t l = 1; l < stage_scores.size(); ++l) {
    if (!stage_scores[l].sameShape(d.scores)) {
      throw DimensionError("stage score shapes differ: " + stage_scores[l].shapeString() +
                           " vs " + d.scores.shapeString());
    }
    for (std::size_t k = 0; k < d.scores.size(); ++k) d.scores[k] += stage_scores[l][k];
  }
  d.labels.resize(d.scores.rows());
  for (std::size_t r = 0; r < d.scores.rows(); ++r)
    d.labels[r] = static_cast<int>(argmax(d.scores.row(r)));
  return d;
}

BoundReport verifyBound(std::span<const int> truth, std::span<const int> decision,
                        std::span<const double> costs, std::span<const double> final_weights,
                        std::span<const double> z, int num_classes) {
  const std::size_t n = truth.size();
  if (decision.size() != n || costs.size() != n || final_weights.size() != n) {
    throw DimensionError("bound inputs must align with the training nodes");
  }
  BoundReport r;
  r.n = n;
  r.num_classes = num_classes;
  r.num_stages = z.size();
  const double power = static_cast<double>(r.num_stages) - 1.0;
  for (double zl : z) r.prod_z *= zl;
  for (std::size_t i = 0; i < n; ++i) {
    if (costs[i] == 0.0 && r.num_stages >= 2) {
      ++r.excluded;
      continue;
    }
    if (decision[i] != truth[i]) {
      ++r.misclassified;
      r.lhs += costs[i];
    }
    r.d += final_weights[i] / std::pow(costs[i], power);
  }
  r.rhs = static_cast<double>(n) * std::pow(static_cast<double>(num_classes),
                                            static_cast<double>(r.num_stages)) *
          r.d * r.prod_z;
  r.holds = r.lhs <= r.rhs;
  return r;
}

std::string BoundReport::toJson() const {
  return nlohmann::json{{"lhs", lhs},
                        {"rhs", rhs},
                        {"holds", holds},
                        {"slack", slack()},
                        {"d", d},
                        {"prod_z", prod_z},
                        {"n", n},
                        {"num_classes", num_classes},
                        {"num_stages", num_stages},
                        {"misclassified", misclassified},
                        {"excluded", excluded},
                        {"cost_binding", cost_binding}}
      .dump();
}

}  // namespace gatcobo
