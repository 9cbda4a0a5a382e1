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

#include "gatcobo/cost_boost.hpp"

#include "json.hpp"

#include <string>

namespace gatcobo {

inline constexpr int kCheckpointVersion = 1;

nlohmann::json gatConfigToJson(const GatConfig& config);
GatConfig gatConfigFromJson(const nlohmann::json& j);

// JSON document with the config, cost matrix, every parameter array, each
// stage's Omega on its support, Z_l, and the boosting trace. Doubles are
// written in shortest round-trip form, so save then load is bit-exact.
std::string serializeModel(const EnsembleModel& model);
EnsembleModel deserializeModel(const std::string& text);

void saveModel(const EnsembleModel& model, const std::string& path);
// Throws DataError for unreadable, malformed or wrong-version files.
EnsembleModel loadModel(const std::string& path);

}  // namespace gatcobo
