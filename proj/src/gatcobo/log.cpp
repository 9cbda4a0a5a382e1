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

#include "gatcobo/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace gatcobo {
namespace {

std::mutex& sinkMutex() {
  static std::mutex m;
  return m;
}

void toStderr(std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }

WarningSink& sink() {
  static WarningSink s = toStderr;
  return s;
}

}  // namespace

void setWarningSink(WarningSink s) {
  std::lock_guard lock(sinkMutex());
  sink() = s ? std::move(s) : WarningSink(toStderr);
}

void warn(const std::string& message) {
  std::lock_guard lock(sinkMutex());
  if (sink()) sink()(message);
}

}  // namespace gatcobo
