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

#include <functional>
#include <string>
#include <string_view>

namespace gatcobo {

// Library warnings (zero-support classes, tiny strata, ...) go through a single
// process-wide sink. The default sink writes to stderr.
using WarningSink = std::function<void(std::string_view)>;

// An empty sink restores the default, which writes to stderr.
void setWarningSink(WarningSink sink);
void warn(const std::string& message);

}  // namespace gatcobo
