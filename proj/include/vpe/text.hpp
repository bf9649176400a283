// Copyright 2026 The vpe Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vpe::text {

std::string_view trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char delim);

/// Unicode compatibility fold + case fold, punctuation mapped to spaces,
/// whitespace collapsed and trimmed. Invalid UTF-8 is replaced, never thrown.
std::string normalize(std::string_view s);

/// ASCII lowercase with whitespace collapsed; used for matching object
/// descriptions.
std::string fold_label(std::string_view s);

/// Splits normalized text into words.
std::vector<std::string> words(std::string_view s);

}  // namespace vpe::text
