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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vpe {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfRange,
  kParseError,
  kSchemaViolation,
  kImageNotFound,
  kBackendUnavailable,
  kMalformedFixture,
  kUnknownKey,
  kCountMismatch,
  kUnknownDescription,
  kUndefined,
  kInsufficientData,
  kGenerationFailed,
  kIo,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kSchemaViolation: return "schema-violation";
    case ErrorCode::kImageNotFound: return "image-not-found";
    case ErrorCode::kBackendUnavailable: return "backend-unavailable";
    case ErrorCode::kMalformedFixture: return "malformed-fixture";
    case ErrorCode::kUnknownKey: return "unknown-key";
    case ErrorCode::kCountMismatch: return "count-mismatch";
    case ErrorCode::kUnknownDescription: return "unknown-description";
    case ErrorCode::kUndefined: return "undefined";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kGenerationFailed: return "generation-failed";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown-error";
}

/// Base exception for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column)
      : Error(ErrorCode::kParseError,
              std::to_string(line) + ":" + std::to_string(column) + ": " +
                  message),
        detail_(std::move(message)),
        line_(line),
        column_(column) {}

  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace vpe
