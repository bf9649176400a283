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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Straight-line evaluation programs:
//
//   program := sep* stmt (sep+ stmt)* sep*      sep := ';' | NEWLINE
//   stmt    := IDENT '(' arg (',' arg)* ')'
//   arg     := 'img' | STRING                   STRING := '...' with '' escaping
//
// Module names and arities are checked while parsing, so an EvalProgram is
// always structurally executable.
namespace vpe::dsl {

enum class Module { kObjectEval, kCountEval, kSpatialEval, kScaleEval, kTextEval, kVqa };

std::string_view module_name(Module m);
std::optional<Module> module_from_name(std::string_view name);
// Total argument count including the leading img.
std::size_t module_arity(Module m);

struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Arg {
  enum class Kind { kImg, kString };
  Kind kind = Kind::kString;
  std::string value;

  static Arg img() { return {Kind::kImg, {}}; }
  static Arg str(std::string s) { return {Kind::kString, std::move(s)}; }

  bool operator==(const Arg&) const = default;
};

struct ModuleCall {
  Module module = Module::kObjectEval;
  std::vector<Arg> args;
  Span span;

  // String argument i (1-based past img, i.e. arg(1) is the first string).
  const std::string& arg(std::size_t i) const { return args.at(i).value; }

  // Spans are source metadata and do not take part in equality.
  bool operator==(const ModuleCall& o) const { return module == o.module && args == o.args; }
};

struct EvalProgram {
  std::vector<ModuleCall> calls;
  std::string source;

  bool operator==(const EvalProgram& o) const { return calls == o.calls; }
};

/// Throws ParseError with line/column on any malformed input; never crashes
/// on arbitrary bytes.
EvalProgram parse_program(std::string_view source);

std::string print_call(const ModuleCall& call);
/// Canonical text: one statement per line, ", " between arguments, single
/// quotes with '' escaping, no trailing newline.
std::string print_program(const EvalProgram& program);

std::string quote(std::string_view s);

enum class Severity { kInfo, kWarning, kError };
std::string_view severity_name(Severity s);

struct Diagnostic {
  Severity severity = Severity::kInfo;
  std::string code;
  std::string message;
  std::size_t statement = 0;
  Span span;
};

/// Semantic checks that the grammar cannot express. Returns an empty list
/// iff the program is fully clean (info diagnostics count as not clean).
std::vector<Diagnostic> validate_semantics(const EvalProgram& program);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace vpe::dsl
