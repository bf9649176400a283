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

#include "vpe/eval_dsl.hpp"

#include <array>
#include <set>
#include <utility>

#include "vpe/error.hpp"
#include "vpe/relations.hpp"
#include "vpe/text.hpp"

namespace vpe::dsl {
namespace {

constexpr std::array<std::pair<std::string_view, Module>, 6> kModules = {{
    {"objectEval", Module::kObjectEval},
    {"countEval", Module::kCountEval},
    {"spatialEval", Module::kSpatialEval},
    {"scaleEval", Module::kScaleEval},
    {"textEval", Module::kTextEval},
    {"vqa", Module::kVqa},
}};

enum class Tok { kIdent, kString, kLParen, kRParen, kComma, kSep, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  Span span;
};

std::string_view tok_name(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kString: return "string";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kComma: return "','";
    case Tok::kSep: return "statement separator";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
    Token tok;
    tok.span = here();
    if (pos_ >= src_.size()) return tok;
    const char c = src_[pos_];
    switch (c) {
      case '(': return single(Tok::kLParen);
      case ')': return single(Tok::kRParen);
      case ',': return single(Tok::kComma);
      case ';':
      case '\n': return single(Tok::kSep);
      case '\'': return string_literal();
      default: break;
    }
    if (ident_start(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
      tok.kind = Tok::kIdent;
      tok.span.length = pos_ - tok.span.offset;
      tok.text = std::string(src_.substr(tok.span.offset, tok.span.length));
      return tok;
    }
    std::string shown;
    const auto uc = static_cast<unsigned char>(c);
    if (uc >= 0x20 && uc < 0x7f) {
      shown = std::string("'") + c + "'";
    } else {
      static constexpr char kHex[] = "0123456789abcdef";
      shown = std::string("byte 0x") + kHex[uc >> 4] + kHex[uc & 15];
    }
    throw ParseError("unexpected character " + shown, tok.span.line, tok.span.column);
  }

 private:
  Span here() const { return {pos_, 0, line_, col_}; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token single(Tok kind) {
    Token tok;
    tok.kind = kind;
    tok.span = here();
    tok.span.length = 1;
    tok.text = std::string(1, src_[pos_]);
    advance();
    return tok;
  }

  Token string_literal() {
    Token tok;
    tok.kind = Tok::kString;
    tok.span = here();
    advance();
    while (true) {
      if (pos_ >= src_.size()) {
        throw ParseError("unterminated string", tok.span.line, tok.span.column);
      }
      const char c = src_[pos_];
      if (c == '\'') {
        if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '\'') {
          tok.text.push_back('\'');
          advance();
          advance();
          continue;
        }
        advance();
        break;
      }
      tok.text.push_back(c);
      advance();
    }
    tok.span.length = pos_ - tok.span.offset;
    return tok;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  EvalProgram program(std::string_view src) {
    EvalProgram p;
    p.source = std::string(src);
    while (true) {
      while (tok_.kind == Tok::kSep) shift();
      if (tok_.kind == Tok::kEnd) break;
      p.calls.push_back(statement());
      if (tok_.kind != Tok::kSep && tok_.kind != Tok::kEnd) {
        error("expected ';' or newline after statement, got " + describe(tok_));
      }
    }
    if (p.calls.empty()) error("empty program");
    return p;
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  [[noreturn]] void error(const std::string& msg) const {
    throw ParseError(msg, tok_.span.line, tok_.span.column);
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::kIdent) return "identifier '" + t.text + "'";
    return std::string(tok_name(t.kind));
  }

  void expect(Tok kind) {
    if (tok_.kind != kind) {
      error("expected " + std::string(tok_name(kind)) + ", got " + describe(tok_));
    }
    shift();
  }

  ModuleCall statement() {
    if (tok_.kind != Tok::kIdent) error("expected module name, got " + describe(tok_));
    ModuleCall call;
    call.span = tok_.span;
    const auto module = module_from_name(tok_.text);
    if (!module) error("unknown module '" + tok_.text + "'");
    call.module = *module;
    shift();
    expect(Tok::kLParen);
    while (true) {
      call.args.push_back(argument(call.args.empty()));
      if (tok_.kind == Tok::kComma) {
        shift();
        continue;
      }
      if (tok_.kind == Tok::kRParen) break;
      error("expected ',' or ')', got " + describe(tok_));
    }
    const std::size_t expected = module_arity(call.module);
    if (call.args.size() != expected) {
      error(std::string(module_name(call.module)) + " expects " + std::to_string(expected) +
            " arguments, got " + std::to_string(call.args.size()));
    }
    call.span.length = tok_.span.offset + 1 - call.span.offset;
    shift();
    return call;
  }

  Arg argument(bool first) {
    if (tok_.kind == Tok::kIdent && tok_.text == "img") {
      if (!first) error("img is only allowed as the first argument");
      shift();
      return Arg::img();
    }
    if (first) error("first argument must be img, got " + describe(tok_));
    if (tok_.kind != Tok::kString) error("expected string literal, got " + describe(tok_));
    Arg a = Arg::str(tok_.text);
    shift();
    return a;
  }

  Lexer lexer_;
  Token tok_;
};

}  // namespace

std::string_view module_name(Module m) {
  for (const auto& [name, mod] : kModules) {
    if (mod == m) return name;
  }
  return "";
}

std::optional<Module> module_from_name(std::string_view name) {
  for (const auto& [n, mod] : kModules) {
    if (n == name) return mod;
  }
  return std::nullopt;
}

std::size_t module_arity(Module m) {
  switch (m) {
    case Module::kObjectEval: return 2;
    case Module::kCountEval: return 3;
    case Module::kSpatialEval: return 4;
    case Module::kScaleEval: return 4;
    case Module::kTextEval: return 2;
    case Module::kVqa: return 4;
  }
  return 0;
}

EvalProgram parse_program(std::string_view source) {
  Parser parser(source);
  return parser.program(source);
}

std::string quote(std::string_view s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') out += "''";
    else out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string print_call(const ModuleCall& call) {
  std::string out(module_name(call.module));
  out.push_back('(');
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i > 0) out += ", ";
    const Arg& a = call.args[i];
    out += a.kind == Arg::Kind::kImg ? std::string("img") : quote(a.value);
  }
  out.push_back(')');
  return out;
}

std::string print_program(const EvalProgram& program) {
  std::string out;
  for (std::size_t i = 0; i < program.calls.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += print_call(program.calls[i]);
  }
  return out;
}

std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::kInfo: return "info";
    case Severity::kWarning: return "warning";
    case Severity::kError: return "error";
  }
  return "";
}

std::vector<Diagnostic> validate_semantics(const EvalProgram& program) {
  std::vector<Diagnostic> out;
  for (std::size_t i = 0; i < program.calls.size(); ++i) {
    const ModuleCall& call = program.calls[i];
    const auto add = [&](Severity sev, std::string code, std::string msg) {
      out.push_back({sev, std::move(code), std::move(msg), i, call.span});
    };
    const std::string_view name = module_name(call.module);
    for (std::size_t a = 1; a < call.args.size(); ++a) {
      if (text::trim(call.arg(a)).empty()) {
        add(Severity::kError, "empty-argument",
            std::string(name) + " argument " + std::to_string(a + 1) + " is empty");
      }
    }
    switch (call.module) {
      case Module::kCountEval:
        if (!parse_count_expr(call.arg(2))) {
          add(Severity::kError, "bad-count-expr",
              "countEval expression '" + call.arg(2) + "' is not (op)? INT");
        }
        break;
      case Module::kSpatialEval:
        if (!parse_spatial_relation(call.arg(3))) {
          add(Severity::kInfo, "vqa-fallback",
              "spatial relation '" + call.arg(3) + "' is answered by vqa");
        }
        break;
      case Module::kScaleEval:
        if (!parse_scale_relation(call.arg(3))) {
          add(Severity::kInfo, "vqa-fallback",
              "scale relation '" + call.arg(3) + "' is answered by vqa");
        }
        break;
      case Module::kVqa: {
        const auto choices = split_choices(call.arg(2));
        std::set<std::string> seen;
        bool ok = choices.size() >= 2;
        for (const auto& c : choices) {
          const std::string n = text::normalize(c);
          if (n.empty() || !seen.insert(n).second) ok = false;
        }
        if (!ok) {
          add(Severity::kError, "vqa-bad-choices",
              "vqa choices '" + call.arg(2) + "' need >= 2 distinct non-empty options");
        } else if (!seen.contains(text::normalize(call.arg(3)))) {
          add(Severity::kError, "vqa-answer-not-in-choices",
              "vqa expected answer '" + call.arg(3) + "' is not among '" + call.arg(2) + "'");
        }
        break;
      }
      case Module::kObjectEval:
      case Module::kTextEval:
        break;
    }
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Severity::kError) return true;
  }
  return false;
}

}  // namespace vpe::dsl
