// Copyright 2026 The cpgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Line-based pulse-sequence files (.pseq).
//
//   file      = { line }
//   line      = [ binding | statement ] [ "#" comment ] NEWLINE
//   binding   = IDENT "=" expr
//   statement = [ "&" ] "pulse" "target=" ("a"|"b") "levels=" INT "," INT
//                   "rabi=" expr "phase=" expr "dur=" expr [ "step=" IDENT ]
//             | "wait" "dur=" expr [ "step=" IDENT ]
//   expr      = term { ("+"|"-") term }
//   term      = unary { ("*"|"/") unary }
//   unary     = ("-"|"+") unary | primary
//   primary   = NUMBER | IDENT | "pi" | "(" expr ")"
//
// A pulse line prefixed with "&" runs simultaneously with the pulse before
// it (same segment, same duration). Identifiers ga, gb, delta_c, omega13,
// omega02 and omega12 are bound from GateParams unless the file rebinds
// them. Values are in units of g_b; bindings whose name ends in "_si" hold
// SI values (rad/s or s) and may not be mixed with natural-unit values.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cpgate/protocol.hpp"

namespace cpgate::pseq {

struct Expr {
    enum class Kind { number, identifier, pi, negate, add, subtract, multiply, divide };

    Kind kind = Kind::number;
    double value = 0.0;
    std::string name;
    std::vector<Expr> operands;
    int line = 0;
    int column = 0;
};

struct Binding {
    std::string name;
    Expr value;
    int line = 0;
};

struct PulseStatement {
    bool simultaneous = false;
    Squid target = Squid::a;
    LevelPair levels;
    Expr rabi;
    Expr phase;
    Expr duration;
    std::optional<std::string> step;
    int line = 0;
};

struct WaitStatement {
    Expr duration;
    std::optional<std::string> step;
    int line = 0;
};

using Statement = std::variant<PulseStatement, WaitStatement>;

struct SequenceAst {
    std::vector<Binding> bindings;
    std::vector<Statement> statements;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, std::string message, std::string token);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }
    const std::string& token() const noexcept { return token_; }

private:
    int line_;
    int column_;
    std::string message_;
    std::string token_;
};

class CompileError : public std::runtime_error {
public:
    CompileError(int line, std::string message);

    int line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

private:
    int line_;
    std::string message_;
};

/// Names bound implicitly from GateParams.
inline constexpr std::string_view kParameterNames[] = {"ga", "gb", "delta_c", "omega13", "omega02", "omega12"};

/// Single pass, first error wins. Lines and columns are 1-based.
SequenceAst parse(std::string_view source);

struct CompileOptions {
    double gb_si = 3.0e9;  ///< g_b in s^-1, used to convert `_si` values
};

Schedule compile(const SequenceAst& ast, const GateParams& params, const CompileOptions& options = {});

/// Text that parse + compile maps back to `schedule`; numbers carry 17
/// significant digits.
std::string serialize(const Schedule& schedule);

/// Durations, Rabi frequencies and phases compared to `rel_tol` (relative,
/// with an absolute floor of rel_tol); labels, targets and levels exactly.
bool approx_equal(const Schedule& a, const Schedule& b, double rel_tol = 1e-12);

std::string load_file(const std::string& path);

}  // namespace cpgate::pseq
