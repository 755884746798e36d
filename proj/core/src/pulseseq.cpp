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

#include "cpgate/pulseseq.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace cpgate::pseq {

namespace {

enum class Tok { ident, number, equals, comma, plus, minus, star, slash, lparen, rparen, amp, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    double number = 0.0;
    int column = 0;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> tokenize(std::string_view text, int line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        const int col = static_cast<int>(i) + 1;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            out.push_back({Tok::ident, std::string(text.substr(i, j - i)), 0.0, col});
            i = j;
            continue;
        }
        if (is_digit(c) || (c == '.' && i + 1 < text.size() && is_digit(text[i + 1]))) {
            std::size_t j = i;
            while (j < text.size() && (is_digit(text[j]) || text[j] == '.')) ++j;
            if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < text.size() && (text[k] == '+' || text[k] == '-')) ++k;
                if (k < text.size() && is_digit(text[k])) {
                    while (k < text.size() && is_digit(text[k])) ++k;
                    j = k;
                }
            }
            const std::string lexeme(text.substr(i, j - i));
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), v);
            if (ec != std::errc() || ptr != lexeme.data() + lexeme.size()) {
                throw ParseError(line, col, "malformed number", lexeme);
            }
            out.push_back({Tok::number, lexeme, v, col});
            i = j;
            continue;
        }
        Tok kind = Tok::end;
        switch (c) {
        case '=': kind = Tok::equals; break;
        case ',': kind = Tok::comma; break;
        case '+': kind = Tok::plus; break;
        case '-': kind = Tok::minus; break;
        case '*': kind = Tok::star; break;
        case '/': kind = Tok::slash; break;
        case '(': kind = Tok::lparen; break;
        case ')': kind = Tok::rparen; break;
        case '&': kind = Tok::amp; break;
        default: throw ParseError(line, col, "unexpected character", std::string(1, c));
        }
        out.push_back({kind, std::string(1, c), 0.0, col});
        ++i;
    }
    out.push_back({Tok::end, "", 0.0, std::max(1, static_cast<int>(text.size()))});
    return out;
}

bool is_parameter_name(std::string_view name) {
    return std::find(std::begin(kParameterNames), std::end(kParameterNames), name) != std::end(kParameterNames);
}

bool is_si_name(std::string_view name) { return name.size() > 3 && name.substr(name.size() - 3) == "_si"; }

class LineParser {
public:
    LineParser(std::vector<Token> tokens, int line, const std::set<std::string>& bound)
        : toks_(std::move(tokens)), line_(line), bound_(bound) {}

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
    bool at_end() const { return peek().kind == Tok::end; }

    [[noreturn]] void fail(const Token& t, const std::string& message) const {
        throw ParseError(line_, t.column, t.kind == Tok::end ? message + " before end of line" : message, t.text);
    }

    void expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
        next();
    }

    /// `key =`
    void expect_key(const char* key) {
        const Token& t = peek();
        if (t.kind != Tok::ident || t.text != key) fail(t, std::string("expected `") + key + "=`");
        next();
        expect(Tok::equals, "`=`");
    }

    int parse_int() {
        const Token& t = peek();
        if (t.kind != Tok::number || t.text.find_first_not_of("0123456789") != std::string::npos) {
            fail(t, "expected an integer level");
        }
        next();
        return static_cast<int>(t.number);
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Token op = next();
            Expr rhs = parse_term();
            lhs = binary(op.kind == Tok::plus ? Expr::Kind::add : Expr::Kind::subtract, std::move(lhs),
                         std::move(rhs), op);
        }
        return lhs;
    }

private:
    Expr binary(Expr::Kind kind, Expr lhs, Expr rhs, const Token& op) const {
        Expr e;
        e.kind = kind;
        e.line = line_;
        e.column = op.column;
        e.operands.push_back(std::move(lhs));
        e.operands.push_back(std::move(rhs));
        return e;
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Token op = next();
            Expr rhs = parse_unary();
            lhs = binary(op.kind == Tok::star ? Expr::Kind::multiply : Expr::Kind::divide, std::move(lhs),
                         std::move(rhs), op);
        }
        return lhs;
    }

    Expr parse_unary() {
        if (peek().kind == Tok::minus) {
            const Token op = next();
            Expr e;
            e.kind = Expr::Kind::negate;
            e.line = line_;
            e.column = op.column;
            e.operands.push_back(parse_unary());
            return e;
        }
        if (peek().kind == Tok::plus) {
            next();
            return parse_unary();
        }
        return parse_primary();
    }

    Expr parse_primary() {
        const Token& t = peek();
        Expr e;
        e.line = line_;
        e.column = t.column;
        switch (t.kind) {
        case Tok::number:
            next();
            e.kind = Expr::Kind::number;
            e.value = t.number;
            return e;
        case Tok::ident:
            if (t.text == "pi") {
                next();
                e.kind = Expr::Kind::pi;
                e.value = std::numbers::pi;
                return e;
            }
            if (!bound_.count(t.text) && !is_parameter_name(t.text)) fail(t, "unbound identifier");
            next();
            e.kind = Expr::Kind::identifier;
            e.name = t.text;
            return e;
        case Tok::lparen: {
            next();
            Expr inner = parse_expr();
            expect(Tok::rparen, "`)`");
            return inner;
        }
        default:
            fail(t, "malformed expression");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_;
    const std::set<std::string>& bound_;
};

enum class Unit { dimensionless, natural, si };

struct Value {
    double v = 0.0;
    Unit unit = Unit::dimensionless;
};

class Evaluator {
public:
    explicit Evaluator(const GateParams& p) {
        env_["ga"] = {p.g_a, Unit::natural};
        env_["gb"] = {p.g_b, Unit::natural};
        env_["delta_c"] = {p.delta_c, Unit::natural};
        env_["omega13"] = {p.omega_13, Unit::natural};
        env_["omega02"] = {p.omega_02, Unit::natural};
        env_["omega12"] = {p.omega_12, Unit::natural};
    }

    void bind(const std::string& name, Value v) { env_[name] = v; }

    Value eval(const Expr& e) const {
        switch (e.kind) {
        case Expr::Kind::number:
        case Expr::Kind::pi:
            return {e.value, Unit::dimensionless};
        case Expr::Kind::identifier: {
            const auto it = env_.find(e.name);
            if (it == env_.end()) throw CompileError(e.line, "unbound identifier `" + e.name + "`");
            return it->second;
        }
        case Expr::Kind::negate: {
            Value v = eval(e.operands[0]);
            v.v = -v.v;
            return v;
        }
        default:
            break;
        }
        const Value a = eval(e.operands[0]);
        const Value b = eval(e.operands[1]);
        const bool additive = e.kind == Expr::Kind::add || e.kind == Expr::Kind::subtract;
        Value out{0.0, combine(a.unit, b.unit, additive, e.line)};
        switch (e.kind) {
        case Expr::Kind::add: out.v = a.v + b.v; break;
        case Expr::Kind::subtract: out.v = a.v - b.v; break;
        case Expr::Kind::multiply: out.v = a.v * b.v; break;
        case Expr::Kind::divide: out.v = a.v / b.v; break;
        default: break;
        }
        return out;
    }

private:
    // A bare number added to an SI value is a natural-unit quantity; as a
    // factor it is just a scale.
    static Unit combine(Unit a, Unit b, bool additive, int line) {
        if (additive && (a == Unit::si) != (b == Unit::si)) {
            throw CompileError(line, "expression mixes SI and natural units");
        }
        if (a == Unit::dimensionless) return b;
        if (b == Unit::dimensionless || a == b) return a;
        throw CompileError(line, "expression mixes SI and natural units");
    }

    std::map<std::string, Value> env_;
};

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_identifier(std::string_view s) {
    return !s.empty() && is_ident_start(s.front()) && std::all_of(s.begin(), s.end(), is_ident_char);
}

bool close(double a, double b, double rel_tol) {
    return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string error_text(int line, int column, const std::string& message, const std::string& token) {
    std::ostringstream os;
    os << "line " << line << ", column " << column << ": " << message << " `" << token << "`";
    return os.str();
}

}  // namespace

ParseError::ParseError(int line, int column, std::string message, std::string token)
    : std::runtime_error(error_text(line, column, message, token)),
      line_(line),
      column_(column),
      message_(std::move(message)),
      token_(std::move(token)) {}

CompileError::CompileError(int line, std::string message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line), message_(std::move(message)) {}

SequenceAst parse(std::string_view source) {
    SequenceAst ast;
    std::set<std::string> bound;
    bool previous_is_pulse = false;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        const auto nl = source.find('\n', start);
        const auto end = nl == std::string_view::npos ? source.size() : nl;
        const std::string_view text = source.substr(start, end - start);
        ++line_no;
        start = end + 1;

        LineParser lp(tokenize(text, line_no), line_no, bound);
        if (lp.at_end()) {
            if (nl == std::string_view::npos) break;
            continue;
        }

        bool simultaneous = false;
        if (lp.peek().kind == Tok::amp) {
            const Token amp = lp.next();
            if (!previous_is_pulse) lp.fail(amp, "`&` must follow a pulse statement");
            simultaneous = true;
            if (lp.peek().kind != Tok::ident || lp.peek().text != "pulse") lp.fail(lp.peek(), "expected `pulse`");
        }

        const Token head = lp.peek();
        if (head.kind != Tok::ident) lp.fail(head, "expected a statement or binding");

        if (head.text == "pulse") {
            lp.next();
            PulseStatement st;
            st.simultaneous = simultaneous;
            st.line = line_no;
            lp.expect_key("target");
            const Token target = lp.peek();
            if (target.kind != Tok::ident || (target.text != "a" && target.text != "b")) {
                lp.fail(target, "unknown target");
            }
            lp.next();
            st.target = target.text == "a" ? Squid::a : Squid::b;
            lp.expect_key("levels");
            const Token low_tok = lp.peek();
            const int low = lp.parse_int();
            lp.expect(Tok::comma, "`,`");
            const Token high_tok = lp.peek();
            const int high = lp.parse_int();
            if (low > 3) lp.fail(low_tok, "level out of range 0..3");
            if (high > 3) lp.fail(high_tok, "level out of range 0..3");
            if (low >= high) lp.fail(high_tok, "levels must be ordered low,high and distinct");
            st.levels = {low, high};
            lp.expect_key("rabi");
            st.rabi = lp.parse_expr();
            lp.expect_key("phase");
            st.phase = lp.parse_expr();
            lp.expect_key("dur");
            st.duration = lp.parse_expr();
            if (lp.peek().kind == Tok::ident && lp.peek().text == "step") {
                lp.expect_key("step");
                const Token label = lp.peek();
                if (label.kind != Tok::ident) lp.fail(label, "expected a step label");
                lp.next();
                st.step = label.text;
            }
            if (!lp.at_end()) lp.fail(lp.peek(), "unexpected token");
            ast.statements.emplace_back(std::move(st));
            previous_is_pulse = true;
        } else if (head.text == "wait") {
            lp.next();
            WaitStatement st;
            st.line = line_no;
            lp.expect_key("dur");
            st.duration = lp.parse_expr();
            if (lp.peek().kind == Tok::ident && lp.peek().text == "step") {
                lp.expect_key("step");
                const Token label = lp.peek();
                if (label.kind != Tok::ident) lp.fail(label, "expected a step label");
                lp.next();
                st.step = label.text;
            }
            if (!lp.at_end()) lp.fail(lp.peek(), "unexpected token");
            ast.statements.emplace_back(std::move(st));
            previous_is_pulse = false;
        } else {
            lp.next();
            if (lp.peek().kind != Tok::equals) lp.fail(head, "unknown keyword");
            lp.next();
            if (head.text == "pi") lp.fail(head, "cannot rebind `pi`");
            if (bound.count(head.text)) lp.fail(head, "duplicate binding");
            Binding b;
            b.name = head.text;
            b.line = line_no;
            b.value = lp.parse_expr();
            if (!lp.at_end()) lp.fail(lp.peek(), "unexpected token");
            bound.insert(b.name);
            ast.bindings.push_back(std::move(b));
        }
        if (nl == std::string_view::npos) break;
    }
    return ast;
}

Schedule compile(const SequenceAst& ast, const GateParams& params, const CompileOptions& options) {
    if (!(options.gb_si > 0.0)) throw std::invalid_argument("gb_si must be positive");
    Evaluator ev(params);

    for (const auto& b : ast.bindings) {
        const Value v = ev.eval(b.value);
        const Unit declared = is_si_name(b.name) ? Unit::si : Unit::natural;
        if (v.unit != Unit::dimensionless && v.unit != declared) {
            throw CompileError(b.line, "binding `" + b.name + "` mixes SI and natural units");
        }
        if (!(v.v > 0.0) || !std::isfinite(v.v)) {
            throw CompileError(b.line, "binding `" + b.name + "` must evaluate to a positive number");
        }
        ev.bind(b.name, {v.v, declared});
    }

    auto duration_of = [&](const Expr& e, int line) {
        const Value v = ev.eval(e);
        const double d = v.unit == Unit::si ? v.v * options.gb_si : v.v;
        if (!std::isfinite(d)) throw CompileError(line, "duration is not finite");
        if (d < 0.0) throw CompileError(line, "negative duration");
        return d;
    };

    Schedule s;
    for (const auto& stmt : ast.statements) {
        if (const auto* w = std::get_if<WaitStatement>(&stmt)) {
            s.segments.push_back({w->step.value_or(""), {}, duration_of(w->duration, w->line)});
            continue;
        }
        const auto& p = std::get<PulseStatement>(stmt);
        const Value rabi = ev.eval(p.rabi);
        const double omega = rabi.unit == Unit::si ? rabi.v / options.gb_si : rabi.v;
        if (!std::isfinite(omega) || omega == 0.0) throw CompileError(p.line, "pulse Rabi frequency is zero");
        if (omega < 0.0) throw CompileError(p.line, "pulse Rabi frequency must be positive");
        const Value phase = ev.eval(p.phase);
        if (phase.unit == Unit::si) throw CompileError(p.line, "phase cannot reference SI bindings");
        if (!std::isfinite(phase.v)) throw CompileError(p.line, "phase is not finite");
        const double dur = duration_of(p.duration, p.line);

        const DriveTerm drive{p.target, p.levels, omega, phase.v};
        if (p.simultaneous) {
            Segment& last = s.segments.back();
            if (!close(last.duration, dur, 1e-12)) {
                throw CompileError(p.line, "simultaneous pulse duration differs from the preceding pulse");
            }
            last.drives.push_back(drive);
        } else {
            s.segments.push_back({p.step.value_or(""), {drive}, dur});
        }
    }
    return s;
}

std::string serialize(const Schedule& schedule) {
    std::ostringstream os;
    os << "# cpgate pulse sequence (units of g_b)\n";
    for (const auto& seg : schedule.segments) {
        if (!seg.step.empty() && !is_identifier(seg.step)) {
            throw std::invalid_argument("step label `" + seg.step + "` is not an identifier");
        }
        const std::string step = seg.step.empty() ? "" : " step=" + seg.step;
        if (seg.is_wait()) {
            os << "wait dur=" << format_number(seg.duration) << step << '\n';
            continue;
        }
        bool first = true;
        for (const auto& d : seg.drives) {
            os << (first ? "" : "& ") << "pulse target=" << to_string(d.squid) << " levels=" << d.levels.low << ','
               << d.levels.high << " rabi=" << format_number(d.omega) << " phase=" << format_number(d.phase)
               << " dur=" << format_number(seg.duration) << (first ? step : "") << '\n';
            first = false;
        }
    }
    return os.str();
}

bool approx_equal(const Schedule& a, const Schedule& b, double rel_tol) {
    if (a.segments.size() != b.segments.size()) return false;
    for (std::size_t i = 0; i < a.segments.size(); ++i) {
        const auto& x = a.segments[i];
        const auto& y = b.segments[i];
        if (x.step != y.step || x.drives.size() != y.drives.size()) return false;
        if (!close(x.duration, y.duration, rel_tol)) return false;
        for (std::size_t k = 0; k < x.drives.size(); ++k) {
            const auto& dx = x.drives[k];
            const auto& dy = y.drives[k];
            if (dx.squid != dy.squid || !(dx.levels == dy.levels)) return false;
            if (!close(dx.omega, dy.omega, rel_tol) || !close(dx.phase, dy.phase, rel_tol)) return false;
        }
    }
    return true;
}

std::string load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace cpgate::pseq
