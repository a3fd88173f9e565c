#include "polykoop/input_expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

namespace polykoop {

InputExpr::InputExpr()
  : node_(std::make_shared<const Node>()) {}

InputExpr InputExpr::make(Kind kind, std::vector<InputExpr> children) {
    Node n;
    n.kind = kind;
    n.children = std::move(children);
    return InputExpr(std::make_shared<const Node>(std::move(n)));
}

InputExpr InputExpr::constant(double value) {
    if (!std::isfinite(value)) { throw Error("expression constant must be finite"); }
    Node n;
    n.value = value;
    return InputExpr(std::make_shared<const Node>(std::move(n)));
}

InputExpr InputExpr::variable(std::size_t index) {
    Node n;
    n.kind = Kind::Variable;
    n.index = index;
    return InputExpr(std::make_shared<const Node>(std::move(n)));
}

InputExpr InputExpr::sum(std::vector<InputExpr> terms) {
    if (terms.empty()) { return constant(0.0); }
    if (terms.size() == 1) { return std::move(terms.front()); }
    return make(Kind::Sum, std::move(terms));
}

InputExpr InputExpr::product(std::vector<InputExpr> factors) {
    if (factors.empty()) { return constant(1.0); }
    if (factors.size() == 1) { return std::move(factors.front()); }
    return make(Kind::Product, std::move(factors));
}

InputExpr InputExpr::power(InputExpr base, int exponent) {
    if (exponent < 0) { throw Error("expression powers must be non-negative integers"); }
    Node n;
    n.kind = Kind::Power;
    n.exponent = exponent;
    n.children.push_back(std::move(base));
    return InputExpr(std::make_shared<const Node>(std::move(n)));
}

InputExpr InputExpr::sin(InputExpr arg) { return make(Kind::Sin, {std::move(arg)}); }
InputExpr InputExpr::cos(InputExpr arg) { return make(Kind::Cos, {std::move(arg)}); }
InputExpr InputExpr::exp(InputExpr arg) { return make(Kind::Exp, {std::move(arg)}); }

double InputExpr::evaluate(std::span<const double> vars) const {
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::Constant: return n.value;
    case Kind::Variable:
        if (n.index >= vars.size()) { throw DimensionError("expression variable x" + std::to_string(n.index + 1) + " out of range"); }
        return vars[n.index];
    case Kind::Sum: {
        double s = 0.0;
        for (const auto& c : n.children) { s += c.evaluate(vars); }
        return s;
    }
    case Kind::Product: {
        double p = 1.0;
        for (const auto& c : n.children) { p *= c.evaluate(vars); }
        return p;
    }
    case Kind::Power: {
        const double b = n.children.front().evaluate(vars);
        double p = 1.0;
        for (int k = 0; k < n.exponent; ++k) { p *= b; }
        return p;
    }
    case Kind::Sin: return std::sin(n.children.front().evaluate(vars));
    case Kind::Cos: return std::cos(n.children.front().evaluate(vars));
    case Kind::Exp: return std::exp(n.children.front().evaluate(vars));
    }
    return 0.0;
}

std::optional<std::size_t> InputExpr::max_variable() const {
    if (kind() == Kind::Variable) { return index(); }
    std::optional<std::size_t> best;
    for (const auto& c : children()) {
        if (auto m = c.max_variable(); m && (!best || *m > *best)) { best = m; }
    }
    return best;
}

bool operator==(const InputExpr& a, const InputExpr& b) {
    if (a.node_ == b.node_) { return true; }
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.value == y.value && x.index == y.index && x.exponent == y.exponent &&
           x.children == y.children;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class ExprParser {
public:
    explicit ExprParser(std::string_view text)
      : text_(text) {}

    InputExpr parse() {
        InputExpr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) { fail("unexpected character '" + std::string(1, text_[pos_]) + "'"); }
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ExprSyntaxError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) { ++pos_; }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static InputExpr negate(InputExpr e) {
        if (e.is_constant()) { return InputExpr::constant(-e.value()); }
        return InputExpr::product({InputExpr::constant(-1.0), std::move(e)});
    }

    InputExpr parse_sum() {
        std::vector<InputExpr> terms;
        terms.push_back(parse_product());
        for (;;) {
            if (accept('+')) {
                terms.push_back(parse_product());
            } else if (accept('-')) {
                terms.push_back(negate(parse_product()));
            } else {
                break;
            }
        }
        return InputExpr::sum(std::move(terms));
    }

    InputExpr parse_product() {
        std::vector<InputExpr> factors;
        factors.push_back(parse_unary());
        while (accept('*')) { factors.push_back(parse_unary()); }
        return InputExpr::product(std::move(factors));
    }

    InputExpr parse_unary() {
        if (accept('-')) { return negate(parse_unary()); }
        if (accept('+')) { return parse_unary(); }
        InputExpr base = parse_atom();
        if (accept('^')) {
            skip_ws();
            int e = 0;
            auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), e);
            if (ec != std::errc() || e < 0) { fail("expected a non-negative integer exponent"); }
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            return InputExpr::power(std::move(base), e);
        }
        return base;
    }

    InputExpr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) { fail("unexpected end of expression"); }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            InputExpr e = parse_sum();
            if (!accept(')')) { fail("expected ')'"); }
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.') {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
            if (ec != std::errc() || !std::isfinite(v)) { fail("malformed number"); }
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            return InputExpr::constant(v);
        }
        if (c == 'x') {
            ++pos_;
            std::size_t idx = 0;
            auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), idx);
            if (ec != std::errc() || idx == 0) { fail("expected a state index >= 1 after 'x'"); }
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            return InputExpr::variable(idx - 1);
        }
        for (std::string_view fn : {"sin", "cos", "exp"}) {
            if (text_.substr(pos_, fn.size()) == fn) {
                pos_ += fn.size();
                if (!accept('(')) { fail("expected '(' after " + std::string(fn)); }
                InputExpr arg = parse_sum();
                if (!accept(')')) { fail("expected ')'"); }
                if (fn == "sin") { return InputExpr::sin(std::move(arg)); }
                if (fn == "cos") { return InputExpr::cos(std::move(arg)); }
                return InputExpr::exp(std::move(arg));
            }
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace

InputExpr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

std::string to_string(const InputExpr& e) {
    using K = InputExpr::Kind;
    switch (e.kind()) {
    case K::Constant: return format_number(e.value());
    case K::Variable: return "x" + std::to_string(e.index() + 1);
    case K::Sum: {
        std::string out;
        for (const auto& c : e.children()) {
            if (!out.empty()) { out += " + "; }
            out += c.kind() == K::Sum ? "(" + to_string(c) + ")" : to_string(c);
        }
        return out;
    }
    case K::Product: {
        std::string out;
        for (const auto& c : e.children()) {
            if (!out.empty()) { out += '*'; }
            const bool wrap = c.kind() == K::Sum || c.kind() == K::Product;
            out += wrap ? "(" + to_string(c) + ")" : to_string(c);
        }
        return out;
    }
    case K::Power: {
        const auto& b = e.children().front();
        const bool atomic = b.kind() == K::Variable || (b.kind() == K::Constant && b.value() >= 0) ||
                            b.kind() == K::Sin || b.kind() == K::Cos || b.kind() == K::Exp;
        std::string base = atomic ? to_string(b) : "(" + to_string(b) + ")";
        return base + "^" + std::to_string(e.exponent());
    }
    case K::Sin: return "sin(" + to_string(e.children().front()) + ")";
    case K::Cos: return "cos(" + to_string(e.children().front()) + ")";
    case K::Exp: return "exp(" + to_string(e.children().front()) + ")";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Simplification

namespace {

using K = InputExpr::Kind;

// Variables first by index, then everything else by printed form.
bool factor_less(const InputExpr& a, const InputExpr& b) {
    const bool av = a.kind() == K::Variable;
    const bool bv = b.kind() == K::Variable;
    if (av != bv) { return av; }
    if (av) { return a.index() < b.index(); }
    return to_string(a) < to_string(b);
}

InputExpr simplify_product(std::vector<InputExpr> factors);

InputExpr simplify_power(const InputExpr& base, int exponent) {
    if (exponent == 0) { return InputExpr::constant(1.0); }
    if (exponent == 1) { return base; }
    if (base.is_constant()) { return InputExpr::constant(std::pow(base.value(), exponent)); }
    if (base.kind() == K::Power) { return InputExpr::power(base.children().front(), base.exponent() * exponent); }
    if (base.kind() == K::Product) {
        std::vector<InputExpr> fs;
        for (const auto& f : base.children()) { fs.push_back(simplify_power(f, exponent)); }
        return simplify_product(std::move(fs));
    }
    return InputExpr::power(base, exponent);
}

// factors are already simplified
InputExpr simplify_product(std::vector<InputExpr> factors) {
    double c = 1.0;
    std::vector<std::pair<InputExpr, int>> powers;
    auto absorb = [&](const InputExpr& f, auto&& self) -> void {
        if (f.is_constant()) {
            c *= f.value();
        } else if (f.kind() == K::Product) {
            for (const auto& g : f.children()) { self(g, self); }
        } else {
            InputExpr base = f.kind() == K::Power ? f.children().front() : f;
            const int e = f.kind() == K::Power ? f.exponent() : 1;
            auto it = std::find_if(powers.begin(), powers.end(), [&](const auto& p) { return p.first == base; });
            if (it == powers.end()) {
                powers.emplace_back(std::move(base), e);
            } else {
                it->second += e;
            }
        }
    };
    for (const auto& f : factors) { absorb(f, absorb); }
    if (c == 0.0) { return InputExpr::constant(0.0); }

    std::vector<InputExpr> out;
    for (auto& [base, e] : powers) {
        InputExpr p = simplify_power(base, e);
        if (p.is_constant()) {
            c *= p.value();
        } else {
            out.push_back(std::move(p));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const InputExpr& a, const InputExpr& b) {
        const auto& ab = a.kind() == K::Power ? a.children().front() : a;
        const auto& bb = b.kind() == K::Power ? b.children().front() : b;
        return factor_less(ab, bb);
    });
    if (c != 1.0 || out.empty()) { out.insert(out.begin(), InputExpr::constant(c)); }
    return InputExpr::product(std::move(out));
}

// Splits a simplified term into its constant coefficient and the remaining factors.
std::pair<double, InputExpr> split_coefficient(const InputExpr& t) {
    if (t.is_constant()) { return {t.value(), InputExpr::constant(1.0)}; }
    if (t.kind() == K::Product && t.children().front().is_constant()) {
        std::vector<InputExpr> rest(t.children().begin() + 1, t.children().end());
        return {t.children().front().value(), InputExpr::product(std::move(rest))};
    }
    return {1.0, t};
}

InputExpr simplify_sum(const std::vector<InputExpr>& terms) {
    double constant = 0.0;
    std::vector<std::pair<double, InputExpr>> collected;
    auto absorb = [&](const InputExpr& t, auto&& self) -> void {
        if (t.kind() == K::Sum) {
            for (const auto& u : t.children()) { self(u, self); }
            return;
        }
        auto [coef, rest] = split_coefficient(t);
        if (rest.is_constant()) {
            constant += coef * rest.value();
            return;
        }
        auto it = std::find_if(collected.begin(), collected.end(), [&](const auto& p) { return p.second == rest; });
        if (it == collected.end()) {
            collected.emplace_back(coef, std::move(rest));
        } else {
            it->first += coef;
        }
    };
    for (const auto& t : terms) { absorb(simplify(t), absorb); }

    std::vector<InputExpr> out;
    if (constant != 0.0) { out.push_back(InputExpr::constant(constant)); }
    for (auto& [coef, rest] : collected) {
        if (coef == 0.0) { continue; }
        out.push_back(simplify_product({InputExpr::constant(coef), rest}));
    }
    return InputExpr::sum(std::move(out));
}

} // namespace

InputExpr simplify(const InputExpr& e) {
    switch (e.kind()) {
    case K::Constant:
    case K::Variable: return e;
    case K::Sum: return simplify_sum(e.children());
    case K::Product: {
        std::vector<InputExpr> fs;
        for (const auto& c : e.children()) { fs.push_back(simplify(c)); }
        return simplify_product(std::move(fs));
    }
    case K::Power: return simplify_power(simplify(e.children().front()), e.exponent());
    case K::Sin:
    case K::Cos:
    case K::Exp: {
        InputExpr arg = simplify(e.children().front());
        if (arg.is_constant()) {
            const double v = arg.value();
            return InputExpr::constant(e.kind() == K::Sin ? std::sin(v) : e.kind() == K::Cos ? std::cos(v) : std::exp(v));
        }
        return e.kind() == K::Sin ? InputExpr::sin(arg) : e.kind() == K::Cos ? InputExpr::cos(arg) : InputExpr::exp(arg);
    }
    }
    return e;
}

} // namespace polykoop
