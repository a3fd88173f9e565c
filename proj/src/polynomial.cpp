#include "polykoop/polynomial.hpp"

#include "polykoop/error.hpp"

namespace polykoop {

const ParamLinForm& ParamPolynomial::coefficient(const Monomial& m) const {
    static const ParamLinForm zero;
    auto it = terms_.find(m);
    return it == terms_.end() ? zero : it->second;
}

void ParamPolynomial::add_term(const Monomial& m, const ParamLinForm& coeff) {
    if (m.dim() != n_x_) { throw DimensionError("polynomial term: dimension mismatch"); }
    if (coeff.is_zero()) { return; }
    auto [it, inserted] = terms_.try_emplace(m, coeff);
    if (inserted) { return; }
    it->second += coeff;
    if (it->second.is_zero()) { terms_.erase(it); }
}

ParamPolynomial& ParamPolynomial::operator+=(const ParamPolynomial& other) {
    if (other.n_x_ != n_x_) { throw DimensionError("polynomial sum: dimension mismatch"); }
    for (const auto& [m, c] : other.terms_) { add_term(m, c); }
    return *this;
}

double ParamPolynomial::evaluate(std::span<const double> x, const ParamAssignment& params) const {
    if (x.size() != n_x_) { throw DimensionError("polynomial evaluation: dimension mismatch"); }
    double sum = 0.0;
    for (const auto& [m, c] : terms_) { sum += c.evaluate(params) * polykoop::evaluate(m, x); }
    return sum;
}

std::string to_string(const ParamPolynomial& p) {
    if (p.is_zero()) { return "0"; }
    std::string out;
    for (const auto& [m, c] : p.terms()) {
        if (!out.empty()) { out += " + "; }
        std::string coeff = to_string(c);
        if (c.terms().size() > 1) { coeff = "(" + coeff + ")"; }
        out += m.is_constant() ? coeff : coeff + "*" + to_string(m);
    }
    return out;
}

} // namespace polykoop
