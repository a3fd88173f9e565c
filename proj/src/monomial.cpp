#include "polykoop/monomial.hpp"

#include "polykoop/error.hpp"

#include <numeric>

namespace polykoop {

Monomial::Monomial(std::vector<int> exponents)
  : exponents_(std::move(exponents)) {
    for (int e : exponents_) {
        if (e < 0) { throw Error("monomial exponents must be non-negative"); }
    }
    degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
}

Monomial Monomial::unit(std::size_t n_x, std::size_t i) {
    if (i >= n_x) { throw DimensionError("unit monomial index out of range"); }
    std::vector<int> e(n_x, 0);
    e[i] = 1;
    return Monomial(std::move(e));
}

std::optional<std::size_t> Monomial::unit_index() const {
    if (degree_ != 1) { return std::nullopt; }
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        if (exponents_[i] == 1) { return i; }
    }
    return std::nullopt;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.degree_ <=> b.degree_; c != 0) { return c; }
    // reversed on purpose: (1,0) precedes (0,1)
    return b.exponents_ <=> a.exponents_;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.dim() != b.dim()) { throw DimensionError("monomial product: dimension mismatch"); }
    std::vector<int> e(a.dim());
    for (std::size_t i = 0; i < e.size(); ++i) { e[i] = a.exponent(i) + b.exponent(i); }
    return Monomial(std::move(e));
}

std::optional<PartialTerm> partial(const Monomial& m, std::size_t i) {
    if (i >= m.dim()) { throw DimensionError("partial derivative: state index out of range"); }
    const int j = m.exponent(i);
    if (j == 0) { return std::nullopt; }
    std::vector<int> e = m.exponents();
    --e[i];
    return PartialTerm{j, Monomial(std::move(e))};
}

double evaluate(const Monomial& m, std::span<const double> x) {
    if (x.size() != m.dim()) { throw DimensionError("monomial evaluation: dimension mismatch"); }
    double result = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int k = 0; k < m.exponent(i); ++k) { result *= x[i]; }
    }
    return result;
}

std::string to_string(const Monomial& m) {
    if (m.is_constant()) { return "1"; }
    std::string out;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        const int e = m.exponent(i);
        if (e == 0) { continue; }
        if (!out.empty()) { out += '*'; }
        out += 'x' + std::to_string(i + 1);
        if (e > 1) { out += '^' + std::to_string(e); }
    }
    return out;
}

} // namespace polykoop
