#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polykoop {

/// Dense exponent vector x_1^{j_1} ... x_n^{j_n}. State indices are 0-based in the API
/// and 1-based when printed.
///
/// Ordering is graded: lower total degree first, then larger leading exponents first,
/// so the unit monomials sort as x1 < x2 < ... < xn.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<int> exponents);

    static Monomial constant(std::size_t n_x) { return Monomial(std::vector<int>(n_x, 0)); }
    static Monomial unit(std::size_t n_x, std::size_t i);

    std::size_t dim() const noexcept { return exponents_.size(); }
    int exponent(std::size_t i) const { return exponents_.at(i); }
    const std::vector<int>& exponents() const noexcept { return exponents_; }
    int degree() const noexcept { return degree_; }
    bool is_constant() const noexcept { return degree_ == 0; }

    // Index of the unit monomial's variable, if this is x_i.
    std::optional<std::size_t> unit_index() const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exponents_ == b.exponents_; }
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);

private:
    std::vector<int> exponents_;
    int degree_ = 0;
};

/// Exponentwise sum.
Monomial operator*(const Monomial& a, const Monomial& b);

/// Power-rule result of d/dx_i: coefficient j_i and the monomial with j_i decremented.
struct PartialTerm {
    std::int64_t coeff = 0;
    Monomial mono;
};

/// Empty when x_i does not occur in m.
std::optional<PartialTerm> partial(const Monomial& m, std::size_t i);

double evaluate(const Monomial& m, std::span<const double> x);

/// "x1^3*x2", or "1" for the constant monomial.
std::string to_string(const Monomial& m);

} // namespace polykoop
