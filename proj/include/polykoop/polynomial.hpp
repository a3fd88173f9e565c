#pragma once

#include "polykoop/monomial.hpp"
#include "polykoop/param.hpp"

#include <map>
#include <span>
#include <string>

namespace polykoop {

/// Polynomial in the state with ParamLinForm coefficients, kept canonical: no zero
/// coefficient is stored and every monomial has dimension n_x.
class ParamPolynomial {
public:
    ParamPolynomial() = default;
    explicit ParamPolynomial(std::size_t n_x)
      : n_x_(n_x) {}

    std::size_t dim() const noexcept { return n_x_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    const std::map<Monomial, ParamLinForm>& terms() const noexcept { return terms_; }
    const ParamLinForm& coefficient(const Monomial& m) const;

    /// Adds coeff * m, merging with an existing term.
    void add_term(const Monomial& m, const ParamLinForm& coeff);

    ParamPolynomial& operator+=(const ParamPolynomial& other);
    friend ParamPolynomial operator+(ParamPolynomial a, const ParamPolynomial& b) { return a += b; }

    double evaluate(std::span<const double> x, const ParamAssignment& params) const;

    friend bool operator==(const ParamPolynomial&, const ParamPolynomial&) = default;

private:
    std::size_t n_x_ = 0;
    std::map<Monomial, ParamLinForm> terms_;
};

/// "a_2*x2 + alpha2_3*x1^3"; "0" for the zero polynomial.
std::string to_string(const ParamPolynomial& p);

} // namespace polykoop
