#pragma once

#include "polykoop/input_expr.hpp"
#include "polykoop/param.hpp"
#include "polykoop/polynomial.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polykoop {

/// One row of the lower-triangular system: x_i' = a_i x_i + f_i(x_1, ..., x_{i-1}).
struct StateEquation {
    ParamId linear;
    ParamPolynomial nonlinear;

    friend bool operator==(const StateEquation&, const StateEquation&) = default;
};

/// n_x x n_u matrix of input gains, row-major.
using ExprMatrix = std::vector<std::vector<InputExpr>>;

/// Lower-triangular polynomial system with an optional control-affine input map g.
struct SystemSpec {
    std::size_t n_x = 0;
    std::vector<StateEquation> states;
    std::size_t n_u = 0;
    ExprMatrix g; // empty when n_u == 0
    ParamAssignment params;

    SystemSpec() = default;
    /// Linear parameters a_1..a_n (unbound), zero nonlinear parts, no input.
    explicit SystemSpec(std::size_t n_x);

    bool has_input() const noexcept { return n_u > 0; }

    /// Binds a value to a_i and optionally overrides its printed name.
    void set_linear(std::size_t state, std::optional<double> value, std::string label = {});

    /// Adds a polynomial term to f_state with a fresh PolyCoeff parameter, returned.
    ParamId add_term(std::size_t state, const Monomial& m, std::optional<double> value, std::string label = {});

    /// Sets g; rows must equal n_x and all rows the same width.
    void set_input(ExprMatrix gain);

    /// a_i x_i + f_i as a single polynomial.
    ParamPolynomial vector_field(std::size_t state) const;

    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// PolyCoeff identifier for a term of state equation `state`: the exponents of the
/// variables preceding it. Terms violating triangularity keep their full exponent vector.
ParamId poly_coeff_id(std::size_t state, const Monomial& m, std::string label = {});

} // namespace polykoop
