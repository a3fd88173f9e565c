#pragma once

#include "polykoop/lifting.hpp"
#include "polykoop/system.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace polykoop {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Square matrix of ParamLinForm entries stored by rows; absent entries are zero.
class SymbolicMatrix {
public:
    using Row = std::map<std::size_t, ParamLinForm>;

    SymbolicMatrix() = default;
    explicit SymbolicMatrix(std::size_t n)
      : n_(n)
      , rows_(n) {}

    std::size_t size() const noexcept { return n_; }
    const ParamLinForm& at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, ParamLinForm value);
    const Row& row(std::size_t r) const { return rows_.at(r); }

    Matrix evaluate(const ParamAssignment& params) const;

    friend bool operator==(const SymbolicMatrix&, const SymbolicMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Row> rows_;
};

/// One entry of dPhi/dx: coeff * mono, zero when coeff == 0.
struct JacobianEntry {
    std::int64_t coeff = 0;
    Monomial mono;

    bool is_zero() const noexcept { return coeff == 0; }
    double evaluate(std::span<const double> x) const { return is_zero() ? 0.0 : static_cast<double>(coeff) * polykoop::evaluate(mono, x); }

    friend bool operator==(const JacobianEntry&, const JacobianEntry&) = default;
};

/// n_f x n_x
using Jacobian = std::vector<std::vector<JacobianEntry>>;

/// Symbolic lifted model z' = A z + B(x) u, x = C z with z = Phi(x).
/// Row k of A holds the coordinates of d(phi_k)/dt in the basis Phi.
struct KoopmanModel {
    LiftingSet phi;
    SymbolicMatrix A;
    Jacobian J;
    std::optional<ExprMatrix> B; // n_f x n_u
    ParamAssignment params;

    std::size_t n_x() const noexcept { return phi.n_x(); }
    std::size_t n_f() const noexcept { return phi.size(); }
    /// C = [I 0], n_x x n_f.
    Matrix selection() const;
};

SymbolicMatrix build_A(const LiftingSet& phi, const SystemSpec& spec);
Jacobian build_jacobian(const LiftingSet& phi);
/// B = J g, simplified per entry.
ExprMatrix build_B(const Jacobian& J, const ExprMatrix& g);

/// Lifting, A, J and (when the system has an input) B in one go.
KoopmanModel build_model(const SystemSpec& spec, std::size_t cap = default_lifting_cap);

/// New position k holds old observable perm[k]; A' = P A P^T. Positions 0..n_x-1 must
/// be fixed. Throws InvalidPermutation.
KoopmanModel reorder(const KoopmanModel& model, std::span<const std::size_t> perm);
/// Same, with the new order given as the observables themselves.
KoopmanModel reorder(const KoopmanModel& model, std::span<const Monomial> order);

Vector lift(const LiftingSet& phi, std::span<const double> x);

/// ||J(x) f(x) - A Phi(x)||_inf with f stacking a_i x_i + f_i.
double residual(const KoopmanModel& model, const SystemSpec& spec, std::span<const double> x);

/// Model with every parameter bound. B entries are evaluated on demand, either from x
/// or from the lifted state z (whose first n_x entries are the states).
class NumericModel {
public:
    NumericModel(std::size_t n_x, Matrix A, std::optional<ExprMatrix> B);

    std::size_t n_x() const noexcept { return n_x_; }
    std::size_t n_f() const noexcept { return static_cast<std::size_t>(A_.rows()); }
    std::size_t n_u() const noexcept { return B_ ? (B_->empty() ? 0 : B_->front().size()) : 0; }
    bool has_input() const noexcept { return n_u() > 0; }
    const Matrix& A() const noexcept { return A_; }
    const std::optional<ExprMatrix>& B_symbolic() const noexcept { return B_; }

    Matrix B_at_state(std::span<const double> x) const;
    /// B_z(p) with p = z.
    Matrix B_at_lifted(std::span<const double> z) const;

private:
    std::size_t n_x_;
    Matrix A_;
    std::optional<ExprMatrix> B_;
};

NumericModel eval_numeric(const KoopmanModel& model);

} // namespace polykoop
