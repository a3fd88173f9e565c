#include "polykoop/model.hpp"

#include "polykoop/error.hpp"

#include <algorithm>
#include <cmath>

namespace polykoop {

const ParamLinForm& SymbolicMatrix::at(std::size_t r, std::size_t c) const {
    static const ParamLinForm zero;
    if (r >= n_ || c >= n_) { throw DimensionError("symbolic matrix index out of range"); }
    const auto& row = rows_[r];
    auto it = row.find(c);
    return it == row.end() ? zero : it->second;
}

void SymbolicMatrix::set(std::size_t r, std::size_t c, ParamLinForm value) {
    if (r >= n_ || c >= n_) { throw DimensionError("symbolic matrix index out of range"); }
    if (value.is_zero()) {
        rows_[r].erase(c);
    } else {
        rows_[r][c] = std::move(value);
    }
}

Matrix SymbolicMatrix::evaluate(const ParamAssignment& params) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    for (std::size_t r = 0; r < n_; ++r) {
        for (const auto& [c, f] : rows_[r]) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = f.evaluate(params);
        }
    }
    return out;
}

Matrix KoopmanModel::selection() const {
    return Matrix::Identity(static_cast<Eigen::Index>(n_x()), static_cast<Eigen::Index>(n_f()));
}

SymbolicMatrix build_A(const LiftingSet& phi, const SystemSpec& spec) {
    SymbolicMatrix A(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const ParamPolynomial d = lie_derivative(phi[k], spec);
        for (const auto& [m, coeff] : d.terms()) {
            auto col = phi.position(m);
            if (!col) {
                throw ClosureError("d/dt " + to_string(phi[k]) + " contains " + to_string(m) + ", which is not an observable");
            }
            A.set(k, *col, coeff);
        }
    }
    return A;
}

Jacobian build_jacobian(const LiftingSet& phi) {
    Jacobian J(phi.size(), std::vector<JacobianEntry>(phi.n_x()));
    for (std::size_t k = 0; k < phi.size(); ++k) {
        for (std::size_t i = 0; i < phi.n_x(); ++i) {
            if (auto d = partial(phi[k], i)) { J[k][i] = {d->coeff, d->mono}; }
        }
    }
    return J;
}

namespace {

InputExpr to_expr(const JacobianEntry& e) {
    std::vector<InputExpr> factors{InputExpr::constant(static_cast<double>(e.coeff))};
    for (std::size_t i = 0; i < e.mono.dim(); ++i) {
        if (e.mono.exponent(i) > 0) { factors.push_back(InputExpr::power(InputExpr::variable(i), e.mono.exponent(i))); }
    }
    return InputExpr::product(std::move(factors));
}

} // namespace

ExprMatrix build_B(const Jacobian& J, const ExprMatrix& g) {
    if (g.empty()) { return ExprMatrix(J.size()); }
    const std::size_t n_x = g.size();
    const std::size_t n_u = g.front().size();
    ExprMatrix B(J.size(), std::vector<InputExpr>(n_u));
    for (std::size_t k = 0; k < J.size(); ++k) {
        if (J[k].size() != n_x) { throw DimensionError("input map rows differ from the Jacobian width"); }
        for (std::size_t u = 0; u < n_u; ++u) {
            std::vector<InputExpr> terms;
            for (std::size_t i = 0; i < n_x; ++i) {
                if (J[k][i].is_zero() || g[i].at(u).is_zero()) { continue; }
                terms.push_back(InputExpr::product({to_expr(J[k][i]), g[i][u]}));
            }
            B[k][u] = simplify(InputExpr::sum(std::move(terms)));
        }
    }
    return B;
}

KoopmanModel build_model(const SystemSpec& spec, std::size_t cap) {
    KoopmanModel model;
    model.phi = compute_lifting(spec, cap);
    model.A = build_A(model.phi, spec);
    model.J = build_jacobian(model.phi);
    if (spec.has_input()) { model.B = build_B(model.J, spec.g); }
    model.params = spec.params;
    return model;
}

KoopmanModel reorder(const KoopmanModel& model, std::span<const std::size_t> perm) {
    const std::size_t n = model.n_f();
    if (perm.size() != n) { throw InvalidPermutation("permutation length differs from the number of observables"); }
    std::vector<bool> used(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        if (perm[k] >= n || used[perm[k]]) { throw InvalidPermutation("not a permutation"); }
        used[perm[k]] = true;
        if (k < model.n_x() && perm[k] != k) { throw InvalidPermutation("permutation moves state observable x" + std::to_string(k + 1)); }
    }
    std::vector<std::size_t> inverse(n);
    for (std::size_t k = 0; k < n; ++k) { inverse[perm[k]] = k; }

    KoopmanModel out;
    std::vector<Monomial> obs(n);
    for (std::size_t k = 0; k < n; ++k) { obs[k] = model.phi[perm[k]]; }
    out.phi = LiftingSet(model.n_x(), std::move(obs));
    out.A = SymbolicMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (const auto& [c, f] : model.A.row(perm[k])) { out.A.set(k, inverse[c], f); }
    }
    out.J.resize(n);
    for (std::size_t k = 0; k < n; ++k) { out.J[k] = model.J[perm[k]]; }
    if (model.B) {
        out.B = ExprMatrix(n);
        for (std::size_t k = 0; k < n; ++k) { (*out.B)[k] = (*model.B)[perm[k]]; }
    }
    out.params = model.params;
    return out;
}

KoopmanModel reorder(const KoopmanModel& model, std::span<const Monomial> order) {
    std::vector<std::size_t> perm;
    perm.reserve(order.size());
    for (const auto& m : order) {
        auto k = model.phi.position(m);
        if (!k) { throw InvalidPermutation(to_string(m) + " is not an observable of the model"); }
        perm.push_back(*k);
    }
    return reorder(model, perm);
}

Vector lift(const LiftingSet& phi, std::span<const double> x) {
    if (x.size() != phi.n_x()) { throw DimensionError("lift: state dimension mismatch"); }
    Vector z(static_cast<Eigen::Index>(phi.size()));
    for (std::size_t k = 0; k < phi.size(); ++k) { z[static_cast<Eigen::Index>(k)] = evaluate(phi[k], x); }
    return z;
}

double residual(const KoopmanModel& model, const SystemSpec& spec, std::span<const double> x) {
    if (x.size() != model.n_x() || spec.n_x != model.n_x()) { throw DimensionError("residual: state dimension mismatch"); }
    std::vector<double> f(spec.n_x);
    for (std::size_t i = 0; i < spec.n_x; ++i) { f[i] = spec.vector_field(i).evaluate(x, spec.params); }
    const Vector z = lift(model.phi, x);
    double worst = 0.0;
    for (std::size_t k = 0; k < model.n_f(); ++k) {
        double lhs = 0.0;
        for (std::size_t i = 0; i < spec.n_x; ++i) { lhs += model.J[k][i].evaluate(x) * f[i]; }
        double rhs = 0.0;
        for (const auto& [c, form] : model.A.row(k)) { rhs += form.evaluate(model.params) * z[static_cast<Eigen::Index>(c)]; }
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

NumericModel::NumericModel(std::size_t n_x, Matrix A, std::optional<ExprMatrix> B)
  : n_x_(n_x)
  , A_(std::move(A))
  , B_(std::move(B)) {
    if (A_.rows() != A_.cols() || static_cast<std::size_t>(A_.rows()) < n_x_) { throw DimensionError("numeric model: bad A shape"); }
    if (B_ && B_->size() != static_cast<std::size_t>(A_.rows())) { throw DimensionError("numeric model: B rows differ from A"); }
}

Matrix NumericModel::B_at_state(std::span<const double> x) const {
    if (x.size() != n_x_) { throw DimensionError("B(x): state dimension mismatch"); }
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n_f()), static_cast<Eigen::Index>(n_u()));
    if (!B_) { return out; }
    for (std::size_t k = 0; k < n_f(); ++k) {
        for (std::size_t u = 0; u < n_u(); ++u) {
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(u)) = (*B_)[k][u].evaluate(x);
        }
    }
    return out;
}

Matrix NumericModel::B_at_lifted(std::span<const double> z) const {
    if (z.size() != n_f()) { throw DimensionError("B_z(p): lifted dimension mismatch"); }
    // the scheduling map reads state x_i from lifted coordinate z_i
    return B_at_state(z.first(n_x_));
}

NumericModel eval_numeric(const KoopmanModel& model) {
    return NumericModel(model.n_x(), model.A.evaluate(model.params), model.B);
}

} // namespace polykoop
