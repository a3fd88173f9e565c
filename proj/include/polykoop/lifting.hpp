#pragma once

#include "polykoop/monomial.hpp"
#include "polykoop/polynomial.hpp"
#include "polykoop/system.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polykoop {

struct StructureViolation {
    enum class Reason {
        FirstStateNonlinear, // f_1 must be the zero polynomial
        UpperDependence,     // a term of f_i depends on x_i or a later state
        DimensionMismatch,
    };
    std::size_t state = 0;
    Monomial monomial;
    Reason reason = Reason::UpperDependence;

    std::string message() const;
};

struct StructureReport {
    std::vector<StructureViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
};

/// Checks the lower-triangular structure. Violations are reported, not thrown.
StructureReport validate_structure(const SystemSpec& spec);

/// d/dt m along the autonomous vector field: sum_i j_i (m / x_i)(a_i x_i + f_i).
ParamPolynomial lie_derivative(const Monomial& m, const SystemSpec& spec);

/// Ordered observable set Phi. The first n_x entries are the unit monomials x_1..x_n.
class LiftingSet {
public:
    LiftingSet() = default;
    /// Throws InvalidPermutation if the sequence does not start with x_1..x_n or repeats.
    LiftingSet(std::size_t n_x, std::vector<Monomial> observables);

    std::size_t n_x() const noexcept { return n_x_; }
    std::size_t size() const noexcept { return observables_.size(); }
    const std::vector<Monomial>& observables() const noexcept { return observables_; }
    const Monomial& operator[](std::size_t k) const { return observables_.at(k); }
    std::optional<std::size_t> position(const Monomial& m) const;
    bool contains(const Monomial& m) const { return lookup_.contains(m); }

    friend bool operator==(const LiftingSet& a, const LiftingSet& b) { return a.observables_ == b.observables_; }

private:
    std::size_t n_x_ = 0;
    std::vector<Monomial> observables_;
    std::map<Monomial, std::size_t> lookup_;
};

inline constexpr std::size_t default_lifting_cap = 100'000;

/// Worklist closure of {x_1..x_n} under lie_derivative. Observables appear in discovery
/// order; monomials first found by the same derivative are appended in graded order.
/// Never reads numeric parameter values. Throws CapExceeded.
LiftingSet compute_lifting(const SystemSpec& spec, std::size_t cap = default_lifting_cap);

/// W_1..W_n: W_i holds x_i and the observables first needed once state i joins the
/// closure, in Phi order. Their union is Phi.
std::vector<std::vector<Monomial>> decompose_per_state(const LiftingSet& phi, const SystemSpec& spec);

} // namespace polykoop
