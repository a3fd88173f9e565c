#include "polykoop/lifting.hpp"

#include "polykoop/error.hpp"

#include <algorithm>
#include <set>

namespace polykoop {

std::string StructureViolation::message() const {
    const std::string where = "state " + std::to_string(state + 1) + ", monomial " + to_string(monomial);
    switch (reason) {
    case Reason::FirstStateNonlinear: return where + ": the first state equation must be linear (x1' = a1*x1)";
    case Reason::UpperDependence:
        return where + ": f_" + std::to_string(state + 1) + " may only depend on x1..x" + std::to_string(state);
    case Reason::DimensionMismatch: return where + ": monomial dimension differs from n_x";
    }
    return where;
}

StructureReport validate_structure(const SystemSpec& spec) {
    StructureReport report;
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        for (const auto& [m, coeff] : spec.states[i].nonlinear.terms()) {
            if (m.dim() != spec.n_x) {
                report.violations.push_back({i, m, StructureViolation::Reason::DimensionMismatch});
                continue;
            }
            if (i == 0) {
                report.violations.push_back({i, m, StructureViolation::Reason::FirstStateNonlinear});
                continue;
            }
            for (std::size_t k = i; k < spec.n_x; ++k) {
                if (m.exponent(k) != 0) {
                    report.violations.push_back({i, m, StructureViolation::Reason::UpperDependence});
                    break;
                }
            }
        }
    }
    return report;
}

ParamPolynomial lie_derivative(const Monomial& m, const SystemSpec& spec) {
    if (m.dim() != spec.n_x) { throw DimensionError("lie derivative: monomial dimension differs from n_x"); }
    ParamPolynomial out(spec.n_x);
    for (std::size_t i = 0; i < spec.n_x; ++i) {
        auto d = partial(m, i);
        if (!d) { continue; }
        const Rational j(d->coeff);
        // j * (m / x_i) * a_i x_i
        out.add_term(m, j * ParamLinForm(spec.states[i].linear));
        // j * (m / x_i) * f_i
        for (const auto& [fm, fc] : spec.states[i].nonlinear.terms()) { out.add_term(d->mono * fm, j * fc); }
    }
    return out;
}

LiftingSet::LiftingSet(std::size_t n_x, std::vector<Monomial> observables)
  : n_x_(n_x)
  , observables_(std::move(observables)) {
    if (observables_.size() < n_x_) { throw InvalidPermutation("lifting must contain every state"); }
    for (std::size_t k = 0; k < observables_.size(); ++k) {
        const Monomial& m = observables_[k];
        if (m.dim() != n_x_) { throw DimensionError("observable dimension differs from n_x"); }
        if (k < n_x_ && m != Monomial::unit(n_x_, k)) {
            throw InvalidPermutation("observable " + std::to_string(k + 1) + " must be x" + std::to_string(k + 1));
        }
        if (!lookup_.emplace(m, k).second) { throw InvalidPermutation("duplicate observable " + to_string(m)); }
    }
}

std::optional<std::size_t> LiftingSet::position(const Monomial& m) const {
    auto it = lookup_.find(m);
    if (it == lookup_.end()) { return std::nullopt; }
    return it->second;
}

namespace {

std::vector<Monomial> close_under_lie(const SystemSpec& spec, std::vector<Monomial> seeds, std::size_t cap) {
    std::set<Monomial> seen(seeds.begin(), seeds.end());
    std::vector<Monomial>& order = seeds;
    if (order.size() > cap) { throw CapExceeded("lifting cap of " + std::to_string(cap) + " observables exceeded"); }
    // order doubles as the FIFO worklist: everything past `next` is unprocessed
    for (std::size_t next = 0; next < order.size(); ++next) {
        const ParamPolynomial d = lie_derivative(order[next], spec);
        // terms() iterates in graded order, which fixes the order among new monomials
        for (const auto& [m, coeff] : d.terms()) {
            if (!seen.insert(m).second) { continue; }
            order.push_back(m);
            if (order.size() > cap) {
                throw CapExceeded("lifting cap of " + std::to_string(cap) + " observables exceeded");
            }
        }
    }
    return order;
}

std::vector<Monomial> state_seeds(std::size_t n_x, std::size_t count) {
    std::vector<Monomial> seeds;
    for (std::size_t i = 0; i < count; ++i) { seeds.push_back(Monomial::unit(n_x, i)); }
    return seeds;
}

} // namespace

LiftingSet compute_lifting(const SystemSpec& spec, std::size_t cap) {
    return LiftingSet(spec.n_x, close_under_lie(spec, state_seeds(spec.n_x, spec.n_x), cap));
}

std::vector<std::vector<Monomial>> decompose_per_state(const LiftingSet& phi, const SystemSpec& spec) {
    const std::size_t n = spec.n_x;
    std::vector<std::size_t> owner(phi.size(), n == 0 ? 0 : n - 1);
    std::vector<bool> assigned(phi.size(), false);
    for (std::size_t i = 0; i < n; ++i) {
        // The first i+1 equations form a closed subsystem, so this closure stays inside it.
        for (const auto& m : close_under_lie(spec, state_seeds(n, i + 1), phi.size() + n)) {
            auto k = phi.position(m);
            if (!k || assigned[*k]) { continue; }
            owner[*k] = i;
            assigned[*k] = true;
        }
    }
    std::vector<std::vector<Monomial>> w(n);
    for (std::size_t k = 0; k < phi.size(); ++k) { w[owner[k]].push_back(phi[k]); }
    return w;
}

} // namespace polykoop
