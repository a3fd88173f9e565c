#include "polykoop/system.hpp"

#include "polykoop/error.hpp"

namespace polykoop {

SystemSpec::SystemSpec(std::size_t n)
  : n_x(n) {
    states.reserve(n);
    for (std::size_t i = 0; i < n; ++i) { states.push_back({ParamId::linear(i), ParamPolynomial(n)}); }
}

void SystemSpec::set_linear(std::size_t state, std::optional<double> value, std::string label) {
    if (state >= n_x) { throw DimensionError("state index out of range"); }
    ParamId id = ParamId::linear(state, std::move(label));
    states[state].linear = id;
    if (value) { params.bind(id, *value); }
}

ParamId SystemSpec::add_term(std::size_t state, const Monomial& m, std::optional<double> value, std::string label) {
    if (state >= n_x) { throw DimensionError("state index out of range"); }
    if (m.dim() != n_x) { throw DimensionError("term monomial dimension mismatch"); }
    ParamId id = poly_coeff_id(state, m, std::move(label));
    states[state].nonlinear.add_term(m, ParamLinForm(id));
    if (value) { params.bind(id, *value); }
    return id;
}

void SystemSpec::set_input(ExprMatrix gain) {
    if (gain.empty()) {
        g.clear();
        n_u = 0;
        return;
    }
    if (gain.size() != n_x) { throw DimensionError("input map must have n_x rows"); }
    const std::size_t width = gain.front().size();
    for (const auto& row : gain) {
        if (row.size() != width) { throw DimensionError("input map rows differ in width"); }
        for (const auto& e : row) {
            if (auto v = e.max_variable(); v && *v >= n_x) { throw DimensionError("input map references a state beyond n_x"); }
        }
    }
    n_u = width;
    g = std::move(gain);
    if (n_u == 0) { g.clear(); }
}

ParamPolynomial SystemSpec::vector_field(std::size_t state) const {
    ParamPolynomial p = states.at(state).nonlinear;
    p.add_term(Monomial::unit(n_x, state), ParamLinForm(states[state].linear));
    return p;
}

ParamId poly_coeff_id(std::size_t state, const Monomial& m, std::string label) {
    const auto& e = m.exponents();
    bool triangular = true;
    for (std::size_t k = state; k < e.size(); ++k) { triangular = triangular && e[k] == 0; }
    if (triangular) {
        return ParamId::poly(state, std::vector<int>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(state)), std::move(label));
    }
    return ParamId::poly(state, e, std::move(label));
}

} // namespace polykoop
