#pragma once

#include "polykoop/lifting.hpp"
#include "polykoop/model.hpp"
#include "polykoop/system.hpp"

#include <cctype>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace testsupport {

using namespace polykoop;

inline Monomial mono(std::vector<int> e) { return Monomial(std::move(e)); }

// The four-state example: x1' = a1 x1, x2' = a2 x2 + alpha x1^3,
// x3' = a3 x3 + alpha x1 x2 + alpha x2^2, x4' = a4 x4 + alpha x1 x2 x3.
inline SystemSpec example_system(bool with_input = false) {
    SystemSpec s(4);
    for (std::size_t i = 0; i < 4; ++i) { s.set_linear(i, -0.5); }
    s.add_term(1, mono({3, 0, 0, 0}), -0.2);
    s.add_term(2, mono({1, 1, 0, 0}), -0.2);
    s.add_term(2, mono({0, 2, 0, 0}), -0.2);
    s.add_term(3, mono({1, 1, 1, 0}), -0.2);
    if (with_input) {
        s.set_input({{InputExpr::constant(1.0)},
                     {InputExpr::variable(0)},
                     {InputExpr::power(InputExpr::variable(1), 2)},
                     {InputExpr::sin(InputExpr::variable(2))}});
    }
    return s;
}

// Observable order of the reference matrices.
inline std::vector<Monomial> reference_order() {
    return {mono({1, 0, 0, 0}), mono({0, 1, 0, 0}), mono({0, 0, 1, 0}), mono({0, 0, 0, 1}),
            mono({3, 0, 0, 0}), mono({1, 1, 0, 0}), mono({0, 2, 0, 0}), mono({4, 0, 0, 0}),
            mono({3, 1, 0, 0}), mono({6, 0, 0, 0}), mono({1, 1, 1, 0}), mono({4, 0, 1, 0}),
            mono({2, 2, 0, 0}), mono({1, 3, 0, 0}), mono({5, 1, 0, 0}), mono({4, 2, 0, 0}),
            mono({8, 0, 0, 0}), mono({7, 1, 0, 0}), mono({10, 0, 0, 0})};
}

// Verbatim LaTeX rows of the reference state matrix.
inline constexpr std::string_view reference_A_latex = R"(
a_1 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0\\
0 & a_2 & 0 & 0 & \alpha^2_3 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & a_3 & 0 & 0 & \alpha^3_{11} & \alpha^3_{02} & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & 0 & a_4 & 0 & 0 & 0 & 0 & 0 & 0 & \alpha^4_{111} & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & 0 & 0 & 3a_1 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & 0 & 0 & 0 & a_1+a_2 & 0 & \alpha^2_3 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & 0 & 0 & 0 & 0 & 2a_2 & 0 & 2\alpha^2_3 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 4a_1 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 3a_1+a_2 & \alpha^2_3 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 6a_1 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 \\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & a_1+a_2+a_3 & \alpha^2_3 & \alpha^3_{11} & \alpha^3_{02} & 0 & 0 & 0 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 4a_1+a_3 & 0 & 0 & \alpha^3_{11} & \alpha^3_{02} & 0 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 2a_1+2a_2 & 0 & 2\alpha^2_3 & 0 & 0 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & a_1+3a_2 & 0 & 3\alpha^2_3 & 0 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 5a_1+a_2 & 0 & \alpha^2_3 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 4a_1+2a_2 & 0 & 2\alpha^2_3 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 8a_1 & 0 & 0\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 7a_1+a_2 & \alpha^2_3\\
0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 10a_1
)";

// Verbatim LaTeX rows of the reference Jacobian, transposed (rows are states).
inline constexpr std::string_view reference_J_latex = R"(
1 & 0 & 0 & 0 & 3x^2_1 & x_2 & 0 & 4x_1^3 & 3x_1^2x_2 & 6x_1^5 & x_2x_3 & 4x_1^3x_3 & 2x_1x_2^2 & x_2^3 & 5x_1^4x_2 & 4x_1^3x^2_2 & 8x_1^7 & 7x_1^6x_2 & 10 x_1^9\\
0 & 1 & 0 & 0 & 0 & x_1 & 2x_2 & 0 & x_1^3 & 0 & x_1x_3 & 0 & 2x_1^2x_2 & 3x_1x_2^2 & x_1^5 & 2x_1^4 x_2 & 0 & x_1^7 & 0\\
0 & 0 & 1 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & x_1x_2 & x_1^4 & 0 & 0 & 0 & 0 & 0 & 0 & 0\\
0 & 0 & 0 & 1 &  0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0
)";

inline std::vector<std::vector<std::string>> latex_cells(std::string_view body) {
    std::vector<std::vector<std::string>> rows;
    std::string text(body);
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find("\\\\", pos);
        std::string line = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? text.size() : end + 2;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, '&')) {
            std::string compact;
            for (char c : cell) {
                if (!std::isspace(static_cast<unsigned char>(c))) { compact += c; }
            }
            cells.push_back(compact);
        }
        if (cells.size() > 1) { rows.push_back(std::move(cells)); }
    }
    return rows;
}

// Reads a braced or single-character script argument starting at s[i].
inline std::string script(const std::string& s, std::size_t& i) {
    if (s[i] == '{') {
        auto close = s.find('}', i);
        std::string out = s.substr(i + 1, close - i - 1);
        i = close + 1;
        return out;
    }
    return std::string(1, s[i++]);
}

inline long leading_int(const std::string& s, std::size_t& i) {
    long v = 0;
    bool any = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        v = 10 * v + (s[i++] - '0');
        any = true;
    }
    return any ? v : 1;
}

// "3a_1+a_2", "2\alpha^2_3", "\alpha^3_{11}", "0" over an n_x-state system.
inline ParamLinForm parse_latex_form(const std::string& cell) {
    ParamLinForm out;
    if (cell == "0") { return out; }
    std::size_t i = 0;
    while (i < cell.size()) {
        if (cell[i] == '+') { ++i; }
        const long k = leading_int(cell, i);
        if (cell.compare(i, 2, "a_") == 0) {
            i += 2;
            const auto state = std::stoul(script(cell, i)) - 1;
            out += ParamLinForm(ParamId::linear(state), Rational(k));
        } else if (cell.compare(i, 6, "\\alpha") == 0) {
            i += 6;
            std::string up, down;
            for (int pass = 0; pass < 2; ++pass) {
                if (cell[i] == '^') { ++i; up = script(cell, i); }
                else if (cell[i] == '_') { ++i; down = script(cell, i); }
            }
            std::vector<int> idx;
            for (char c : down) { idx.push_back(c - '0'); }
            out += ParamLinForm(ParamId::poly(std::stoul(up) - 1, idx), Rational(k));
        } else {
            throw std::runtime_error("bad latex form: " + cell);
        }
    }
    return out;
}

// "10x_1^9", "3x^2_1", "2x_1^4x_2", "1", "0".
inline JacobianEntry parse_latex_monomial(const std::string& cell, std::size_t n_x) {
    if (cell == "0") { return {}; }
    std::size_t i = 0;
    JacobianEntry e;
    e.coeff = leading_int(cell, i);
    std::vector<int> ex(n_x, 0);
    while (i < cell.size()) {
        if (cell[i] != 'x') { throw std::runtime_error("bad latex monomial: " + cell); }
        ++i;
        std::size_t var = 0;
        int power = 1;
        for (int pass = 0; pass < 2 && i < cell.size() && (cell[i] == '^' || cell[i] == '_'); ++pass) {
            const char tag = cell[i++];
            const auto arg = script(cell, i);
            if (tag == '^') { power = std::stoi(arg); } else { var = std::stoul(arg) - 1; }
        }
        ex.at(var) += power;
    }
    e.mono = Monomial(ex);
    return e;
}

// Random lower-triangular system: n in [1, max_n], up to 3 terms per f_i (i >= 2) with
// each exponent in [0, max_exp] over the preceding states.
struct RandomSystemOptions {
    std::size_t max_n = 5;
    int max_exp = 3;
    int max_terms = 3;
};

inline SystemSpec random_system(std::mt19937_64& rng, const RandomSystemOptions& opt = {}) {
    std::uniform_int_distribution<std::size_t> n_dist(1, opt.max_n);
    std::uniform_int_distribution<int> terms_dist(0, opt.max_terms);
    std::uniform_int_distribution<int> exp_dist(0, opt.max_exp);
    std::uniform_real_distribution<double> a_dist(-1.0, -0.1);
    std::uniform_real_distribution<double> c_dist(-1.0, 1.0);
    const std::size_t n = n_dist(rng);
    SystemSpec s(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.set_linear(i, a_dist(rng));
        if (i == 0) { continue; }
        const int terms = terms_dist(rng);
        for (int t = 0; t < terms; ++t) {
            std::vector<int> e(n, 0);
            for (std::size_t v = 0; v < i; ++v) { e[v] = exp_dist(rng); }
            const Monomial m(e);
            if (s.states[i].nonlinear.terms().contains(m)) { continue; }
            s.add_term(i, m, c_dist(rng));
        }
    }
    return s;
}

inline std::vector<double> random_point(std::mt19937_64& rng, std::size_t n, double box = 1.0) {
    std::uniform_real_distribution<double> d(-box, box);
    std::vector<double> x(n);
    for (auto& v : x) { v = d(rng); }
    return x;
}

// Topological check of the off-diagonal sparsity graph of A.
inline bool off_diagonal_acyclic(const SymbolicMatrix& A) {
    const std::size_t n = A.size();
    std::vector<int> indegree(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        for (const auto& [c, f] : A.row(r)) {
            if (c != r && !f.is_zero()) { ++indegree[c]; }
        }
    }
    std::vector<std::size_t> ready;
    for (std::size_t k = 0; k < n; ++k) {
        if (indegree[k] == 0) { ready.push_back(k); }
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        const auto r = ready.back();
        ready.pop_back();
        ++seen;
        for (const auto& [c, f] : A.row(r)) {
            if (c != r && !f.is_zero() && --indegree[c] == 0) { ready.push_back(c); }
        }
    }
    return seen == n;
}

} // namespace testsupport
