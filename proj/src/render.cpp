#include "polykoop/render.hpp"

#include <algorithm>
#include <cstdio>

namespace polykoop {

std::string align_columns(const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::size_t> width;
    for (const auto& row : cells) {
        if (width.size() < row.size()) { width.resize(row.size(), 0); }
        for (std::size_t c = 0; c < row.size(); ++c) { width[c] = std::max(width[c], row[c].size()); }
    }
    std::string out;
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) { line += "  "; }
            line += row[c];
            if (c + 1 < row.size()) { line.append(width[c] - row[c].size(), ' '); }
        }
        out += line + "\n";
    }
    return out;
}

std::string render_symbolic(const SymbolicMatrix& A) {
    std::vector<std::vector<std::string>> cells(A.size(), std::vector<std::string>(A.size()));
    for (std::size_t r = 0; r < A.size(); ++r) {
        for (std::size_t c = 0; c < A.size(); ++c) { cells[r][c] = to_string(A.at(r, c)); }
    }
    return align_columns(cells);
}

std::string render_csv(const Matrix& M) {
    std::string out;
    char buf[40];
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        for (Eigen::Index c = 0; c < M.cols(); ++c) {
            if (c > 0) { out += ','; }
            std::snprintf(buf, sizeof buf, "%.17g", M(r, c));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::string to_string(const JacobianEntry& e) {
    if (e.is_zero()) { return "0"; }
    if (e.mono.is_constant()) { return std::to_string(e.coeff); }
    if (e.coeff == 1) { return to_string(e.mono); }
    return std::to_string(e.coeff) + "*" + to_string(e.mono);
}

std::string render_jacobian(const Jacobian& J) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : J) {
        auto& out = cells.emplace_back();
        for (const auto& e : row) { out.push_back(to_string(e)); }
    }
    return align_columns(cells);
}

std::string render_exprs(const ExprMatrix& B) {
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : B) {
        auto& out = cells.emplace_back();
        for (const auto& e : row) { out.push_back(to_string(e)); }
    }
    return align_columns(cells);
}

} // namespace polykoop
