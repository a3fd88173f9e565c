#pragma once

#include "polykoop/model.hpp"

#include <string>

namespace polykoop {

/// Entries like "3a_1", "a_1+a_2+a_3", "2alpha2_3" and "0", space-aligned per column.
std::string render_symbolic(const SymbolicMatrix& A);

/// One line per row, comma separated, 17 significant digits, LF endings.
std::string render_csv(const Matrix& M);

/// dPhi/dx with entries like "10*x1^9"; rows follow Phi.
std::string render_jacobian(const Jacobian& J);

/// B(x) entries, one row per observable.
std::string render_exprs(const ExprMatrix& B);

std::string to_string(const JacobianEntry& e);

/// Generic aligned table.
std::string align_columns(const std::vector<std::vector<std::string>>& cells);

} // namespace polykoop
