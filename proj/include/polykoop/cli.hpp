#pragma once

#include "polykoop/monomial.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace polykoop {

/// Entry point of the polykoop tool; args excludes the program name.
/// Returns 0 on success, 1 on a failed check or any error, 2 on usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Observable order file: one exponent vector per line, entries separated by spaces or
/// commas; blank lines and '#' comments are skipped. Throws Error.
std::vector<Monomial> parse_order(std::string_view text, std::size_t n_x);

/// The residual-check pass criterion: max residual not above the threshold.
inline bool residual_passes(double max_residual, double threshold) { return max_residual <= threshold; }

inline constexpr double default_residual_threshold = 1e-9;

} // namespace polykoop
