#pragma once

#include "polykoop/simulate.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace polykoop {

/// Header "t,<names...>", one row per sample, %.17g reals, LF endings.
std::string write_trajectory(const Trajectory& traj, const std::vector<std::string>& names);

/// A CSV with a header row whose first column is time.
struct CsvTable {
    std::vector<std::string> names; // excluding the time column
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
};

/// Throws Error on malformed input.
CsvTable read_csv_table(std::string_view text);

/// Sampled, zero-order-held input signal from a table with one column per channel.
InputSignal input_from_table(const CsvTable& table);

} // namespace polykoop
