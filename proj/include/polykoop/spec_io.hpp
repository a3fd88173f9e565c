#pragma once

#include "polykoop/system.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace polykoop {

struct Diagnostic {
    enum class Category { Syntax, Dimension, Triangularity };

    std::size_t line = 0; // 1-based; 0 when unknown
    std::size_t column = 0;
    Category category = Category::Syntax;
    std::string message;

    std::string to_string() const;
};

/// Simulation settings a spec file may carry; the CLI overrides them per flag.
struct SimDefaults {
    std::optional<std::vector<double>> x0;
    std::optional<double> h;
    std::optional<double> T;
    std::optional<std::string> input; // same syntax as the CLI --input option

    friend bool operator==(const SimDefaults&, const SimDefaults&) = default;
};

struct SpecDocument {
    SystemSpec system;
    SimDefaults sim;

    friend bool operator==(const SpecDocument&, const SpecDocument&) = default;
};

struct ParseResult {
    std::optional<SpecDocument> document; // set iff diagnostics is empty
    std::vector<Diagnostic> diagnostics;

    bool ok() const noexcept { return document.has_value(); }
};

/// Parsed form of the input option "zero", "step:<amp>[,<amp>...]@<t>" or "file:<path>".
struct InputOption {
    enum class Kind { Zero, Step, File };
    Kind kind = Kind::Zero;
    std::vector<double> amplitude;
    double onset = 0.0;
    std::string path;
};

/// Empty on malformed text.
std::optional<InputOption> parse_input_option(std::string_view text);

/// Parses a JSON system description and runs the structural check on it.
///
///   {
///     "n_x": 2,
///     "states": [
///       {"a": {"name": "a1", "value": -0.5}},
///       {"a": -0.5, "terms": [{"coeff": {"name": "alpha2_2", "value": 0.3}, "exponents": [2, 0]}]}
///     ],
///     "input": {"g": [["1"], ["sin(x1)"]]},
///     "sim": {"x0": [1, 1], "h": 0.001, "T": 10, "input": "step:1@0"}
///   }
///
/// "a" and "coeff" accept a symbol name (unbound), a number (bound, default name) or an
/// object with optional "name" and "value". Never throws on bad input.
ParseResult parse_spec(std::string_view text);

/// Inverse of parse_spec: parse_spec(render_spec(d)) reproduces d.
std::string render_spec(const SpecDocument& doc);

} // namespace polykoop
