#include "polykoop/cli.hpp"

#include "polykoop/error.hpp"
#include "polykoop/lifting.hpp"
#include "polykoop/model.hpp"
#include "polykoop/render.hpp"
#include "polykoop/simulate.hpp"
#include "polykoop/spec_io.hpp"
#include "polykoop/trajectory_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

namespace polykoop {

namespace fs = std::filesystem;

std::vector<Monomial> parse_order(std::string_view text, std::size_t n_x) {
    std::vector<Monomial> order;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) { line.erase(hash); }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::vector<int> e;
        std::string tok;
        while (fields >> tok) {
            int v = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0) {
                throw Error("order file line " + std::to_string(line_no) + ": bad exponent '" + tok + "'");
            }
            e.push_back(v);
        }
        if (e.empty()) { continue; }
        if (e.size() != n_x) {
            throw Error("order file line " + std::to_string(line_no) + ": expected " + std::to_string(n_x) + " exponents");
        }
        order.emplace_back(std::move(e));
    }
    return order;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) { throw Error("cannot open " + path); }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) { throw Error("cannot write " + path.string()); }
    out << content;
}

// Parses the spec file, printing located diagnostics on failure.
std::optional<SpecDocument> load_spec(const std::string& path, std::ostream& err) {
    ParseResult r = parse_spec(read_file(path));
    for (const auto& d : r.diagnostics) { err << path << ":" << d.to_string() << "\n"; }
    return std::move(r.document);
}

std::vector<double> parse_csv_numbers(const std::string& text) {
    std::vector<double> out;
    std::string_view s = text;
    for (;;) {
        const auto comma = s.find(',');
        std::string_view item = s.substr(0, comma);
        while (!item.empty() && item.front() == ' ') { item.remove_prefix(1); }
        while (!item.empty() && item.back() == ' ') { item.remove_suffix(1); }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size()) { throw Error("malformed number list '" + text + "'"); }
        out.push_back(v);
        if (comma == std::string_view::npos) { break; }
        s.remove_prefix(comma + 1);
    }
    return out;
}

std::string observable_listing(const LiftingSet& phi) {
    std::vector<std::vector<std::string>> cells;
    for (std::size_t k = 0; k < phi.size(); ++k) { cells.push_back({"z" + std::to_string(k + 1), "=", to_string(phi[k])}); }
    return align_columns(cells);
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    auto doc = load_spec(path, err);
    if (!doc) { return 1; }
    std::size_t terms = 0;
    for (const auto& eq : doc->system.states) { terms += eq.nonlinear.size(); }
    out << path << ": ok (" << doc->system.n_x << " states, " << terms << " polynomial terms, " << doc->system.n_u
        << " inputs)\n";
    return 0;
}

int cmd_lift(const std::string& path, std::ostream& out, std::ostream& err) {
    auto doc = load_spec(path, err);
    if (!doc) { return 1; }
    const LiftingSet phi = compute_lifting(doc->system);
    out << "Phi (" << phi.size() << " observables):\n" << observable_listing(phi);
    const auto w = decompose_per_state(phi, doc->system);
    for (std::size_t i = 0; i < w.size(); ++i) {
        out << "W_" << i + 1 << " = {";
        for (std::size_t k = 0; k < w[i].size(); ++k) { out << (k ? ", " : "") << to_string(w[i][k]); }
        out << "}\n";
    }
    return 0;
}

struct MatricesOptions {
    std::string spec;
    std::string order;
    bool numeric = false;
    std::string out_dir;
};

int cmd_matrices(const MatricesOptions& opt, std::ostream& out, std::ostream& err) {
    auto doc = load_spec(opt.spec, err);
    if (!doc) { return 1; }
    KoopmanModel model = build_model(doc->system);
    if (!opt.order.empty()) { model = reorder(model, parse_order(read_file(opt.order), model.n_x())); }

    std::vector<std::pair<std::string, std::string>> sections;
    sections.emplace_back("phi.txt", observable_listing(model.phi));
    if (opt.numeric) {
        sections.emplace_back("A.csv", render_csv(eval_numeric(model).A()));
        sections.emplace_back("C.csv", render_csv(model.selection()));
    } else {
        sections.emplace_back("A.txt", render_symbolic(model.A));
        std::vector<std::vector<std::string>> c(model.n_x(), std::vector<std::string>(model.n_f(), "0"));
        for (std::size_t i = 0; i < model.n_x(); ++i) { c[i][i] = "1"; }
        sections.emplace_back("C.txt", align_columns(c));
    }
    sections.emplace_back("J.txt", render_jacobian(model.J));
    if (model.B) { sections.emplace_back("B.txt", render_exprs(*model.B)); }

    if (opt.out_dir.empty()) {
        for (const auto& [name, body] : sections) { out << "# " << name.substr(0, name.find('.')) << "\n" << body << "\n"; }
    } else {
        fs::create_directories(opt.out_dir);
        for (const auto& [name, body] : sections) { write_file(fs::path(opt.out_dir) / name, body); }
        out << "wrote " << sections.size() << " files to " << opt.out_dir << "\n";
    }
    return 0;
}

struct SimulateOptions {
    std::string spec;
    std::string mode = "both";
    std::string input;
    std::optional<double> h;
    std::optional<double> T;
    std::string x0;
    bool expm = false;
    std::string out_dir = "simulation";
};

std::string plot_script(std::size_t n_x, bool nonlinear, bool lifted, bool error) {
    const std::string last = std::to_string(n_x + 1);
    std::string s = "# gnuplot script; run from this directory: gnuplot plot.gp\n"
                    "set datafile separator ','\n"
                    "set key autotitle columnhead\n"
                    "set terminal pngcairo size 900,600\n"
                    "set xlabel 't'\n"
                    "set output 'states.png'\n"
                    "plot ";
    std::vector<std::string> parts;
    if (nonlinear) { parts.push_back("for [i=2:" + last + "] 'nonlinear.csv' using 1:i with lines lw 2"); }
    if (lifted) { parts.push_back("for [i=2:" + last + "] 'lifted_states.csv' using 1:i with lines dashtype 2"); }
    for (std::size_t k = 0; k < parts.size(); ++k) { s += (k ? ", \\\n     " : "") + parts[k]; }
    s += "\n";
    if (error) {
        s += "set output 'error.png'\n"
             "set logscale y\n"
             "set ylabel 'absolute error'\n"
             "plot for [i=2:" + last + "] 'error.csv' using 1:i with lines\n";
    }
    return s;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    auto doc = load_spec(opt.spec, err);
    if (!doc) { return 1; }
    const SystemSpec& sys = doc->system;

    std::vector<double> x0;
    if (!opt.x0.empty()) {
        x0 = parse_csv_numbers(opt.x0);
    } else if (doc->sim.x0) {
        x0 = *doc->sim.x0;
    } else {
        err << "no initial state: pass --x0 or set sim.x0 in the spec\n";
        return 1;
    }
    if (x0.size() != sys.n_x) {
        err << "--x0 has " << x0.size() << " entries, expected " << sys.n_x << "\n";
        return 1;
    }
    const double h = opt.h.value_or(doc->sim.h.value_or(1e-3));
    const double T = opt.T.value_or(doc->sim.T.value_or(10.0));

    const std::string input_text = !opt.input.empty() ? opt.input : doc->sim.input.value_or("zero");
    auto input = parse_input_option(input_text);
    if (!input) {
        err << "bad input signal '" << input_text << "'\n";
        return 1;
    }
    InputSignal u = InputSignal::zero(sys.n_u);
    if (input->kind == InputOption::Kind::Step) {
        std::vector<double> amp = input->amplitude;
        if (amp.size() == 1 && sys.n_u > 1) { amp.assign(sys.n_u, amp.front()); }
        u = InputSignal::step(std::move(amp), input->onset);
    } else if (input->kind == InputOption::Kind::File) {
        u = input_from_table(read_csv_table(read_file(input->path)));
    }
    if (!u.is_zero() && !sys.has_input()) {
        err << "the system has no input map; only the zero input is allowed\n";
        return 1;
    }
    if (opt.expm && !u.is_zero()) {
        err << "--expm propagates the autonomous model only; use --input zero\n";
        return 1;
    }

    const bool run_nonlinear = opt.mode != "lifted";
    const bool run_lifted = opt.mode != "nonlinear";
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);

    std::vector<std::string> x_names;
    for (std::size_t i = 0; i < sys.n_x; ++i) { x_names.push_back("x" + std::to_string(i + 1)); }

    std::optional<Trajectory> xs_nl;
    std::optional<Trajectory> xs_lift;
    if (run_nonlinear) {
        xs_nl = integrate_nonlinear(sys, x0, u, h, T);
        write_file(dir / "nonlinear.csv", write_trajectory(*xs_nl, x_names));
    }
    if (run_lifted) {
        const KoopmanModel model = build_model(sys);
        const NumericModel numeric = eval_numeric(model);
        const Vector z0 = lift(model.phi, x0);
        const Trajectory zs = opt.expm ? expm_propagate(numeric.A(), z0, h, T) : integrate_lifted(numeric, z0, u, h, T);
        std::vector<std::string> z_names;
        for (std::size_t k = 0; k < model.n_f(); ++k) { z_names.push_back("z" + std::to_string(k + 1)); }
        write_file(dir / "lifted.csv", write_trajectory(zs, z_names));
        xs_lift = project(zs, model.selection());
        write_file(dir / "lifted_states.csv", write_trajectory(*xs_lift, x_names));
    }
    const bool both = xs_nl && xs_lift;
    if (both) {
        const ErrorReport report = compare(*xs_nl, *xs_lift);
        std::vector<std::string> e_names;
        for (const auto& n : x_names) { e_names.push_back("e_" + n); }
        write_file(dir / "error.csv", write_trajectory(report.series, e_names));
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", report.sup);
        out << "sup error (nonlinear vs lifted): " << buf << "\n";
        for (std::size_t i = 0; i < sys.n_x; ++i) {
            std::snprintf(buf, sizeof buf, "%.3e", report.per_channel_max[static_cast<Eigen::Index>(i)]);
            out << "  x" << i + 1 << ": " << buf << "\n";
        }
    }
    write_file(dir / "plot.gp", plot_script(sys.n_x, run_nonlinear, run_lifted, both));
    out << "wrote " << step_count(h, T) + 1 << " samples per trajectory to " << opt.out_dir << "\n";
    return 0;
}

struct ResidualOptions {
    std::string spec;
    std::size_t samples = 1000;
    std::uint64_t seed = 42;
    double box = 1.0;
    double threshold = default_residual_threshold;
};

int cmd_residual(const ResidualOptions& opt, std::ostream& out, std::ostream& err) {
    auto doc = load_spec(opt.spec, err);
    if (!doc) { return 1; }
    const SystemSpec& sys = doc->system;
    const KoopmanModel model = build_model(sys);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(-opt.box, opt.box);
    double worst = 0.0;
    std::vector<double> x(sys.n_x);
    for (std::size_t s = 0; s < opt.samples; ++s) {
        for (auto& v : x) { v = dist(rng); }
        const double r = residual(model, sys, x);
        worst = std::isnan(r) ? r : std::max(worst, r);
        if (std::isnan(worst)) { break; }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "max residual: %.17g over %zu samples (threshold %g)", worst, opt.samples, opt.threshold);
    out << buf << "\n";
    if (!residual_passes(worst, opt.threshold)) {
        err << "residual above threshold\n";
        return 1;
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact finite-dimensional Koopman embeddings of lower-triangular polynomial systems", "polykoop"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);

    std::string validate_spec;
    auto* validate = app.add_subcommand("validate", "Parse a spec file and check the triangular structure");
    validate->add_option("spec", validate_spec, "System spec (JSON)")->required();

    std::string lift_spec;
    auto* lift_cmd = app.add_subcommand("lift", "Print the lifting Phi and its per-state decomposition");
    lift_cmd->add_option("spec", lift_spec, "System spec (JSON)")->required();

    MatricesOptions mat;
    auto* matrices = app.add_subcommand("matrices", "Emit A, C, dPhi/dx and B");
    matrices->add_option("spec", mat.spec, "System spec (JSON)")->required();
    matrices->add_option("--order", mat.order, "File listing the observables in the desired order");
    matrices->add_flag("--numeric", mat.numeric, "Evaluate A and C under the spec's parameter values (CSV)");
    matrices->add_option("--out", mat.out_dir, "Directory to write the matrices into instead of stdout");

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Integrate the nonlinear and lifted systems and export CSVs");
    simulate->add_option("spec", sim.spec, "System spec (JSON)")->required();
    simulate->add_option("--mode", sim.mode, "nonlinear | lifted | both")->check(CLI::IsMember({"nonlinear", "lifted", "both"}));
    simulate->add_option("--input", sim.input, "zero | step:<amp>@<t> | file:<path>");
    simulate->add_option("--h", sim.h, "Fixed step size")->check(CLI::PositiveNumber);
    simulate->add_option("--T", sim.T, "Horizon")->check(CLI::NonNegativeNumber);
    simulate->add_option("--x0", sim.x0, "Initial state, comma separated");
    simulate->add_flag("--expm", sim.expm, "Propagate the lifted model with the matrix exponential");
    simulate->add_option("--out", sim.out_dir, "Output directory");

    ResidualOptions res;
    auto* residual_cmd = app.add_subcommand("residual-check", "Check J(x)f(x) = A Phi(x) at random states");
    residual_cmd->add_option("spec", res.spec, "System spec (JSON)")->required();
    residual_cmd->add_option("--samples", res.samples, "Number of random states")->check(CLI::PositiveNumber);
    residual_cmd->add_option("--seed", res.seed, "Random seed");
    residual_cmd->add_option("--box", res.box, "Sample x uniformly in [-box, box]^n")->check(CLI::PositiveNumber);
    residual_cmd->add_option("--threshold", res.threshold, "Failure threshold on the max residual");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << "run 'polykoop --help' for usage\n";
        return 2;
    }

    try {
        if (*validate) { return cmd_validate(validate_spec, out, err); }
        if (*lift_cmd) { return cmd_lift(lift_spec, out, err); }
        if (*matrices) { return cmd_matrices(mat, out, err); }
        if (*simulate) { return cmd_simulate(sim, out, err); }
        if (*residual_cmd) { return cmd_residual(res, out, err); }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace polykoop
