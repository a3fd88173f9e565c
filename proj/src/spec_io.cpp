#include "polykoop/spec_io.hpp"

#include "polykoop/lifting.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <map>
#include <set>

namespace polykoop {

using json = nlohmann::json;

std::string Diagnostic::to_string() const {
    static constexpr const char* names[] = {"syntax", "dimension", "triangularity"};
    std::string where = line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " : std::string();
    return where + names[static_cast<int>(category)] + ": " + message;
}

std::optional<InputOption> parse_input_option(std::string_view text) {
    auto parse_double = [](std::string_view s) -> std::optional<double> {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) { return std::nullopt; }
        return v;
    };
    InputOption opt;
    if (text == "zero") { return opt; }
    if (text.starts_with("file:")) {
        opt.kind = InputOption::Kind::File;
        opt.path = std::string(text.substr(5));
        if (opt.path.empty()) { return std::nullopt; }
        return opt;
    }
    if (!text.starts_with("step:")) { return std::nullopt; }
    text.remove_prefix(5);
    const auto at = text.find('@');
    if (at == std::string_view::npos) { return std::nullopt; }
    auto onset = parse_double(text.substr(at + 1));
    if (!onset) { return std::nullopt; }
    opt.kind = InputOption::Kind::Step;
    opt.onset = *onset;
    std::string_view amps = text.substr(0, at);
    for (;;) {
        const auto comma = amps.find(',');
        auto v = parse_double(amps.substr(0, comma));
        if (!v) { return std::nullopt; }
        opt.amplitude.push_back(*v);
        if (comma == std::string_view::npos) { break; }
        amps.remove_prefix(comma + 1);
    }
    return opt;
}

namespace {

// ---------------------------------------------------------------------------
// Source locations: a SAX pass that records where each JSON pointer's value ends.

struct Cursor {
    const char* begin = nullptr;
    const char* pos = nullptr;
};

// Input iterator that publishes how far the lexer has read.
class TrackingIterator {
public:
    using iterator_category = std::input_iterator_tag;
    using value_type = char;
    using difference_type = std::ptrdiff_t;
    using pointer = const char*;
    using reference = const char&;

    TrackingIterator() = default;
    TrackingIterator(const char* p, Cursor* cursor)
      : p_(p)
      , cursor_(cursor) {}

    reference operator*() const { return *p_; }
    TrackingIterator& operator++() {
        ++p_;
        if (cursor_) { cursor_->pos = p_; }
        return *this;
    }
    TrackingIterator operator++(int) {
        auto tmp = *this;
        ++*this;
        return tmp;
    }
    friend bool operator==(const TrackingIterator& a, const TrackingIterator& b) { return a.p_ == b.p_; }

private:
    const char* p_ = nullptr;
    Cursor* cursor_ = nullptr;
};

class LocationRecorder {
public:
    explicit LocationRecorder(const Cursor& cursor)
      : cursor_(cursor) {}

    std::map<std::string, std::size_t> offsets;

    bool null() { return scalar(); }
    bool boolean(bool) { return scalar(); }
    bool number_integer(json::number_integer_t) { return scalar(1); }
    bool number_unsigned(json::number_unsigned_t) { return scalar(1); }
    bool number_float(json::number_float_t, const json::string_t&) { return scalar(1); }
    bool string(json::string_t&) { return scalar(); }
    bool binary(json::binary_t&) { return scalar(); }
    bool start_object(std::size_t) { return open(false); }
    bool start_array(std::size_t) { return open(true); }
    bool key(json::string_t& k) {
        frames_.back().key = k;
        return true;
    }
    bool end_object() { return close(); }
    bool end_array() { return close(); }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) { return false; }

private:
    struct Frame {
        bool array = false;
        std::size_t index = 0;
        std::string key;
    };

    std::string pointer() const {
        std::string out;
        for (const auto& f : frames_) { out += "/" + (f.array ? std::to_string(f.index) : f.key); }
        return out;
    }

    std::size_t offset() const { return static_cast<std::size_t>(cursor_.pos - cursor_.begin); }

    // numbers are only recognised after their terminator has been read
    bool scalar(std::size_t lookahead = 0) {
        const std::size_t end = offset();
        offsets[pointer()] = end > lookahead ? end - 1 - lookahead : 0;
        advance();
        return true;
    }

    bool open(bool array) {
        const std::size_t end = offset();
        offsets[pointer()] = end > 0 ? end - 1 : 0;
        frames_.push_back({array, 0, {}});
        return true;
    }

    bool close() {
        frames_.pop_back();
        advance();
        return true;
    }

    void advance() {
        if (!frames_.empty() && frames_.back().array) { ++frames_.back().index; }
    }

    const Cursor& cursor_;
    std::vector<Frame> frames_;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// ---------------------------------------------------------------------------

class SpecReader {
public:
    SpecReader(std::string_view text, std::map<std::string, std::size_t> offsets)
      : text_(text)
      , offsets_(std::move(offsets)) {}

    std::vector<Diagnostic> diagnostics;

    std::optional<SpecDocument> read(const json& root) {
        if (!root.is_object()) {
            report("", Diagnostic::Category::Syntax, "top level must be an object");
            return std::nullopt;
        }
        const auto n_x = read_count(root, "/n_x", "n_x");
        if (!n_x) { return std::nullopt; }
        if (*n_x == 0) {
            report("/n_x", Diagnostic::Category::Dimension, "n_x must be at least 1");
            return std::nullopt;
        }
        SpecDocument doc;
        doc.system = SystemSpec(*n_x);
        read_states(root, doc.system);
        for (const auto& v : validate_structure(doc.system).violations) {
            report(term_ptrs_[{v.state, v.monomial}], Diagnostic::Category::Triangularity, v.message());
        }
        if (root.contains("input")) { read_input(root["input"], doc.system); }
        if (root.contains("sim")) { read_sim(root["sim"], doc); }
        for (const auto& [k, v] : root.items()) {
            if (k != "n_x" && k != "states" && k != "input" && k != "sim") {
                report("/" + k, Diagnostic::Category::Syntax, "unknown key '" + k + "'");
            }
        }
        if (!diagnostics.empty()) { return std::nullopt; }
        return doc;
    }

private:
    void report(const std::string& ptr, Diagnostic::Category cat, std::string message) {
        Diagnostic d;
        d.category = cat;
        d.message = std::move(message);
        auto it = offsets_.find(ptr);
        if (it != offsets_.end()) { std::tie(d.line, d.column) = line_column(text_, it->second); }
        diagnostics.push_back(std::move(d));
    }

    std::optional<std::size_t> read_count(const json& obj, const std::string& ptr, const char* key) {
        if (!obj.contains(key)) {
            report(ptr.substr(0, ptr.rfind('/')), Diagnostic::Category::Syntax, std::string("missing key '") + key + "'");
            return std::nullopt;
        }
        const json& v = obj[key];
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            report(ptr, Diagnostic::Category::Syntax, std::string("'") + key + "' must be a non-negative integer");
            return std::nullopt;
        }
        return v.get<std::size_t>();
    }

    // name / value / {name, value}
    bool read_symbol(const json& v, const std::string& ptr, std::string& name, std::optional<double>& value) {
        if (v.is_string()) {
            name = v.get<std::string>();
        } else if (v.is_number()) {
            value = v.get<double>();
        } else if (v.is_object()) {
            for (const auto& [k, item] : v.items()) {
                if (k == "name" && item.is_string()) {
                    name = item.get<std::string>();
                } else if (k == "value" && item.is_number()) {
                    value = item.get<double>();
                } else {
                    report(ptr + "/" + k, Diagnostic::Category::Syntax, "expected \"name\" (string) or \"value\" (number)");
                    return false;
                }
            }
        } else {
            report(ptr, Diagnostic::Category::Syntax, "expected a symbol name, a number or an object");
            return false;
        }
        if (value && !std::isfinite(*value)) {
            report(ptr, Diagnostic::Category::Syntax, "parameter value must be finite");
            return false;
        }
        if (!name.empty() && !used_names_.insert(name).second) {
            report(ptr, Diagnostic::Category::Syntax, "parameter name '" + name + "' is used twice");
            return false;
        }
        return true;
    }

    void read_states(const json& root, SystemSpec& sys) {
        if (!root.contains("states")) {
            report("", Diagnostic::Category::Syntax, "missing key 'states'");
            return;
        }
        const json& states = root["states"];
        if (!states.is_array()) {
            report("/states", Diagnostic::Category::Syntax, "'states' must be an array");
            return;
        }
        if (states.size() != sys.n_x) {
            report("/states", Diagnostic::Category::Dimension,
                   "expected " + std::to_string(sys.n_x) + " state equations, found " + std::to_string(states.size()));
            return;
        }
        for (std::size_t i = 0; i < sys.n_x; ++i) {
            const std::string ptr = "/states/" + std::to_string(i);
            const json& st = states[i];
            if (!st.is_object()) {
                report(ptr, Diagnostic::Category::Syntax, "state entry must be an object");
                continue;
            }
            for (const auto& [k, v] : st.items()) {
                if (k != "a" && k != "terms") { report(ptr + "/" + k, Diagnostic::Category::Syntax, "unknown key '" + k + "'"); }
            }
            if (st.contains("a")) {
                std::string name;
                std::optional<double> value;
                if (read_symbol(st["a"], ptr + "/a", name, value)) {
                    if (name == ParamId::linear(i).default_name()) { name.clear(); }
                    sys.set_linear(i, value, name);
                }
            }
            if (st.contains("terms")) { read_terms(st["terms"], ptr + "/terms", i, sys); }
        }
    }

    void read_terms(const json& terms, const std::string& ptr, std::size_t state, SystemSpec& sys) {
        if (!terms.is_array()) {
            report(ptr, Diagnostic::Category::Syntax, "'terms' must be an array");
            return;
        }
        std::set<Monomial> seen;
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const std::string tp = ptr + "/" + std::to_string(t);
            const json& term = terms[t];
            if (!term.is_object() || !term.contains("coeff") || !term.contains("exponents")) {
                report(tp, Diagnostic::Category::Syntax, "term needs \"coeff\" and \"exponents\"");
                continue;
            }
            const json& ex = term["exponents"];
            if (!ex.is_array() || !std::all_of(ex.begin(), ex.end(), [](const json& e) {
                    return e.is_number_integer() && e.get<long long>() >= 0 && e.get<long long>() <= 1'000'000;
                })) {
                report(tp + "/exponents", Diagnostic::Category::Syntax, "exponents must be an array of non-negative integers");
                continue;
            }
            if (ex.size() != sys.n_x) {
                report(tp + "/exponents", Diagnostic::Category::Dimension,
                       "expected " + std::to_string(sys.n_x) + " exponents, found " + std::to_string(ex.size()));
                continue;
            }
            const Monomial m(ex.get<std::vector<int>>());
            if (!seen.insert(m).second) {
                report(tp, Diagnostic::Category::Syntax, "duplicate term " + to_string(m));
                continue;
            }
            term_ptrs_[{state, m}] = tp + "/exponents";
            std::string name;
            std::optional<double> value;
            if (!read_symbol(term["coeff"], tp + "/coeff", name, value)) { continue; }
            if (name == poly_coeff_id(state, m).default_name()) { name.clear(); }
            sys.add_term(state, m, value, name);
        }
    }

    void read_input(const json& input, SystemSpec& sys) {
        if (!input.is_object() || !input.contains("g")) {
            report("/input", Diagnostic::Category::Syntax, "'input' must be an object with key 'g'");
            return;
        }
        const json& g = input["g"];
        if (!g.is_array() || g.size() != sys.n_x) {
            report("/input/g", Diagnostic::Category::Dimension, "'g' must have one row per state");
            return;
        }
        ExprMatrix gain;
        std::optional<std::size_t> width;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string rp = "/input/g/" + std::to_string(i);
            const json& row = g[i];
            if (!row.is_array()) {
                report(rp, Diagnostic::Category::Syntax, "each row of 'g' must be an array of expression strings");
                return;
            }
            if (width && *width != row.size()) {
                report(rp, Diagnostic::Category::Dimension, "rows of 'g' differ in width");
                return;
            }
            width = row.size();
            auto& out = gain.emplace_back();
            for (std::size_t u = 0; u < row.size(); ++u) {
                const std::string ep = rp + "/" + std::to_string(u);
                if (!row[u].is_string()) {
                    report(ep, Diagnostic::Category::Syntax, "expected an expression string");
                    return;
                }
                try {
                    InputExpr e = parse_expr(row[u].get<std::string>());
                    if (auto v = e.max_variable(); v && *v >= sys.n_x) {
                        report(ep, Diagnostic::Category::Dimension, "expression references x" + std::to_string(*v + 1) + " beyond n_x");
                        return;
                    }
                    out.push_back(std::move(e));
                } catch (const ExprSyntaxError& err) {
                    report(ep, Diagnostic::Category::Syntax,
                           std::string(err.what()) + " at offset " + std::to_string(err.position()) + " of the expression");
                    return;
                }
            }
        }
        sys.set_input(std::move(gain));
    }

    void read_sim(const json& sim, SpecDocument& doc) {
        if (!sim.is_object()) {
            report("/sim", Diagnostic::Category::Syntax, "'sim' must be an object");
            return;
        }
        for (const auto& [k, v] : sim.items()) {
            const std::string p = "/sim/" + k;
            if (k == "x0") {
                if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
                    report(p, Diagnostic::Category::Syntax, "x0 must be an array of numbers");
                } else if (v.size() != doc.system.n_x) {
                    report(p, Diagnostic::Category::Dimension, "x0 must have n_x entries");
                } else {
                    doc.sim.x0 = v.get<std::vector<double>>();
                }
            } else if (k == "h" || k == "T") {
                if (!v.is_number() || v.get<double>() < 0 || (k == "h" && v.get<double>() == 0)) {
                    report(p, Diagnostic::Category::Syntax, k == "h" ? "h must be a positive number" : "T must be a non-negative number");
                } else {
                    (k == "h" ? doc.sim.h : doc.sim.T) = v.get<double>();
                }
            } else if (k == "input") {
                if (!v.is_string() || !parse_input_option(v.get<std::string>())) {
                    report(p, Diagnostic::Category::Syntax, "input must be \"zero\", \"step:<amp>@<t>\" or \"file:<path>\"");
                } else {
                    doc.sim.input = v.get<std::string>();
                }
            } else {
                report(p, Diagnostic::Category::Syntax, "unknown key '" + k + "'");
            }
        }
    }

    std::string_view text_;
    std::map<std::string, std::size_t> offsets_;
    std::set<std::string> used_names_;
    std::map<std::pair<std::size_t, Monomial>, std::string> term_ptrs_;
};

} // namespace

ParseResult parse_spec(std::string_view text) {
    ParseResult result;
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        Diagnostic d;
        d.category = Diagnostic::Category::Syntax;
        d.message = e.what();
        std::tie(d.line, d.column) = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        result.diagnostics.push_back(std::move(d));
        return result;
    }

    Cursor cursor{text.data(), text.data()};
    LocationRecorder locations(cursor);
    json::sax_parse(TrackingIterator(text.data(), &cursor), TrackingIterator(text.data() + text.size(), nullptr), &locations);

    SpecReader reader(text, std::move(locations.offsets));
    result.document = reader.read(root);
    result.diagnostics = std::move(reader.diagnostics);
    if (!result.diagnostics.empty()) { result.document.reset(); }
    return result;
}

std::string render_spec(const SpecDocument& doc) {
    const SystemSpec& sys = doc.system;
    auto symbol = [&](const ParamId& id) -> json {
        json s = json::object();
        s["name"] = id.name();
        if (sys.params.contains(id)) { s["value"] = sys.params.value(id); }
        return s;
    };
    json root;
    root["n_x"] = sys.n_x;
    root["states"] = json::array();
    for (const auto& eq : sys.states) {
        json st;
        st["a"] = symbol(eq.linear);
        if (!eq.nonlinear.is_zero()) {
            st["terms"] = json::array();
            for (const auto& [m, coeff] : eq.nonlinear.terms()) {
                if (coeff.terms().size() != 1 || coeff.terms().begin()->second != Rational(1)) {
                    throw Error("term " + to_string(m) + " has a composite coefficient that spec files cannot express");
                }
                st["terms"].push_back({{"coeff", symbol(coeff.terms().begin()->first)}, {"exponents", m.exponents()}});
            }
        }
        root["states"].push_back(std::move(st));
    }
    if (sys.has_input()) {
        json g = json::array();
        for (const auto& row : sys.g) {
            json r = json::array();
            for (const auto& e : row) { r.push_back(to_string(e)); }
            g.push_back(std::move(r));
        }
        root["input"]["g"] = std::move(g);
    }
    json sim = json::object();
    if (doc.sim.x0) { sim["x0"] = *doc.sim.x0; }
    if (doc.sim.h) { sim["h"] = *doc.sim.h; }
    if (doc.sim.T) { sim["T"] = *doc.sim.T; }
    if (doc.sim.input) { sim["input"] = *doc.sim.input; }
    if (!sim.empty()) { root["sim"] = std::move(sim); }
    return root.dump(2) + "\n";
}

} // namespace polykoop
