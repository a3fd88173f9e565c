#include "polykoop/simulate.hpp"

#include "polykoop/error.hpp"

#include <algorithm>
#include <cmath>

namespace polykoop {

InputSignal InputSignal::zero(std::size_t channels) {
    InputSignal s;
    s.channels_ = channels;
    return s;
}

InputSignal InputSignal::step(std::vector<double> amplitude, double onset) {
    InputSignal s;
    s.kind_ = Kind::Step;
    s.channels_ = amplitude.size();
    s.amplitude_ = std::move(amplitude);
    s.onset_ = onset;
    return s;
}

InputSignal InputSignal::sampled(std::vector<double> times, std::vector<std::vector<double>> values) {
    if (times.empty() || times.size() != values.size()) { throw Error("sampled input: need one value row per time"); }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) { throw Error("sampled input: times must be strictly increasing"); }
    }
    const std::size_t width = values.front().size();
    for (const auto& row : values) {
        if (row.size() != width) { throw DimensionError("sampled input: rows differ in channel count"); }
    }
    InputSignal s;
    s.kind_ = Kind::Sampled;
    s.channels_ = width;
    s.times_ = std::move(times);
    s.values_ = std::move(values);
    return s;
}

Vector InputSignal::at(double t) const {
    Vector u = Vector::Zero(static_cast<Eigen::Index>(channels_));
    switch (kind_) {
    case Kind::Zero: break;
    case Kind::Step:
        if (t >= onset_) { u = Eigen::Map<const Vector>(amplitude_.data(), static_cast<Eigen::Index>(amplitude_.size())); }
        break;
    case Kind::Sampled: {
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        if (it != times_.begin()) {
            const auto& row = values_[static_cast<std::size_t>(it - times_.begin()) - 1];
            u = Eigen::Map<const Vector>(row.data(), static_cast<Eigen::Index>(row.size()));
        }
        break;
    }
    }
    return u;
}

std::size_t step_count(double h, double T) {
    if (!(h > 0.0) || !std::isfinite(h)) { throw Error("step size must be positive"); }
    if (!(T >= 0.0) || !std::isfinite(T)) { throw Error("horizon must be non-negative"); }
    // tolerate T/h landing a hair below an integer
    return static_cast<std::size_t>(std::floor(T / h + 1e-9));
}

namespace {

std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void check_finite(const Vector& y, std::size_t step) {
    if (!y.allFinite()) {
        throw NonFiniteState("non-finite state after step " + std::to_string(step), static_cast<long>(step));
    }
}

// rhs(t, y, u) with u already resolved for the stage
template<typename Rhs>
Trajectory rk4(const Rhs& rhs, const Vector& y0, const InputSignal& u, double h, double T) {
    const std::size_t steps = step_count(h, T);
    Trajectory traj;
    traj.h = h;
    traj.samples.reserve(steps + 1);
    traj.samples.push_back(y0);
    check_finite(y0, 0);
    Vector y = y0;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = traj.time(k);
        Vector u0, um, u1;
        if (!u.is_zero()) {
            u0 = u.at(t);
            um = u.held_per_step() ? u0 : u.at(t + 0.5 * h);
            u1 = u.held_per_step() ? u0 : u.at(t + h);
        }
        const Vector k1 = rhs(y, u0);
        const Vector k2 = rhs(y + 0.5 * h * k1, um);
        const Vector k3 = rhs(y + 0.5 * h * k2, um);
        const Vector k4 = rhs(y + h * k3, u1);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        check_finite(y, k + 1);
        traj.samples.push_back(y);
    }
    return traj;
}

// Numeric snapshot of the vector field: a_i and (coefficient, monomial) per state.
struct CompiledSystem {
    std::vector<double> linear;
    std::vector<std::vector<std::pair<double, Monomial>>> terms;

    explicit CompiledSystem(const SystemSpec& spec) {
        for (const auto& eq : spec.states) {
            linear.push_back(spec.params.value(eq.linear));
            auto& row = terms.emplace_back();
            for (const auto& [m, c] : eq.nonlinear.terms()) { row.emplace_back(c.evaluate(spec.params), m); }
        }
    }

    Vector operator()(const Vector& x) const {
        Vector dx(x.size());
        const auto xs = as_span(x);
        for (std::size_t i = 0; i < linear.size(); ++i) {
            double v = linear[i] * x[static_cast<Eigen::Index>(i)];
            for (const auto& [c, m] : terms[i]) { v += c * evaluate(m, xs); }
            dx[static_cast<Eigen::Index>(i)] = v;
        }
        return dx;
    }
};

void check_channels(const InputSignal& u, std::size_t n_u) {
    if (!u.is_zero() && u.channels() != n_u) {
        throw DimensionError("input signal has " + std::to_string(u.channels()) + " channels, system expects " + std::to_string(n_u));
    }
}

} // namespace

Trajectory integrate_nonlinear(const SystemSpec& spec, std::span<const double> x0, const InputSignal& u, double h, double T) {
    if (x0.size() != spec.n_x) { throw DimensionError("initial state dimension differs from n_x"); }
    check_channels(u, spec.n_u);
    const CompiledSystem f(spec);
    auto rhs = [&](const Vector& x, const Vector& uk) -> Vector {
        Vector dx = f(x);
        if (uk.size() > 0) {
            const auto xs = as_span(x);
            for (std::size_t i = 0; i < spec.n_x; ++i) {
                double gu = 0.0;
                for (std::size_t c = 0; c < spec.n_u; ++c) { gu += spec.g[i][c].evaluate(xs) * uk[static_cast<Eigen::Index>(c)]; }
                dx[static_cast<Eigen::Index>(i)] += gu;
            }
        }
        return dx;
    };
    const Vector y0 = Eigen::Map<const Vector>(x0.data(), static_cast<Eigen::Index>(x0.size()));
    return rk4(rhs, y0, u, h, T);
}

Trajectory integrate_lifted(const NumericModel& model, const Vector& z0, const InputSignal& u, double h, double T) {
    if (static_cast<std::size_t>(z0.size()) != model.n_f()) { throw DimensionError("initial lifted state dimension differs from n_f"); }
    check_channels(u, model.n_u());
    const Matrix& A = model.A();
    auto rhs = [&](const Vector& z, const Vector& uk) -> Vector {
        if (uk.size() == 0) { return A * z; }
        return A * z + model.B_at_lifted(as_span(z)) * uk;
    };
    return rk4(rhs, z0, u, h, T);
}

Matrix expm(const Matrix& M) {
    if (M.rows() != M.cols()) { throw DimensionError("expm: matrix must be square"); }
    if (!M.allFinite()) { throw Error("expm: non-finite matrix entries"); }
    const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) { squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5))); }
    const Matrix X = M / std::ldexp(1.0, squarings);

    // ||X|| <= 1/2, so 20 terms push the truncation far below 1e-13 relative
    Matrix E = Matrix::Identity(M.rows(), M.cols());
    Matrix term = E;
    for (int k = 1; k <= 20; ++k) {
        term = term * X / static_cast<double>(k);
        E += term;
    }
    for (int s = 0; s < squarings; ++s) { E = E * E; }
    return E;
}

Trajectory expm_propagate(const Matrix& A, const Vector& z0, double h, double T) {
    if (A.rows() != z0.size()) { throw DimensionError("expm_propagate: dimension mismatch"); }
    const std::size_t steps = step_count(h, T);
    const Matrix E = expm(A * h);
    Trajectory traj;
    traj.h = h;
    traj.samples.reserve(steps + 1);
    traj.samples.push_back(z0);
    Vector z = z0;
    for (std::size_t k = 0; k < steps; ++k) {
        z = E * z;
        check_finite(z, k + 1);
        traj.samples.push_back(z);
    }
    return traj;
}

Trajectory project(const Trajectory& traj, const Matrix& C) {
    if (traj.size() > 0 && static_cast<std::size_t>(C.cols()) != traj.dim()) { throw DimensionError("project: C width differs from the trajectory dimension"); }
    Trajectory out{traj.t0, traj.h, {}};
    out.samples.reserve(traj.size());
    for (const auto& z : traj.samples) { out.samples.push_back(C * z); }
    return out;
}

Trajectory project(const Trajectory& traj, std::size_t n_x) {
    if (traj.size() > 0 && n_x > traj.dim()) { throw DimensionError("project: more states than lifted coordinates"); }
    Trajectory out{traj.t0, traj.h, {}};
    out.samples.reserve(traj.size());
    for (const auto& z : traj.samples) { out.samples.push_back(z.head(static_cast<Eigen::Index>(n_x))); }
    return out;
}

ErrorReport compare(const Trajectory& a, const Trajectory& b) {
    if (a.size() != b.size() || a.dim() != b.dim() || a.t0 != b.t0 || a.h != b.h) {
        throw DimensionError("compare: trajectories differ in grid or dimension");
    }
    ErrorReport report;
    report.per_channel_max = Vector::Zero(static_cast<Eigen::Index>(a.dim()));
    report.series = Trajectory{a.t0, a.h, {}};
    report.series.samples.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        Vector e = (a.samples[k] - b.samples[k]).cwiseAbs();
        report.per_channel_max = report.per_channel_max.cwiseMax(e);
        report.series.samples.push_back(std::move(e));
    }
    report.sup = a.dim() == 0 ? 0.0 : report.per_channel_max.maxCoeff();
    return report;
}

} // namespace polykoop
