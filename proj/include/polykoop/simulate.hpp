#pragma once

#include "polykoop/model.hpp"
#include "polykoop/system.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace polykoop {

/// Uniform samples at t0 + k h.
struct Trajectory {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<Vector> samples;

    std::size_t size() const noexcept { return samples.size(); }
    std::size_t dim() const noexcept { return samples.empty() ? 0 : static_cast<std::size_t>(samples.front().size()); }
    double time(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * h; }
};

/// u(t). Step and zero signals are sampled at every RK4 stage time; sampled signals are
/// zero-order held and read once per step, at its start.
class InputSignal {
public:
    enum class Kind { Zero, Step, Sampled };

    static InputSignal zero(std::size_t channels = 0);
    /// u(t) = amplitude for t >= onset, 0 before.
    static InputSignal step(std::vector<double> amplitude, double onset);
    /// values[k] holds from times[k] until times[k+1]; u is 0 before times[0].
    static InputSignal sampled(std::vector<double> times, std::vector<std::vector<double>> values);

    Kind kind() const noexcept { return kind_; }
    std::size_t channels() const noexcept { return channels_; }
    bool is_zero() const noexcept { return kind_ == Kind::Zero; }
    bool held_per_step() const noexcept { return kind_ == Kind::Sampled; }

    Vector at(double t) const;

private:
    Kind kind_ = Kind::Zero;
    std::size_t channels_ = 0;
    std::vector<double> amplitude_;
    double onset_ = 0.0;
    std::vector<double> times_;
    std::vector<std::vector<double>> values_;
};

/// Number of steps of size h covering [0, T].
std::size_t step_count(double h, double T);

/// Classical RK4 on x' = f(x) + g(x) u(t). Throws NonFiniteState, UnboundParameter.
Trajectory integrate_nonlinear(const SystemSpec& spec, std::span<const double> x0, const InputSignal& u, double h, double T);

/// Classical RK4 on z' = A z + B_z(z) u(t); a zero signal drops the input term entirely.
Trajectory integrate_lifted(const NumericModel& model, const Vector& z0, const InputSignal& u, double h, double T);

/// e^M by scaling and squaring with a truncated Taylor series.
Matrix expm(const Matrix& M);

/// z_{k+1} = e^{A h} z_k.
Trajectory expm_propagate(const Matrix& A, const Vector& z0, double h, double T);

/// Applies x = C z to every sample.
Trajectory project(const Trajectory& traj, const Matrix& C);
/// Keeps the first n_x coordinates.
Trajectory project(const Trajectory& traj, std::size_t n_x);

struct ErrorReport {
    Vector per_channel_max;
    double sup = 0.0;
    Trajectory series; // |a - b| per sample
};

/// Throws DimensionError on mismatched grids or dimensions.
ErrorReport compare(const Trajectory& a, const Trajectory& b);

} // namespace polykoop
