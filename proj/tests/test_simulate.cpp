#include "doctest.h"
#include "support.hpp"

#include "polykoop/error.hpp"
#include "polykoop/simulate.hpp"

#include <cmath>

using namespace polykoop;
using testsupport::example_system;

namespace {

SystemSpec decay() {
    SystemSpec s(1);
    s.set_linear(0, -0.5);
    return s;
}

Vector ones(std::size_t n) { return Vector::Ones(static_cast<Eigen::Index>(n)); }

} // namespace

TEST_SUITE("simulator") {

TEST_CASE("lifting an initial state") {
    const auto phi = compute_lifting(example_system());
    const Vector z1 = lift(phi, std::vector<double>{1, 1, 1, 1});
    CHECK(z1.size() == 19);
    CHECK((z1.array() == 1.0).all());
    CHECK((lift(phi, std::vector<double>{0, 0, 0, 0}).array() == 0.0).all());

    const Vector z2 = lift(phi, std::vector<double>{2, 0, 0, 0});
    for (std::size_t k = 0; k < phi.size(); ++k) {
        const auto& m = phi[k];
        const bool pure_x1 = m.degree() == m.exponent(0);
        const double expected = pure_x1 ? std::pow(2.0, m.degree()) : 0.0;
        CHECK(z2[static_cast<Eigen::Index>(k)] == expected);
    }
    const auto at = [&](std::vector<int> e) { return z2[static_cast<Eigen::Index>(*phi.position(Monomial(e)))]; };
    CHECK(at({3, 0, 0, 0}) == 8);
    CHECK(at({4, 0, 0, 0}) == 16);
    CHECK(at({6, 0, 0, 0}) == 64);
    CHECK(at({8, 0, 0, 0}) == 256);
    CHECK(at({10, 0, 0, 0}) == 1024);
    CHECK_THROWS_AS(lift(phi, std::vector<double>{1, 1}), DimensionError);
}

TEST_CASE("step count") {
    CHECK(step_count(1e-3, 10) == 10000);
    CHECK(step_count(0.1, 1) == 10);
    CHECK(step_count(0.3, 1) == 3);
    CHECK(step_count(1, 0) == 0);
}

TEST_CASE("rk4 on a scalar decay") {
    const auto traj = integrate_nonlinear(decay(), std::vector<double>{1.0}, InputSignal::zero(), 1e-3, 1.0);
    CHECK(traj.size() == 1001);
    CHECK(std::abs(traj.samples.back()[0] - std::exp(-0.5)) <= 1e-12);

    const NumericModel scalar(1, Matrix::Constant(1, 1, -0.5), std::nullopt);
    const auto lifted = integrate_lifted(scalar, ones(1), InputSignal::zero(), 1e-3, 1.0);
    CHECK(std::abs(lifted.samples.back()[0] - std::exp(-0.5)) <= 1e-12);
}

TEST_CASE("zero horizon") {
    const std::vector<double> x0{0.25, -1, 2, 3};
    const auto traj = integrate_nonlinear(example_system(), x0, InputSignal::zero(), 1e-3, 0.0);
    REQUIRE(traj.size() == 1);
    for (std::size_t i = 0; i < 4; ++i) { CHECK(traj.samples[0][static_cast<Eigen::Index>(i)] == x0[i]); }
}

TEST_CASE("lifted and nonlinear runs overlap") {
    const auto s = example_system();
    const auto model = build_model(s);
    const auto num = eval_numeric(model);
    const std::vector<double> x0{1, 1, 1, 1};
    const auto a = integrate_nonlinear(s, x0, InputSignal::zero(), 1e-2, 10);
    const auto b = integrate_lifted(num, lift(model.phi, x0), InputSignal::zero(), 1e-2, 10);
    const auto x = project(b, model.selection());
    CHECK(x.size() == b.size());
    CHECK(x.dim() == 4);
    CHECK(compare(a, x).sup <= 1e-8);
    CHECK(compare(a, project(b, 4)).sup == compare(a, x).sup);
    // decays towards the origin
    CHECK(a.samples.back().cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("convergence order of the lifted-vs-nonlinear gap") {
    const auto s = example_system();
    const auto model = build_model(s);
    const auto num = eval_numeric(model);
    const std::vector<double> x0{1, 1, 1, 1};
    const auto gap = [&](double h) {
        const auto a = integrate_nonlinear(s, x0, InputSignal::zero(), h, 10);
        const auto b = integrate_lifted(num, lift(model.phi, x0), InputSignal::zero(), h, 10);
        return compare(a, project(b, 4)).sup;
    };
    double prev = gap(0.1);
    for (double h : {0.05, 0.025, 0.0125}) {
        const double cur = gap(h);
        CAPTURE(h);
        CHECK(prev / cur >= 12.0);
        CHECK(prev / cur <= 20.0);
        prev = cur;
    }
}

TEST_CASE("one step commutes with lifting up to fifth order") {
    const auto s = example_system();
    const auto model = build_model(s);
    const auto num = eval_numeric(model);
    const auto gap = [&](std::span<const double> x, double h) {
        const Vector xa = integrate_nonlinear(s, x, InputSignal::zero(), h, h).samples.back();
        const Vector za = lift(model.phi, std::span<const double>(xa.data(), 4));
        return (za - integrate_lifted(num, lift(model.phi, x), InputSignal::zero(), h, h).samples.back()).cwiseAbs().maxCoeff();
    };
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testsupport::random_point(rng, 4);
        // constant estimated from the coarsest step, then checked on finer ones
        const double c = gap(x, 0.1) / std::pow(0.1, 5);
        for (double h : {0.05, 0.025, 0.0125}) {
            CAPTURE(h);
            CHECK(gap(x, h) <= 2 * c * std::pow(h, 5) + 1e-15);
        }
    }
}

TEST_CASE("input driven runs") {
    const auto s = example_system(true);
    const auto model = build_model(s);
    const auto num = eval_numeric(model);
    const std::vector<double> x0{1, 1, 1, 1};
    const auto u = InputSignal::step({1.0}, 0.0);
    const auto a = integrate_nonlinear(s, x0, u, 1e-2, 5);
    const auto b = integrate_lifted(num, lift(model.phi, x0), u, 1e-2, 5);
    CHECK(compare(a, project(b, 4)).sup <= 1e-8);
    CHECK(compare(a, integrate_nonlinear(s, x0, InputSignal::zero(), 1e-2, 5)).sup > 1e-2);

    const auto autonomous = eval_numeric(build_model(example_system()));
    const auto z0 = lift(model.phi, x0);
    const auto with_b = integrate_lifted(num, z0, InputSignal::zero(), 1e-2, 5);
    const auto without_b = integrate_lifted(autonomous, z0, InputSignal::zero(), 1e-2, 5);
    for (std::size_t k = 0; k < with_b.size(); ++k) { CHECK((with_b.samples[k].array() == without_b.samples[k].array()).all()); }
}

TEST_CASE("input signals") {
    const auto step = InputSignal::step({2.0, -1.0}, 0.5);
    CHECK(step.channels() == 2);
    CHECK(step.at(0.4).isZero());
    CHECK(step.at(0.5)[0] == 2.0);
    CHECK(step.at(3.0)[1] == -1.0);

    const auto sampled = InputSignal::sampled({0.0, 1.0, 2.0}, {{1.0}, {2.0}, {3.0}});
    CHECK(sampled.held_per_step());
    CHECK(sampled.at(-0.1)[0] == 0.0);
    CHECK(sampled.at(0.0)[0] == 1.0);
    CHECK(sampled.at(0.99)[0] == 1.0);
    CHECK(sampled.at(1.5)[0] == 2.0);
    CHECK(sampled.at(10)[0] == 3.0);
    CHECK_THROWS(InputSignal::sampled({0.0, 0.0}, {{1.0}, {2.0}}));
    CHECK_THROWS(InputSignal::sampled({0.0, 1.0}, {{1.0}, {2.0, 3.0}}));
    CHECK(InputSignal::zero().is_zero());
}

TEST_CASE("non-finite states are reported") {
    SystemSpec s(2);
    s.set_linear(0, 1.0);
    s.set_linear(1, 1.0);
    s.add_term(1, testsupport::mono({8, 0}), 1.0);
    try {
        integrate_nonlinear(s, std::vector<double>{1e40, 1.0}, InputSignal::zero(), 1.0, 50);
        FAIL("expected NonFiniteState");
    } catch (const NonFiniteState& e) {
        CHECK(e.step() >= 1);
    }
}

TEST_CASE("matrix exponential") {
    const Matrix scalar = Matrix::Constant(1, 1, -0.5);
    const auto traj = expm_propagate(scalar, ones(1), 0.1, 1.0);
    CHECK(traj.size() == 11);
    CHECK(std::abs(traj.samples.back()[0] - std::exp(-0.5)) <= 1e-13);

    const Matrix zero = Matrix::Zero(3, 3);
    CHECK(expm(zero) == Matrix::Identity(3, 3));
    const auto still = expm_propagate(zero, ones(3), 0.1, 1.0);
    CHECK((still.samples.back().array() == 1.0).all());
}

TEST_CASE("matrix exponential of the triangular state matrix") {
    const auto order = testsupport::reference_order();
    const auto model = reorder(build_model(example_system()), order);
    const Matrix A = eval_numeric(model).A();
    const double h = 0.1;
    const Matrix E = expm(A * h);
    for (Eigen::Index k = 0; k < A.rows(); ++k) { CHECK(std::abs(E(k, k) - std::exp(h * A(k, k))) <= 1e-12); }
    // strictly lower part stays zero for an upper triangular A
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
        for (Eigen::Index c = 0; c < r; ++c) { CHECK(E(r, c) == 0.0); }
    }

    // 2x2 Jordan block: e^{lambda t} [[1, t], [0, 1]]
    Matrix J(2, 2);
    J << -0.3, 1.0, 0.0, -0.3;
    const Matrix EJ = expm(J * 2.0);
    CHECK(EJ(0, 0) == doctest::Approx(std::exp(-0.6)).epsilon(1e-14));
    CHECK(EJ(0, 1) == doctest::Approx(2.0 * std::exp(-0.6)).epsilon(1e-14));
}

TEST_CASE("trajectory comparison") {
    const auto a = integrate_nonlinear(example_system(), std::vector<double>{1, 1, 1, 1}, InputSignal::zero(), 0.1, 1);
    const auto self = compare(a, a);
    CHECK(self.sup == 0.0);
    CHECK(self.per_channel_max.isZero());
    CHECK(self.series.size() == a.size());

    auto shifted = a;
    shifted.samples[3][2] += 0.25;
    const auto r = compare(a, shifted);
    CHECK(r.sup == doctest::Approx(0.25));
    CHECK(r.per_channel_max[2] == doctest::Approx(0.25));
    CHECK(r.per_channel_max[0] == 0.0);

    auto shorter = a;
    shorter.samples.pop_back();
    CHECK_THROWS_AS(compare(a, shorter), DimensionError);
    CHECK_THROWS_AS(compare(a, project(a, 2)), DimensionError);
}

}
