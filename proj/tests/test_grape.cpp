#include <algorithm>
#include <cmath>
#include <numbers>

#include "curvegate/curvegeom.hpp"
#include "curvegate/errors.hpp"
#include "curvegate/grape.hpp"
#include "curvegate/invariants.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace curvegate;
using namespace curvegate::testing;
using std::numbers::pi;

namespace {

Pulse short_geometric(double j) {
  return pulse_from_curve(integrate_space_curve(sample_ansatz(search_lambda(2 * pi / 3, pi), 2 * pi / 3), 0.5 * j));
}

PiecewisePulse random_piecewise(int n, double dt, double amp) {
  PiecewisePulse pw{std::vector<double>(n), dt};
  for (auto& a : pw.amps) a = uniform(-amp, amp);
  return pw;
}

double grad_rel_error(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return num / den;
}

}  // namespace

TEST_CASE("discretization") {
  Pulse c;
  c.t = {0.0, 1e-9, 3e-9, 4e-9};
  c.omega = {5.0, 5.0, 5.0, 5.0};
  const auto pc = discretize(c, 7);
  CHECK(pc.size() == 7);
  CHECK(pc.dt == doctest::Approx(4e-9 / 7));
  for (double a : pc.amps) CHECK(a == doctest::Approx(5.0).epsilon(1e-14));

  Pulse r;
  r.t = {0.0, 2e-9};
  r.omega = {0.0, 8.0};
  const auto pr = discretize(r, 2);
  CHECK(pr.amps[0] == doctest::Approx(2.0));
  CHECK(pr.amps[1] == doctest::Approx(6.0));

  CHECK_THROWS_AS(discretize(r, 0), InputError);
}

TEST_CASE("piecewise pulse validation and sampling") {
  CHECK_THROWS_AS(validate_piecewise({{1.0, 2.0}, 0.0}), InputError);
  CHECK_THROWS_AS(validate_piecewise({{1.0, std::nan("")}, 1e-9}), InputError);
  const PiecewisePulse pw{{1.0, 2.0, 3.0}, 1e-9};
  const Pulse p = pw.to_pulse();
  CHECK(p.duration() == doctest::Approx(3e-9));
  CHECK(p.at(1.5e-9) == doctest::Approx(2.0));
  CHECK(discretize(p, 3).amps[1] == doctest::Approx(2.0));
}

TEST_CASE("rotating-frame forward propagation") {
  const auto d = default_device();
  SUBCASE("single interval equals one exponential") {
    const PiecewisePulse pw{{2 * pi * 30e6}, 5e-9};
    const Mat4 h = (0.25 * d.j) * (pauli_product("ZZ") - pauli_product("IZ")) + (0.25 * pw.amps[0]) * pauli_product("IX");
    CHECK(max_abs_diff(forward_propagate(pw, Frame::rotating, d).u, expm_taylor(h * cplx(0.0, -5e-9))) < 1e-12);
  }
  SUBCASE("zero pulse is free Ising evolution") {
    const PiecewisePulse pw{std::vector<double>(40, 0.0), 1e-9};
    const Mat4 h = (0.25 * d.j) * (pauli_product("ZZ") - pauli_product("IZ"));
    const auto f = forward_propagate(pw, Frame::rotating, d);
    CHECK(f.steps.size() == 40);
    CHECK(max_abs_diff(f.u, expm_taylor(h * cplx(0.0, -40e-9))) < 1e-11);
  }
  SUBCASE("fine discretization agrees with device-sim") {
    const Pulse p = short_geometric(d.j);
    const auto pw = discretize(p, 2000);
    const Mat4 a = forward_propagate(pw, Frame::rotating, d).u;
    const Mat4 b = propagate(d, p, {pw.dt, Frame::rotating});
    CHECK(max_abs_diff(a, b) < 1e-6);
  }
  SUBCASE("n = 200 keeps the continuous cost") {
    const Pulse p = short_geometric(d.j);
    const double c200 = makhlin_cost_of(discretize(p, 200), Frame::rotating, d);
    const double cont = makhlin_cost(propagate(d, p, {1e-12, Frame::rotating}));
    CHECK(std::abs(c200 - cont) < 1e-4);
  }
  SUBCASE("serial and parallel agree exactly") {
    const auto pw = random_piecewise(64, 20e-12, 2 * pi * 50e6);
    CHECK(max_abs_diff(forward_propagate(pw, Frame::rotating, d, 0.5e-12, Exec::serial).u,
                       forward_propagate(pw, Frame::rotating, d, 0.5e-12, Exec::parallel).u) == 0.0);
  }
}

TEST_CASE("analytic gradient against central differences") {
  const auto d = default_device();
  SUBCASE("random pulses, rotating frame") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto pw = random_piecewise(50, 10e-12 * 20, 2 * pi * 60e6);
      const auto a = cost_gradient(pw, Frame::rotating, d);
      const auto f = cost_gradient_fd(pw, Frame::rotating, d);
      CHECK(a.cost == doctest::Approx(f.cost).epsilon(1e-14));
      CHECK(grad_rel_error(a.grad, f.grad) < 1e-5);
    }
  }
  SUBCASE("10 ps intervals") {
    const auto pw = random_piecewise(50, 10e-12, 2 * pi * 60e6);
    CHECK(grad_rel_error(cost_gradient(pw, Frame::rotating, d).grad,
                         cost_gradient_fd(pw, Frame::rotating, d).grad) < 1e-4);
  }
  SUBCASE("full frame, short window") {
    const auto pw = random_piecewise(6, 20e-12, 2 * pi * 60e6);
    CHECK(grad_rel_error(cost_gradient(pw, Frame::full, d).grad, cost_gradient_fd(pw, Frame::full, d).grad) < 1e-5);
  }
  SUBCASE("vanishes at a zero-cost point") {
    const PiecewisePulse pw{std::vector<double>(100, 0.0), pi / d.j / 100};
    const auto g = cost_gradient(pw, Frame::rotating, d);
    CHECK(g.cost < 1e-20);
    for (double x : g.grad) CHECK(std::abs(x) * d.j < 1e-8);
  }
  SUBCASE("time-symmetric pulse gives a symmetric gradient") {
    const auto pw0 = discretize(short_geometric(d.j), 120);
    PiecewisePulse pw = pw0;
    for (int k = 0; k < pw.size(); ++k) pw.amps[k] = 0.5 * (pw0.amps[k] + pw0.amps[pw.size() - 1 - k]);
    const auto g = cost_gradient(pw, Frame::rotating, d);
    const double gmax = std::abs(*std::max_element(g.grad.begin(), g.grad.end(),
                                                   [](double a, double b) { return std::abs(a) < std::abs(b); }));
    for (int k = 0; k < pw.size(); ++k) CHECK(std::abs(g.grad[k] - g.grad[pw.size() - 1 - k]) < 1e-8 * gmax);
  }
}

TEST_CASE("optimizer behaviour") {
  const auto d = default_device();
  GrapeConfig cfg;
  cfg.max_iters = 40;

  SUBCASE("converged seed is returned unchanged") {
    const PiecewisePulse pw{std::vector<double>(50, 0.0), pi / d.j / 50};
    const auto r = optimize(pw, cfg);
    CHECK(r.iters == 0);
    CHECK(r.trace.size() == 1);
    CHECK(r.pulse.amps == pw.amps);
  }
  SUBCASE("monotone trace, pinned endpoints, lower cost") {
    const auto pw = discretize(short_geometric(d.j), 100);
    auto perturbed = pw;
    for (int k = 1; k + 1 < pw.size(); ++k) perturbed.amps[k] *= 1.0 + 0.05 * std::sin(0.3 * k);
    const auto r = optimize(perturbed, cfg);
    CHECK(r.trace.size() == static_cast<std::size_t>(r.iters) + 1);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.trace[i - 1]);
    CHECK(r.trace.back() < 1e-3 * r.trace.front());
    CHECK(r.pulse.amps.front() == 0.0);
    CHECK(r.pulse.amps.back() == 0.0);
  }
  SUBCASE("amplitude bound is respected") {
    const auto pw = discretize(short_geometric(d.j), 100);
    double peak = 0.0;
    for (double a : pw.amps) peak = std::max(peak, std::abs(a));
    cfg.amplitude_bound = 0.9 * peak;
    const auto r = optimize(pw, cfg);
    for (double a : r.pulse.amps) CHECK(std::abs(a) <= 0.9 * peak);
  }
  SUBCASE("non-descent gradient stalls") {
    const CostGradFn fn = [](const std::vector<double>& x) {
      return CostGradient{x[0] * x[0] + 1.0, {-2.0 * x[0] - 1.0}};
    };
    const auto r = gradient_descent(fn, {1.0}, DescentOptions{});
    CHECK(r.stalled);
    CHECK(r.trace.size() == 1);
  }
  SUBCASE("quadratic converges") {
    const CostGradFn fn = [](const std::vector<double>& x) {
      return CostGradient{(x[0] - 1) * (x[0] - 1) + 4 * x[1] * x[1], {2 * (x[0] - 1), 8 * x[1]}};
    };
    DescentOptions opt;
    opt.cost_tol = 1e-20;
    const auto r = gradient_descent(fn, {-2.0, 3.0}, opt);
    CHECK(!r.stalled);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(r.x[1]) < 1e-8);
  }
  SUBCASE("non-finite start is a numerical error") {
    const CostGradFn fn = [](const std::vector<double>&) { return CostGradient{std::nan(""), {0.0}}; };
    CHECK_THROWS_AS(gradient_descent(fn, {1.0}, DescentOptions{}), NumericalError);
  }
}

TEST_CASE("relative change") {
  const PiecewisePulse a{{3.0, 4.0}, 1.0}, b{{3.0, 3.0}, 1.0};
  CHECK(relative_l2_change(a, b) == doctest::Approx(0.2));
  CHECK(relative_l2_change(a, a) == 0.0);
}
