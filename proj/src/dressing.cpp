#include "curvegate/dressing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "curvegate/errors.hpp"

namespace curvegate {
namespace {

using Point = std::array<double, 12>;

struct NelderMeadResult {
  Point x{};
  double f = 0.0;
};

// Minimizes f. The simplex is rebuilt around the incumbent after each
// convergence until a rebuild no longer improves the value.
template <typename F>
NelderMeadResult nelder_mead(F&& f, const Point& x0, double ftol, int max_evals) {
  constexpr int n = 12;
  std::array<Point, n + 1> sx{};
  std::array<double, n + 1> fx{};
  int evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    return f(p);
  };

  NelderMeadResult best{x0, eval(x0)};
  double step = 0.5;
  for (int rebuild = 0; rebuild < 6 && evals < max_evals; ++rebuild) {
    sx[0] = best.x;
    fx[0] = best.f;
    for (int i = 0; i < n; ++i) {
      sx[i + 1] = best.x;
      sx[i + 1][i] += step;
      fx[i + 1] = eval(sx[i + 1]);
    }
    while (evals < max_evals) {
      std::array<int, n + 1> order{};
      for (int i = 0; i <= n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
      std::array<Point, n + 1> s2;
      std::array<double, n + 1> f2;
      for (int i = 0; i <= n; ++i) {
        s2[i] = sx[order[i]];
        f2[i] = fx[order[i]];
      }
      sx = s2;
      fx = f2;

      double spread = 0.0;
      for (int i = 1; i <= n; ++i)
        for (int k = 0; k < n; ++k) spread = std::max(spread, std::abs(sx[i][k] - sx[0][k]));
      if (fx[n] - fx[0] <= ftol && spread < 1e-7) break;

      Point centroid{};
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) centroid[k] += sx[i][k] / n;
      auto along = [&](double coef) {
        Point p;
        for (int k = 0; k < n; ++k) p[k] = centroid[k] + coef * (sx[n][k] - centroid[k]);
        return p;
      };
      const Point xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < fx[0]) {
        const Point xe = along(-2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          sx[n] = xe;
          fx[n] = fe;
        } else {
          sx[n] = xr;
          fx[n] = fr;
        }
      } else if (fr < fx[n - 1]) {
        sx[n] = xr;
        fx[n] = fr;
      } else {
        const bool outside = fr < fx[n];
        const Point xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < std::min(fr, fx[n])) {
          sx[n] = xc;
          fx[n] = fc;
        } else {
          for (int i = 1; i <= n; ++i) {
            for (int k = 0; k < n; ++k) sx[i][k] = sx[0][k] + 0.5 * (sx[i][k] - sx[0][k]);
            fx[i] = eval(sx[i]);
          }
        }
      }
    }
    int arg = 0;
    for (int i = 1; i <= n; ++i)
      if (fx[i] < fx[arg]) arg = i;
    const bool improved = fx[arg] < best.f - ftol;
    if (fx[arg] < best.f) best = {sx[arg], fx[arg]};
    if (!improved && rebuild > 0) break;
    step = 0.05;
  }
  return best;
}

void check_target(const Mat4& target) {
  const double err = unitarity_error(target);
  if (!(err <= 1e-8)) throw InputError("dressing target is not unitary");
}

}  // namespace

Mat2 su2_zyz(double a, double b, double c) {
  const cplx ea = std::polar(1.0, -0.5 * a);
  const cplx ec = std::polar(1.0, -0.5 * c);
  const double cb = std::cos(0.5 * b);
  const double sb = std::sin(0.5 * b);
  // diag(ea, conj ea) * [[cb, -sb], [sb, cb]] * diag(ec, conj ec)
  Mat2 m;
  m(0, 0) = ea * cb * ec;
  m(0, 1) = -ea * sb * std::conj(ec);
  m(1, 0) = std::conj(ea) * sb * ec;
  m(1, 1) = std::conj(ea) * cb * std::conj(ec);
  return m;
}

Mat4 local_from_angles(const std::array<double, 6>& a) {
  return kron(su2_zyz(a[0], a[1], a[2]), su2_zyz(a[3], a[4], a[5]));
}

double gate_fidelity(const Mat4& u, const Mat4& target) {
  check_target(target);
  const double norm_term = trace(adjoint(u) * u).real();
  const double overlap = std::norm(trace(adjoint(target) * u));
  return (norm_term + overlap) / 20.0;
}

DressingResult optimize_dressing(const Mat4& u, const Mat4& target, int restarts, std::uint64_t seed, Exec exec) {
  if (restarts < 1) throw InputError("dressing needs at least one restart");
  const double err = unitarity_error(u);
  if (!(err <= 1e-8)) {
    std::ostringstream msg;
    msg << "dressing input is not unitary, ||U^dagger U - I||_F = " << err;
    throw InputError(msg.str());
  }
  check_target(target);
  const Mat4 target_adj = adjoint(target);

  auto objective = [&](const Point& x) {
    std::array<double, 6> a1, a2;
    std::copy(x.begin(), x.begin() + 6, a1.begin());
    std::copy(x.begin() + 6, x.end(), a2.begin());
    const Mat4 v = local_from_angles(a1) * u * local_from_angles(a2);
    return -(4.0 + std::norm(elementwise_dot(transpose(target_adj), v))) / 20.0;
  };

  const int runs = restarts + 1;
  std::vector<NelderMeadResult> results(runs);
  auto run = [&](int r) {
    Point x0{};
    if (r > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 gen(seq);
      std::uniform_real_distribution<double> dist(-std::numbers::pi, std::numbers::pi);
      for (auto& v : x0) v = dist(gen);
    }
    results[r] = nelder_mead(objective, x0, 1e-13, 40000);
  };
  for_each_index(runs, exec, run);

  int best = 0;
  for (int r = 1; r < runs; ++r)
    if (results[r].f < results[best].f) best = r;

  DressingResult out;
  std::copy(results[best].x.begin(), results[best].x.begin() + 6, out.k1_angles.begin());
  std::copy(results[best].x.begin() + 6, results[best].x.end(), out.k2_angles.begin());
  out.fidelity = gate_fidelity(out.k1() * u * out.k2(), target);
  out.target = target == gates::cnot() ? "CNOT" : "custom";
  return out;
}

DetuningSweep sweep_detuning(const DeviceParams& p, const Propagator& propagator, const std::vector<double>& carriers,
                             const Mat4& target, int restarts, std::uint64_t seed, Exec exec) {
  if (carriers.empty()) throw InputError("detuning sweep needs at least one carrier frequency");
  DetuningSweep sweep;
  sweep.points.resize(carriers.size());
  for_each_index(static_cast<int>(carriers.size()), exec, [&](int i) {
    DeviceParams q = p;
    q.drive_omega = carriers[i];
    SweepPoint& pt = sweep.points[i];
    pt.carrier = carriers[i];
    pt.u = propagator(q);
    pt.dressing = optimize_dressing(pt.u, target, restarts, seed, Exec::serial);
  });
  for (std::size_t i = 1; i < sweep.points.size(); ++i) {
    if (sweep.points[i].dressing.fidelity > sweep.points[sweep.best].dressing.fidelity) sweep.best = i;
  }
  return sweep;
}

DetuningSweep sweep_detuning(const DeviceParams& p, const Pulse& pulse, const PropagationConfig& cfg,
                             const std::vector<double>& carriers, const Mat4& target, int restarts,
                             std::uint64_t seed, Exec exec) {
  return sweep_detuning(
      p, [&](const DeviceParams& q) { return propagate(q, pulse, cfg); }, carriers, target, restarts, seed, exec);
}

}  // namespace curvegate
