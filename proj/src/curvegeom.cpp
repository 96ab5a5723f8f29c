#include "curvegate/curvegeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "curvegate/errors.hpp"

namespace curvegate {
namespace {

struct AnsatzEval {
  Vec3 b;
  Vec3 d1;  // dB/dl
  Vec3 d2;  // d2B/dl2
};

AnsatzEval eval_ansatz(const AnsatzParams& p, double l) {
  const double lam = p.lambda;
  const double beta = p.beta;
  const double sb = std::sin(beta * l);
  const double cb = std::cos(beta * l);
  const double u = sb * sb;
  const double du = 2.0 * beta * sb * cb;
  const double ddu = 2.0 * beta * beta * (cb * cb - sb * sb);
  const double a = std::sqrt(std::max(0.0, 1.0 - lam * u));

  double da = 0.0;
  double dda = 0.0;
  if (a > 1e-150) {
    da = -lam * du / (2.0 * a);
    dda = -lam * ddu / (2.0 * a) - lam * lam * du * du / (4.0 * a * a * a);
  } else {
    // lambda == 1 exactly at the pole: a = |cos(beta l)| has a kink.
    da = -beta * sb;
  }

  const double cl = std::cos(l);
  const double sl = std::sin(l);
  const double sq = std::sqrt(lam);
  AnsatzEval e;
  e.b = {a * cl, a * sl, sq * sb};
  e.d1 = {da * cl - a * sl, da * sl + a * cl, sq * beta * cb};
  e.d2 = {dda * cl - 2.0 * da * sl - a * cl, dda * sl + 2.0 * da * cl - a * sl, -sq * beta * beta * sb};
  return e;
}

void check_ansatz(double lambda, double beta) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InputError("ansatz lambda must lie in [0, 1], got " + std::to_string(lambda));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InputError("ansatz beta must be positive, got " + std::to_string(beta));
  }
}

// Five-point finite-difference derivatives with respect to the sample index.
template <typename T>
void index_derivatives(const std::vector<T>& f, std::vector<T>& d1, std::vector<T>& d2) {
  const std::size_t n = f.size();
  d1.assign(n, T{});
  d2.assign(n, T{});
  auto lin = [](double c0, const T& f0, double c1, const T& f1, double c2, const T& f2, double c3, const T& f3,
                double c4, const T& f4) { return (c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3 + c4 * f4) * (1.0 / 12.0); };
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d1[i] = lin(1, f[i - 2], -8, f[i - 1], 0, f[i], 8, f[i + 1], -1, f[i + 2]);
    d2[i] = lin(-1, f[i - 2], 16, f[i - 1], -30, f[i], 16, f[i + 1], -1, f[i + 2]);
  }
  d1[0] = lin(-25, f[0], 48, f[1], -36, f[2], 16, f[3], -3, f[4]);
  d1[1] = lin(-3, f[0], -10, f[1], 18, f[2], -6, f[3], 1, f[4]);
  d2[0] = lin(35, f[0], -104, f[1], 114, f[2], -56, f[3], 11, f[4]);
  d2[1] = lin(11, f[0], -20, f[1], 6, f[2], 4, f[3], -1, f[4]);
  const std::size_t m = n - 1;
  d1[m] = lin(25, f[m], -48, f[m - 1], 36, f[m - 2], -16, f[m - 3], 3, f[m - 4]);
  d1[m - 1] = lin(3, f[m], 10, f[m - 1], -18, f[m - 2], 6, f[m - 3], -1, f[m - 4]);
  d2[m] = lin(35, f[m], -104, f[m - 1], 114, f[m - 2], -56, f[m - 3], 11, f[m - 4]);
  d2[m - 1] = lin(11, f[m], -20, f[m - 1], 6, f[m - 2], 4, f[m - 3], -1, f[m - 4]);
}

std::vector<Vec3> cumulative_simpson3(const std::vector<Vec3>& f, double h) {
  std::vector<Vec3> out(f.size());
  std::vector<double> comp(f.size());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < f.size(); ++i) comp[i] = f[i][c];
    const auto integ = cumulative_simpson(comp, h);
    for (std::size_t i = 0; i < f.size(); ++i) out[i][c] = integ[i];
  }
  return out;
}

std::vector<Vec3> cumulative_trapezoid3(const std::vector<double>& x, const std::vector<Vec3>& f) {
  std::vector<Vec3> out(f.size());
  for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + (0.5 * (x[i] - x[i - 1])) * (f[i] + f[i - 1]);
  return out;
}

bool is_uniform(const std::vector<double>& x) {
  if (x.size() < 3) return true;
  const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - h) > 1e-9 * h) return false;
  }
  return true;
}

// Arclength of the ansatz between l0 and l1 by 5-point Gauss-Legendre.
double ansatz_partial_arclength(const AnsatzParams& p, double l0, double l1) {
  static constexpr double x[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                  0.9061798459386640};
  static constexpr double w[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665, 0.2369268850561891,
                                  0.2369268850561891};
  const double mid = 0.5 * (l0 + l1);
  const double half = 0.5 * (l1 - l0);
  double s = 0.0;
  for (int k = 0; k < 5; ++k) s += w[k] * norm(eval_ansatz(p, mid + half * x[k]).d1);
  return s * half;
}

}  // namespace

// ---------------------------------------------------------------------------

double Pulse::peak() const {
  double m = 0.0;
  for (double w : omega) m = std::max(m, std::abs(w));
  return m;
}

double Pulse::at(double time) const {
  const double tf = duration();
  if (time < 0.0 || time > tf * (1.0 + 1e-12)) {
    throw InputError("pulse evaluated outside its domain [0, t_f]");
  }
  if (time >= tf) return omega.back();
  const auto it = std::upper_bound(t.begin(), t.end(), time);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  if (i == 0) return omega.front();
  const double w = (time - t[i - 1]) / (t[i] - t[i - 1]);
  return (1.0 - w) * omega[i - 1] + w * omega[i];
}

void validate_pulse(const Pulse& p) {
  if (p.t.size() != p.omega.size()) throw InputError("pulse time and amplitude columns differ in length");
  if (p.t.size() < 2) throw InputError("pulse needs at least two samples");
  if (p.t.front() != 0.0) throw InputError("pulse must start at t = 0");
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (!std::isfinite(p.t[i]) || !std::isfinite(p.omega[i])) throw InputError("pulse contains non-finite values");
    if (i > 0 && !(p.t[i] > p.t[i - 1])) {
      throw InputError("pulse times must be strictly increasing (sample " + std::to_string(i) + ")");
    }
  }
}

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * h * (f[0] + f[1]);
    return out;
  }
  for (std::size_t i = 2; i < n; i += 2) out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  for (std::size_t i = 1; i < n; i += 2) {
    if (i + 1 < n) {
      out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
    } else {
      out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
  }
  return out;
}

BinormalCurve sample_ansatz(double lambda, double beta, int n) {
  check_ansatz(lambda, beta);
  if (n < 64) throw InputError("sample_ansatz needs n >= 64");
  const AnsatzParams p{lambda, beta};
  const double lf = std::numbers::pi / beta;
  const double h = lf / n;

  BinormalCurve c;
  c.ansatz = p;
  c.samples.resize(n + 1);
  std::vector<double> speed(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double l = (i == n) ? lf : i * h;
    const auto e = eval_ansatz(p, l);
    c.samples[i].l = l;
    c.samples[i].b = e.b;
    speed[i] = norm(e.d1);
  }
  const auto s = cumulative_simpson(speed, h);
  for (int i = 0; i <= n; ++i) c.samples[i].s = s[i];
  return c;
}

BinormalCurve binormal_from_points(std::vector<double> l, const std::vector<Vec3>& points) {
  if (l.size() != points.size()) throw InputError("binormal curve: parameter and point counts differ");
  if (points.size() < 5) throw InputError("binormal curve needs at least 5 samples");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::abs(norm(points[i]) - 1.0) > 1e-9) {
      throw InputError("binormal curve sample " + std::to_string(i) + " is off the unit sphere");
    }
    if (i > 0 && !(l[i] > l[i - 1])) throw InputError("binormal curve parameter must be strictly increasing");
  }
  std::vector<Vec3> d1, d2;
  index_derivatives(points, d1, d2);
  std::vector<double> speed(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) speed[i] = norm(d1[i]);
  const auto s = cumulative_simpson(speed, 1.0);

  BinormalCurve c;
  c.samples.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) c.samples[i] = {l[i], points[i], s[i]};
  return c;
}

BinormalCurve reparametrize_by_arclength(const BinormalCurve& curve, int n) {
  if (curve.samples.size() < 5) throw InputError("reparametrization needs at least 5 samples");
  if (n < 4) throw InputError("reparametrization needs n >= 4");
  const auto& src = curve.samples;
  const double sf = curve.arclength();
  if (!(sf > 0.0)) throw InputError("binormal curve has zero arclength");

  BinormalCurve out;
  out.ansatz = curve.ansatz;
  out.uniform_arclength = true;
  out.samples.resize(n + 1);

  // Generic curves: tangents dB/ds at the source samples for Hermite interpolation.
  std::vector<Vec3> tangent;
  if (!curve.ansatz) {
    std::vector<Vec3> pts(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) pts[i] = src[i].b;
    std::vector<Vec3> d1, d2;
    index_derivatives(pts, d1, d2);
    tangent.resize(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) tangent[i] = (1.0 / norm(d1[i])) * d1[i];
  }

  std::size_t seg = 0;
  for (int j = 0; j <= n; ++j) {
    const double target = (j == n) ? sf : sf * j / n;
    while (seg + 2 < src.size() && src[seg + 1].s < target) ++seg;
    const auto& a = src[seg];
    const auto& b = src[seg + 1];
    BinormalSample smp;
    smp.s = target;

    if (curve.ansatz) {
      const AnsatzParams& p = *curve.ansatz;
      double l = a.l + (b.l - a.l) * std::clamp((target - a.s) / (b.s - a.s), 0.0, 1.0);
      if (j == n) {
        l = src.back().l;
      } else if (j > 0) {
        for (int it = 0; it < 8; ++it) {
          const double resid = a.s + ansatz_partial_arclength(p, a.l, l) - target;
          const double step = resid / norm(eval_ansatz(p, l).d1);
          l -= step;
          if (std::abs(step) < 1e-16 * (1.0 + std::abs(l))) break;
        }
      } else {
        l = src.front().l;
      }
      smp.l = l;
      smp.b = eval_ansatz(p, l).b;
    } else {
      const double hs = b.s - a.s;
      const double u = std::clamp((target - a.s) / hs, 0.0, 1.0);
      const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
      const double h10 = u * (1 - u) * (1 - u);
      const double h01 = u * u * (3 - 2 * u);
      const double h11 = u * u * (u - 1);
      const Vec3 v = h00 * a.b + (h10 * hs) * tangent[seg] + h01 * b.b + (h11 * hs) * tangent[seg + 1];
      smp.b = normalized(v);
      smp.l = a.l + u * (b.l - a.l);
    }
    out.samples[j] = smp;
  }
  return out;
}

std::vector<double> geodesic_curvature(const BinormalCurve& curve) {
  const auto& smp = curve.samples;
  if (smp.size() < 5) throw InputError("geodesic curvature needs at least 5 samples");
  std::vector<double> kg(smp.size());
  if (curve.ansatz) {
    for (std::size_t i = 0; i < smp.size(); ++i) {
      const auto e = eval_ansatz(*curve.ansatz, smp[i].l);
      const double sp = norm(e.d1);
      kg[i] = std::abs(dot(e.b, cross(e.d1, e.d2))) / (sp * sp * sp);
    }
    return kg;
  }
  // (B, B', B'') / |B'|^3 holds for any parametrization of a unit-sphere curve,
  // so index-space derivatives suffice.
  std::vector<Vec3> pts(smp.size());
  for (std::size_t i = 0; i < smp.size(); ++i) pts[i] = smp[i].b;
  std::vector<Vec3> d1, d2;
  index_derivatives(pts, d1, d2);
  for (std::size_t i = 0; i < smp.size(); ++i) {
    const double sp = norm(d1[i]);
    kg[i] = std::abs(dot(pts[i], cross(d1[i], d2[i]))) / (sp * sp * sp);
  }
  return kg;
}

SpaceCurve integrate_space_curve(const BinormalCurve& curve, double tau_r) {
  if (!(tau_r > 0.0) || !std::isfinite(tau_r)) {
    throw InputError("torsion tau_r must be positive, got " + std::to_string(tau_r));
  }
  const BinormalCurve u = curve.uniform_arclength
                              ? curve
                              : reparametrize_by_arclength(curve, static_cast<int>(curve.samples.size()) - 1);
  const std::size_t n = u.samples.size();
  const double sf = u.arclength();
  const double h = sf / static_cast<double>(n - 1);

  std::vector<Vec3> tangent(n);
  if (u.ansatz) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto e = eval_ansatz(*u.ansatz, u.samples[i].l);
      tangent[i] = cross(e.b, normalized(e.d1));
    }
  } else {
    std::vector<Vec3> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = u.samples[i].b;
    std::vector<Vec3> d1, d2;
    index_derivatives(pts, d1, d2);
    for (std::size_t i = 0; i < n; ++i) tangent[i] = cross(pts[i], (1.0 / h) * d1[i]);
  }

  const auto integral = cumulative_simpson3(tangent, h);
  const auto kg = geodesic_curvature(u);

  SpaceCurve sc;
  sc.tau_r = tau_r;
  sc.t.resize(n);
  sc.r.resize(n);
  sc.kappa.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sc.t[i] = u.samples[i].s / tau_r;
    sc.r[i] = (1.0 / tau_r) * integral[i];
    sc.kappa[i] = tau_r * kg[i];
  }
  sc.t.front() = 0.0;
  sc.t_f = sc.t.back();
  sc.ansatz = u.ansatz;
  return sc;
}

Pulse pulse_from_curve(const SpaceCurve& curve) {
  if (curve.kappa.empty() || curve.kappa.size() != curve.t.size()) {
    throw InputError("space curve carries no curvature profile");
  }
  Pulse p;
  p.t = curve.t;
  p.omega.resize(curve.kappa.size());
  for (std::size_t i = 0; i < curve.kappa.size(); ++i) p.omega[i] = 2.0 * curve.kappa[i];

  std::ostringstream tau;
  tau.precision(17);
  tau << curve.tau_r;
  p.meta["tau_r"] = tau.str();
  if (curve.ansatz) {
    std::ostringstream lam, beta;
    lam.precision(17);
    beta.precision(17);
    lam << curve.ansatz->lambda;
    beta << curve.ansatz->beta;
    p.meta["lambda"] = lam.str();
    p.meta["beta"] = beta.str();
  }
  p.meta["source"] = "geometric";
  return p;
}

double displacement_invariant(double lambda, double beta, int n) {
  check_ansatz(lambda, beta);
  if (n < 2) throw InputError("displacement_invariant needs n >= 2");
  const AnsatzParams p{lambda, beta};
  const double lf = std::numbers::pi / beta;
  const double h = lf / n;
  // Composite Simpson; an odd n falls back to the partial rule on the last panel.
  std::vector<Vec3> f(n + 1);
  for (int i = 0; i <= n; ++i) {
    const auto e = eval_ansatz(p, i == n ? lf : i * h);
    f[i] = cross(e.b, e.d1);
  }
  const auto integ = cumulative_simpson3(f, h);
  return 2.0 * norm(integ.back());
}

double search_lambda(double beta, double target, double tol, Exec exec) {
  check_ansatz(0.0, beta);
  if (!(tol > 0.0)) throw InputError("search_lambda tolerance must be positive");
  constexpr int kGrid = 1000;
  std::vector<double> f(kGrid + 1);

  for_each_index(kGrid + 1, exec, [&](int i) { f[i] = displacement_invariant(i * 1e-3, beta) - target; });

  for (int i = 0; i <= kGrid; ++i) {
    if (std::abs(f[i]) < tol) return i * 1e-3;
    if (i == kGrid) break;
    if ((f[i] < 0.0) != (f[i + 1] < 0.0)) {
      double lo = i * 1e-3;
      double hi = (i + 1 == kGrid) ? 1.0 : (i + 1) * 1e-3;
      double flo = f[i];
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = displacement_invariant(mid, beta) - target;
        if (std::abs(fm) < tol || hi - lo < 4.0 * std::numeric_limits<double>::epsilon()) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      return 0.5 * (lo + hi);
    }
  }

  const auto [mn, mx] = std::minmax_element(f.begin(), f.end());
  std::ostringstream msg;
  msg << "target unreachable for this beta: J|R(t_f)| over lambda in [0,1] spans [" << (*mn + target) << ", "
      << (*mx + target) << "], target " << target;
  throw InputError(msg.str());
}

SpaceCurve curve_from_pulse(const Pulse& pulse, double j) {
  validate_pulse(pulse);
  if (!(j > 0.0)) throw InputError("exchange coupling j must be positive");
  const double tau = 0.5 * j;
  const std::size_t n = pulse.t.size();

  // Rows T, N, B of the Frenet frame.
  std::array<Vec3, 3> frame{Vec3{0, 0, 1}, Vec3{0, 1, 0}, Vec3{-1, 0, 0}};
  std::vector<Vec3> tangent(n);
  tangent[0] = frame[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = pulse.t[i + 1] - pulse.t[i];
    const double kappa = 0.25 * (pulse.omega[i] + pulse.omega[i + 1]);
    // A = h * [[0, k, 0], [-k, 0, tau], [0, -tau, 0]]; exp(A) by Rodrigues.
    const double a01 = h * kappa;
    const double a12 = h * tau;
    const double theta2 = a01 * a01 + a12 * a12;
    double c1, c2;
    if (theta2 < 1e-8) {
      c1 = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
      c2 = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    } else {
      const double th = std::sqrt(theta2);
      c1 = std::sin(th) / th;
      c2 = (1.0 - std::cos(th)) / theta2;
    }
    const double A[3][3] = {{0.0, a01, 0.0}, {-a01, 0.0, a12}, {0.0, -a12, 0.0}};
    double A2[3][3] = {};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        for (int k = 0; k < 3; ++k) A2[r][c] += A[r][k] * A[k][c];
    std::array<Vec3, 3> next{};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        const double e = (r == c ? 1.0 : 0.0) + c1 * A[r][c] + c2 * A2[r][c];
        next[r] += e * frame[c];
      }
    }
    frame = next;
    tangent[i + 1] = frame[0];
  }

  SpaceCurve sc;
  sc.t = pulse.t;
  sc.tau_r = tau;
  sc.t_f = pulse.duration();
  if (is_uniform(pulse.t)) {
    sc.r = cumulative_simpson3(tangent, pulse.duration() / static_cast<double>(n - 1));
  } else {
    sc.r = cumulative_trapezoid3(pulse.t, tangent);
  }
  sc.kappa.resize(n);
  for (std::size_t i = 0; i < n; ++i) sc.kappa[i] = 0.5 * pulse.omega[i];
  return sc;
}

}  // namespace curvegate
