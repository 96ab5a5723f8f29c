#include "curvegate/grape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "curvegate/errors.hpp"
#include "curvegate/invariants.hpp"

namespace curvegate {
namespace {

struct StepData {
  std::vector<Mat4> u;
  std::vector<Mat4> du;  // dU_k / d amp_k, filled when requested
};

int substeps(double dt, double substep_dt) {
  if (!(substep_dt > 0.0)) throw ConfigError("full-frame sub-step must be positive");
  if (substep_dt > kMaxFullFrameDt) throw ConfigError("full-frame sub-step exceeds 2 ps");
  const double raw = dt / substep_dt;
  return std::max(1, static_cast<int>(std::ceil(raw - 1e-9 * raw)));
}

// Step unitary (and optionally its exact amplitude derivative) of interval k.
void interval_step(int k, double amp, double dt, Frame frame, const DeviceParams& dev, const DerivedFields& fields,
                   double carrier, int nsub, Mat4& u, Mat4* du) {
  if (frame == Frame::rotating) {
    const Mat4 h = hamiltonian_rotating_amp(dev.j, amp);
    if (du) {
      expm_with_derivative(h, dt, hamiltonian_rotating_amp(0.0, 1.0), u, *du);
    } else {
      u = expm_hermitian_skew_unchecked(h, dt);
    }
    return;
  }
  const double h = dt / nsub;
  const double t0 = k * dt;
  Mat4 p = Mat4::identity();
  Mat4 d;
  for (int j = 0; j < nsub; ++j) {
    const double tm = t0 + (j + 0.5) * h;
    const Mat4 h_full = hamiltonian_full_amp(dev, fields, amp, tm, carrier);
    Mat4 uj;
    if (du) {
      const Mat4 h1 = hamiltonian_full_amp(dev, fields, 1.0, tm, carrier) -
                      hamiltonian_full_amp(dev, fields, 0.0, tm, carrier);
      Mat4 duj;
      expm_with_derivative(h_full, h, h1, uj, duj);
      d = uj * d + duj * p;
    } else {
      uj = expm_hermitian_skew_unchecked(h_full, h);
    }
    p = uj * p;
  }
  u = p;
  if (du) *du = d;
}

StepData compute_steps(const PiecewisePulse& pw, Frame frame, const DeviceParams& dev, double substep_dt,
                       bool derivatives, Exec exec) {
  const int n = pw.size();
  StepData s;
  s.u.resize(n);
  if (derivatives) s.du.resize(n);
  const auto fields = derived_fields(dev);
  const double carrier = frame == Frame::full ? carrier_frequency(dev) : 0.0;
  const int nsub = frame == Frame::full ? substeps(pw.dt, substep_dt) : 1;
  for_each_index(n, exec, [&](int k) {
    interval_step(k, pw.amps[k], pw.dt, frame, dev, fields, carrier, nsub, s.u[k], derivatives ? &s.du[k] : nullptr);
  });
  return s;
}

struct CostParts {
  double cost;
  Mat4 a;  // dC = 2 Re Tr(A dU)
};

CostParts cost_parts(const Mat4& u, bool with_derivative) {
  const Mat4& q = magic_basis();
  const Mat4 qa = adjoint(q);
  const Mat4 ub = qa * u * q;
  const Mat4 ubt = transpose(ub);
  const Mat4 m = ubt * ub;
  const cplx d = det(u);
  const cplx t1 = trace(m);
  const cplx t2 = trace(m * m);
  const cplx g1 = t1 * t1 / (16.0 * d);
  const cplx g2 = (t1 * t1 - t2) / (4.0 * d);
  CostParts out;
  out.cost = std::norm(g1) + std::norm(g2 - 1.0);
  if (!with_derivative) return out;

  const cplx cg1 = std::conj(g1);
  const cplx cg2 = std::conj(g2 - 1.0);
  const cplx a = cg1 * 2.0 * t1 / (16.0 * d) + cg2 * 2.0 * t1 / (4.0 * d);
  const cplx b = -cg2 / (4.0 * d);
  const cplx c = -(cg1 * g1 + cg2 * g2) / d;
  const Mat4 a1 = 2.0 * (q * ubt * qa);
  const Mat4 a2 = 4.0 * (q * m * ubt * qa);
  const Mat4 a3 = d * adjoint(u);
  out.a = a * a1 + b * a2 + c * a3;
  return out;
}

double cost_of(const Mat4& u) { return cost_parts(u, false).cost; }

void prefix_suffix(const std::vector<Mat4>& steps, std::vector<Mat4>& f, std::vector<Mat4>& b) {
  const std::size_t n = steps.size();
  f.assign(n + 1, Mat4::identity());
  b.assign(n + 1, Mat4::identity());
  for (std::size_t k = 0; k < n; ++k) f[k + 1] = steps[k] * f[k];
  for (std::size_t k = n; k-- > 0;) b[k] = b[k + 1] * steps[k];
}

double drive_scale(const PiecewisePulse& pw, const DeviceParams& dev) {
  double peak = 0.0;
  for (double a : pw.amps) peak = std::max(peak, std::abs(a));
  return std::max(peak, dev.j);
}

}  // namespace

Pulse PiecewisePulse::to_pulse() const {
  validate_piecewise(*this);
  Pulse p;
  const int n = size();
  p.t.reserve(n + 2);
  p.omega.reserve(n + 2);
  p.t.push_back(0.0);
  p.omega.push_back(amps.front());
  for (int k = 0; k < n; ++k) {
    p.t.push_back((k + 0.5) * dt);
    p.omega.push_back(amps[k]);
  }
  p.t.push_back(duration());
  p.omega.push_back(amps.back());
  p.meta["source"] = "piecewise";
  return p;
}

void validate_piecewise(const PiecewisePulse& pw) {
  if (pw.amps.empty()) throw InputError("piecewise pulse has no intervals");
  if (!(pw.dt > 0.0) || !std::isfinite(pw.dt)) throw InputError("piecewise pulse interval must be positive");
  for (double a : pw.amps)
    if (!std::isfinite(a)) throw InputError("piecewise pulse contains non-finite amplitudes");
}

PiecewisePulse discretize(const Pulse& pulse, int n) {
  validate_pulse(pulse);
  if (n < 2) throw InputError("discretize needs n >= 2");
  PiecewisePulse pw;
  pw.dt = pulse.duration() / n;
  pw.amps.resize(n);
  std::size_t i = 0;
  for (int k = 0; k < n; ++k) {
    const double a = k * pw.dt;
    const double b = (k + 1 == n) ? pulse.duration() : (k + 1) * pw.dt;
    while (i + 2 < pulse.t.size() && pulse.t[i + 1] <= a) ++i;
    double integral = 0.0;
    double x0 = a;
    double f0 = pulse.at(a);
    std::size_t j = i + 1;
    while (j < pulse.t.size() && pulse.t[j] < b) {
      integral += 0.5 * (pulse.t[j] - x0) * (f0 + pulse.omega[j]);
      x0 = pulse.t[j];
      f0 = pulse.omega[j];
      ++j;
    }
    integral += 0.5 * (b - x0) * (f0 + pulse.at(b));
    pw.amps[k] = integral / (b - a);
  }
  return pw;
}

ForwardResult forward_propagate(const PiecewisePulse& pw, Frame frame, const DeviceParams& device,
                                double substep_dt, Exec exec) {
  validate_piecewise(pw);
  ForwardResult r;
  r.steps = compute_steps(pw, frame, device, substep_dt, false, exec).u;
  r.u = Mat4::identity();
  for (const auto& s : r.steps) r.u = s * r.u;
  check_propagator(r.u);
  return r;
}

double makhlin_cost_of(const PiecewisePulse& pw, Frame frame, const DeviceParams& device, double substep_dt,
                       Exec exec) {
  return cost_of(forward_propagate(pw, frame, device, substep_dt, exec).u);
}

CostGradient cost_gradient(const PiecewisePulse& pw, Frame frame, const DeviceParams& device, double substep_dt,
                           Exec exec) {
  validate_piecewise(pw);
  const auto steps = compute_steps(pw, frame, device, substep_dt, true, exec);
  std::vector<Mat4> f, b;
  prefix_suffix(steps.u, f, b);
  const auto parts = cost_parts(f.back(), true);
  CostGradient out;
  out.cost = parts.cost;
  out.grad.resize(pw.amps.size());
  for_each_index(pw.size(), exec, [&](int k) {
    const Mat4 x = f[k] * parts.a * b[k + 1];
    out.grad[k] = 2.0 * elementwise_dot(transpose(x), steps.du[k]).real();
  });
  return out;
}

CostGradient cost_gradient_fd(const PiecewisePulse& pw, Frame frame, const DeviceParams& device, double rel_step,
                              double substep_dt, Exec exec) {
  validate_piecewise(pw);
  const auto steps = compute_steps(pw, frame, device, substep_dt, false, exec);
  std::vector<Mat4> f, b;
  prefix_suffix(steps.u, f, b);
  const double e = rel_step / pw.dt;
  const auto fields = derived_fields(device);
  const double carrier = frame == Frame::full ? carrier_frequency(device) : 0.0;
  const int nsub = frame == Frame::full ? substeps(pw.dt, substep_dt) : 1;

  CostGradient out;
  out.cost = cost_of(f.back());
  out.grad.resize(pw.amps.size());
  for_each_index(pw.size(), exec, [&](int k) {
    Mat4 up, um;
    interval_step(k, pw.amps[k] + e, pw.dt, frame, device, fields, carrier, nsub, up, nullptr);
    interval_step(k, pw.amps[k] - e, pw.dt, frame, device, fields, carrier, nsub, um, nullptr);
    const double cp = cost_of(b[k + 1] * up * f[k]);
    const double cm = cost_of(b[k + 1] * um * f[k]);
    out.grad[k] = (cp - cm) / (2.0 * e);
  });
  return out;
}

DescentResult gradient_descent(const CostGradFn& fn, std::vector<double> x0, const DescentOptions& opt,
                               const ProjectFn& project) {
  if (opt.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(opt.grad_tol > 0.0)) throw ConfigError("grad_tol must be positive");
  constexpr double kArmijo = 1e-4;
  constexpr double kShrink = 0.5;
  constexpr int kMaxHalvings = 80;

  DescentResult r;
  if (project) project(x0);
  r.x = std::move(x0);
  CostGradient cur = fn(r.x);
  if (!std::isfinite(cur.cost)) throw NumericalError("cost is not finite at the starting point");
  r.trace.push_back(cur.cost);

  auto inf_norm = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  double alpha = 0.0;
  const std::size_t n = r.x.size();
  std::vector<double> xn(n);
  while (true) {
    if (cur.cost <= opt.cost_tol) {
      r.stop_reason = "cost_tol";
      break;
    }
    const double gmax = inf_norm(cur.grad);
    if (gmax * opt.scale < opt.grad_tol) {
      r.stop_reason = "grad_tol";
      break;
    }
    if (r.iters >= opt.max_iters) {
      r.stop_reason = "max_iters";
      break;
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) alpha = 1e-2 * opt.scale / gmax;

    bool accepted = false;
    CostGradient next;
    double a = alpha;
    for (int h = 0; h < kMaxHalvings; ++h, a *= kShrink) {
      double decrease = 0.0;
      double moved = 0.0;
      for (std::size_t i = 0; i < n; ++i) xn[i] = r.x[i] - a * cur.grad[i];
      if (project) project(xn);
      for (std::size_t i = 0; i < n; ++i) {
        decrease += cur.grad[i] * (xn[i] - r.x[i]);
        moved = std::max(moved, std::abs(xn[i] - r.x[i]));
      }
      if (moved == 0.0) break;
      next = fn(xn);
      if (std::isfinite(next.cost) && next.cost <= cur.cost + kArmijo * decrease) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      r.stalled = true;
      r.stop_reason = "line_search";
      break;
    }

    double ss = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = xn[i] - r.x[i];
      const double y = next.grad[i] - cur.grad[i];
      ss += s * s;
      sy += s * y;
    }
    alpha = sy > 0.0 ? ss / sy : 2.0 * a;
    r.x = xn;
    cur = std::move(next);
    r.trace.push_back(cur.cost);
    ++r.iters;
  }
  return r;
}

GrapeResult optimize(const PiecewisePulse& pw0, const GrapeConfig& cfg) {
  validate_piecewise(pw0);
  validate_device(cfg.device);
  if (cfg.amplitude_bound && !(*cfg.amplitude_bound > 0.0)) throw ConfigError("amplitude bound must be positive");
  if (cfg.endpoint_pin && pw0.size() < 3) throw ConfigError("endpoint pinning needs at least 3 intervals");

  const double dt = pw0.dt;
  const int n = pw0.size();
  auto project = [&](std::vector<double>& x) {
    if (cfg.amplitude_bound) {
      for (double& v : x) v = std::clamp(v, -*cfg.amplitude_bound, *cfg.amplitude_bound);
    }
    if (cfg.endpoint_pin) x.front() = x.back() = 0.0;
  };

  bool use_fd = false;
  if (cfg.frame == Frame::full && cfg.check_gradient) {
    PiecewisePulse probe = pw0;
    project(probe.amps);
    const auto ga = cost_gradient(probe, cfg.frame, cfg.device, cfg.substep_dt, cfg.exec);
    const auto gf = cost_gradient_fd(probe, cfg.frame, cfg.device, 1e-4, cfg.substep_dt, cfg.exec);
    double diff = 0.0, ref = 0.0;
    for (int k = 0; k < n; ++k) {
      diff = std::max(diff, std::abs(ga.grad[k] - gf.grad[k]));
      ref = std::max(ref, std::abs(gf.grad[k]));
    }
    use_fd = ref > 0.0 && diff / ref > 1e-3;
  }

  auto fn = [&](const std::vector<double>& x) {
    const PiecewisePulse pw{x, dt};
    CostGradient cg = use_fd ? cost_gradient_fd(pw, cfg.frame, cfg.device, 1e-4, cfg.substep_dt, cfg.exec)
                             : cost_gradient(pw, cfg.frame, cfg.device, cfg.substep_dt, cfg.exec);
    if (cfg.endpoint_pin) cg.grad.front() = cg.grad.back() = 0.0;
    return cg;
  };

  DescentOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.grad_tol = cfg.grad_tol;
  opt.cost_tol = cfg.cost_tol;
  opt.scale = drive_scale(pw0, cfg.device);
  auto d = gradient_descent(fn, pw0.amps, opt, project);

  GrapeResult r;
  r.pulse = {std::move(d.x), dt};
  r.trace = std::move(d.trace);
  r.iters = d.iters;
  r.stalled = d.stalled;
  r.finite_difference_gradient = use_fd;
  r.stop_reason = std::move(d.stop_reason);
  return r;
}

double relative_l2_change(const PiecewisePulse& a, const PiecewisePulse& b) {
  if (a.amps.size() != b.amps.size()) throw InputError("pulses differ in interval count");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) {
    num += (a.amps[i] - b.amps[i]) * (a.amps[i] - b.amps[i]);
    den += a.amps[i] * a.amps[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(num / den);
}

}  // namespace curvegate
