#include "curvegate/slepian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "curvegate/errors.hpp"

namespace curvegate {
namespace {

// Implicit QL with shifts on a symmetric tridiagonal matrix. d: diagonal,
// e[i]: coupling between i and i+1 (e[n-1] unused). On return d holds the
// eigenvalues and v (row-major n x n, column j) the eigenvectors.
void tridiagonal_ql(std::vector<double>& d, std::vector<double> e, std::vector<double>& v) {
  const int n = static_cast<int>(d.size());
  v.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[i * n + i] = 1.0;
  e.resize(n);
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (int l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
    int m = l;
    while (m < n - 1 && std::abs(e[m]) > eps * tst1) ++m;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 200) throw NumericalError("tridiagonal eigensolver did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (int i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (int i = m - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          for (int k = 0; k < n; ++k) {
            double& a = v[k * n + i];
            double& b = v[k * n + i + 1];
            h = b;
            b = s * a + c * h;
            a = c * a - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::abs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

double sinc_rayleigh(const std::vector<double>& x, double w) {
  const int n = static_cast<int>(x.size());
  // Kernel depends on |i - j| only.
  std::vector<double> kernel(n);
  kernel[0] = 2.0 * w;
  for (int m = 1; m < n; ++m) kernel[m] = std::sin(2.0 * std::numbers::pi * w * m) / (std::numbers::pi * m);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += kernel[std::abs(i - j)] * x[j];
    num += x[i] * row;
    den += x[i] * x[i];
  }
  return num / den;
}

}  // namespace

SlepianBasis dpss(int n, double nw, int k) {
  if (n < 8) throw InputError("dpss needs n >= 8");
  if (!(nw > 0.0 && nw < 0.5 * n)) throw InputError("dpss needs 0 < nw < n/2");
  const int kmax = std::min(static_cast<int>(std::lround(2.0 * nw)), n);
  if (k < 1 || k > kmax) throw InputError("dpss needs 1 <= k <= min(round(2 nw), n)");

  const double w = nw / n;
  const double cw = std::cos(2.0 * std::numbers::pi * w);
  std::vector<double> d(n), e(n, 0.0), v;
  for (int i = 0; i < n; ++i) {
    const double x = 0.5 * (n - 1 - 2.0 * i);
    d[i] = x * x * cw;
  }
  for (int i = 1; i < n; ++i) e[i - 1] = 0.5 * i * (n - i);
  tridiagonal_ql(d, e, v);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] > d[b]; });

  SlepianBasis basis;
  basis.n = n;
  basis.nw = nw;
  basis.k = k;
  for (int q = 0; q < k; ++q) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = v[i * n + order[q]];
    double nrm = 0.0;
    for (double a : x) nrm += a * a;
    nrm = std::sqrt(nrm);
    double orient = 0.0;
    for (int i = 0; i < n; ++i) orient += (q % 2 == 0 ? 1.0 : 0.5 * (n - 1) - i) * x[i];
    const double sign = orient < 0.0 ? -1.0 : 1.0;
    for (double& a : x) a *= sign / nrm;
    basis.concentrations.push_back(sinc_rayleigh(x, w));
    basis.vectors.push_back(std::move(x));
  }
  return basis;
}

std::vector<std::vector<double>> SlepianBasis::ramp_free() const {
  std::vector<std::vector<double>> out = vectors;
  for (auto& x : out) {
    const double a = x.front();
    const double b = x.back();
    const double last = static_cast<double>(x.size() - 1);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= a + (b - a) * (static_cast<double>(i) / last);
    x.front() = 0.0;
    x.back() = 0.0;
  }
  return out;
}

std::vector<double> combine(const SlepianBasis& basis, const std::vector<double>& coeffs) {
  if (static_cast<int>(coeffs.size()) != basis.k) throw InputError("coefficient count differs from basis size");
  const auto e = basis.ramp_free();
  std::vector<double> out(basis.n, 0.0);
  for (int q = 0; q < basis.k; ++q)
    for (int i = 0; i < basis.n; ++i) out[i] += coeffs[q] * e[q][i];
  return out;
}

SlepianPulse random_pulse(const SlepianBasis& basis, double amplitude_scale, double duration, std::uint64_t seed) {
  if (!(amplitude_scale > 0.0)) throw InputError("amplitude scale must be positive");
  if (!(duration > 0.0)) throw InputError("pulse duration must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> c(basis.k);
  for (double& x : c) x = dist(gen);

  const auto raw = combine(basis, c);
  double peak = 0.0;
  for (double a : raw) peak = std::max(peak, std::abs(a));
  if (!(peak > 0.0)) throw NumericalError("random Slepian combination vanished");
  const double s = amplitude_scale / peak;
  for (double& x : c) x *= s;

  SlepianPulse out;
  out.coeffs = c;
  out.pulse = {combine(basis, c), duration / basis.n};
  return out;
}

CostGradient basis_cost_gradient(const SlepianBasis& basis, const std::vector<double>& coeffs, double dt,
                                 const GrapeConfig& cfg) {
  const PiecewisePulse pw{combine(basis, coeffs), dt};
  const auto g = cost_gradient(pw, cfg.frame, cfg.device, cfg.substep_dt, cfg.exec);
  const auto e = basis.ramp_free();
  CostGradient out;
  out.cost = g.cost;
  out.grad.assign(basis.k, 0.0);
  for (int q = 0; q < basis.k; ++q)
    for (int i = 0; i < basis.n; ++i) out.grad[q] += e[q][i] * g.grad[i];
  return out;
}

BasisOptimization optimize_in_basis(const SlepianBasis& basis, const std::vector<double>& coeffs0, double dt,
                                    const GrapeConfig& cfg) {
  if (cfg.amplitude_bound) throw ConfigError("amplitude bounds are not supported for basis optimization");
  if (!(dt > 0.0)) throw InputError("interval length must be positive");
  if (static_cast<int>(coeffs0.size()) != basis.k) throw InputError("coefficient count differs from basis size");
  validate_device(cfg.device);

  DescentOptions opt;
  opt.max_iters = cfg.max_iters;
  opt.grad_tol = cfg.grad_tol;
  opt.cost_tol = cfg.cost_tol;
  double peak = 0.0;
  for (double a : combine(basis, coeffs0)) peak = std::max(peak, std::abs(a));
  opt.scale = std::max(peak, cfg.device.j);

  auto fn = [&](const std::vector<double>& c) { return basis_cost_gradient(basis, c, dt, cfg); };
  auto d = gradient_descent(fn, coeffs0, opt);

  BasisOptimization r;
  r.result.pulse = {combine(basis, d.x), dt};
  r.result.coeffs = std::move(d.x);
  r.trace = std::move(d.trace);
  r.iters = d.iters;
  r.stalled = d.stalled;
  r.stop_reason = std::move(d.stop_reason);
  return r;
}

Multistart slepian_multistart(const SlepianBasis& basis, double duration, double amplitude_scale, int restarts,
                              std::uint64_t seed, const GrapeConfig& cfg) {
  if (restarts < 1) throw InputError("need at least one restart");
  Multistart m;
  m.runs.resize(restarts);
  GrapeConfig inner = cfg;
  inner.exec = Exec::serial;
  for_each_index(restarts, cfg.exec, [&](int r) {
    const auto start = random_pulse(basis, amplitude_scale, duration, seed + static_cast<std::uint64_t>(r));
    m.runs[r] = optimize_in_basis(basis, start.coeffs, duration / basis.n, inner);
  });
  for (std::size_t r = 1; r < m.runs.size(); ++r) {
    if (m.runs[r].trace.back() < m.runs[m.best].trace.back()) m.best = r;
  }
  return m;
}

}  // namespace curvegate
