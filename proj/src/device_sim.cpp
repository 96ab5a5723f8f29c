#include "curvegate/device_sim.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "curvegate/errors.hpp"

namespace curvegate {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int step_count(double span, double dt) {
  const double raw = span / dt;
  // Guard against 1000.0000000001 turning into 1001 steps.
  const double n = std::ceil(raw - 1e-9 * raw);
  if (!(n < 1e9)) throw ConfigError("propagation would need more than 1e9 steps; increase dt");
  return std::max(1, static_cast<int>(n));
}

void check_config(const PropagationConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("propagation step dt must be positive");
  if (cfg.frame == Frame::full && cfg.dt > kMaxFullFrameDt) {
    std::ostringstream msg;
    msg << "dt = " << cfg.dt * 1e12 << " ps is too coarse for the full frame (max " << kMaxFullFrameDt * 1e12
        << " ps)";
    throw ConfigError(msg.str());
  }
}

}  // namespace

DeviceParams default_device() {
  DeviceParams p;
  p.bz_l0 = kTwoPi * 18.287e9;
  p.bz_r0 = kTwoPi * 18.501e9;
  p.bz_l1 = kTwoPi * 52.71e6;
  p.bz_r1 = kTwoPi * 5.76e6;
  p.by_l0 = kTwoPi * 5e6;
  p.by_r0 = kTwoPi * 55e6;
  p.phi = 1.5 * std::numbers::pi;
  p.j = kCalibratedJ;
  return p;
}

std::vector<std::string> validate_device(const DeviceParams& p) {
  if (!(p.j > 0.0)) throw InputError("device: exchange coupling j must be positive");
  if (!(p.crosstalk >= 0.0)) throw InputError("device: crosstalk must be non-negative");
  if (p.drive_omega && !(*p.drive_omega > 0.0)) throw InputError("device: drive frequency must be positive");
  std::vector<std::string> warnings;
  if (!(p.j < std::abs(p.bz_r0 - p.bz_l0))) {
    warnings.push_back("exchange coupling is not small against the Zeeman splitting difference");
  }
  return warnings;
}

double derive_j(double t_f_target, double lambda, double beta) {
  if (!(t_f_target > 0.0)) throw InputError("derive_j: target gate time must be positive");
  return 2.0 * sample_ansatz(lambda, beta).arclength() / t_f_target;
}

DerivedFields derived_fields(const DeviceParams& p) {
  DerivedFields d;
  d.bbar_z = 0.5 * (p.bz_l0 + p.bz_r0);
  d.bbar1_z = 0.5 * (p.bz_l1 + p.bz_r1);
  d.dbz = p.bz_r0 - p.bz_l0;
  d.dbz1 = p.bz_r1 - p.bz_l1;
  d.alpha_m = 0.5 * (d.dbz - 2.0 * d.bbar_z);
  d.alpha_p = 0.5 * (d.dbz + 2.0 * d.bbar_z);
  d.xi = p.j / (d.dbz + d.dbz1);
  return d;
}

double auto_drive_frequency(const DeviceParams& p) {
  const auto d = derived_fields(p);
  const double e21 = 0.5 * (d.dbz1 - p.j + 0.5 * p.j * d.xi) - d.bbar1_z;
  return std::abs(d.alpha_m + e21);
}

double carrier_frequency(const DeviceParams& p) { return p.drive_omega ? *p.drive_omega : auto_drive_frequency(p); }

std::vector<double> detuning_grid(double center, double half_width, int points) {
  if (points < 1) throw InputError("detuning grid needs at least one point");
  if (points == 1) return {center};
  std::vector<double> w(points);
  for (int k = 0; k < points; ++k) w[k] = center - half_width + 2.0 * half_width * k / (points - 1);
  return w;
}

const char* frame_name(Frame f) { return f == Frame::full ? "full" : "rotating"; }

Frame parse_frame(const std::string& s) {
  if (s == "full") return Frame::full;
  if (s == "rotating") return Frame::rotating;
  throw InputError("unknown frame '" + s + "' (expected full or rotating)");
}

PropagationConfig PropagationConfig::defaults(Frame f) {
  return f == Frame::full ? PropagationConfig{0.5e-12, Frame::full} : PropagationConfig{10e-12, Frame::rotating};
}

Mat4 hamiltonian_full_amp(const DeviceParams& p, const DerivedFields& d, double amp, double t, double carrier) {
  const double drive = amp * std::cos(carrier * t + p.phi);
  const double byl = (p.static_transverse ? p.by_l0 : 0.0) + drive;
  const double byr = (p.static_transverse ? p.by_r0 : 0.0) + p.crosstalk * drive;
  const double xi = d.xi;
  const cplx em = std::polar(1.0, -d.alpha_m * t);
  const cplx ep = std::polar(1.0, d.alpha_p * t);
  const cplx mi(0.0, -0.5);

  Mat4 h;
  h(0, 0) = d.bbar1_z;
  h(1, 1) = 0.5 * (d.dbz1 - p.j + 0.5 * p.j * xi);
  h(2, 2) = 0.5 * (-d.dbz1 - p.j - 0.5 * p.j * xi);
  h(3, 3) = -d.bbar1_z;
  h(0, 1) = mi * (byl + xi * byr) * em;
  h(0, 2) = mi * (byr - xi * byl) * ep;
  h(1, 3) = mi * (byr + xi * byl) * ep;
  h(2, 3) = mi * (byl - xi * byr) * em;
  h(1, 0) = std::conj(h(0, 1));
  h(2, 0) = std::conj(h(0, 2));
  h(3, 1) = std::conj(h(1, 3));
  h(3, 2) = std::conj(h(2, 3));
  return h;
}

Mat4 hamiltonian_full(const DeviceParams& p, const Pulse& pulse, double t) {
  return hamiltonian_full_amp(p, derived_fields(p), pulse.at(t), t, carrier_frequency(p));
}

Mat4 hamiltonian_rotating_amp(double j, double amp) {
  Mat4 h;
  h(2, 2) = -0.5 * j;
  h(3, 3) = 0.5 * j;
  h(0, 1) = h(1, 0) = h(2, 3) = h(3, 2) = 0.25 * amp;
  return h;
}

Mat4 hamiltonian_rotating(const DeviceParams& p, const Pulse& pulse, double t) {
  return hamiltonian_rotating_amp(p.j, pulse.at(t));
}

void check_propagator(const Mat4& u) {
  const double err = unitarity_error(u);
  if (!(err <= kPropagatorUnitarityLimit)) {
    throw NumericalError("propagator lost unitarity (||U^dagger U - I||_F = " + std::to_string(err) + ")");
  }
}

Mat4 propagate_window(const DeviceParams& p, const Pulse& pulse, const PropagationConfig& cfg, double t0,
                      double t1) {
  check_config(cfg);
  validate_pulse(pulse);
  if (!(t0 >= 0.0 && t1 > t0 && t1 <= pulse.duration() * (1.0 + 1e-12))) {
    throw InputError("propagation window must satisfy 0 <= t0 < t1 <= t_f");
  }
  const int n = step_count(t1 - t0, cfg.dt);
  const double h = (t1 - t0) / n;
  Mat4 u = Mat4::identity();
  if (cfg.frame == Frame::rotating) {
    for (int k = 0; k < n; ++k) {
      const double tm = t0 + (k + 0.5) * h;
      u = expm_hermitian_skew_unchecked(hamiltonian_rotating_amp(p.j, pulse.at(tm)), h) * u;
    }
  } else {
    const auto d = derived_fields(p);
    const double carrier = carrier_frequency(p);
    for (int k = 0; k < n; ++k) {
      const double tm = t0 + (k + 0.5) * h;
      u = expm_hermitian_skew_unchecked(hamiltonian_full_amp(p, d, pulse.at(tm), tm, carrier), h) * u;
    }
  }
  check_propagator(u);
  return u;
}

Mat4 propagate(const DeviceParams& p, const Pulse& pulse, const PropagationConfig& cfg) {
  validate_pulse(pulse);
  return propagate_window(p, pulse, cfg, 0.0, pulse.duration());
}

Mat2 drive_frame_propagator(const Pulse& pulse, double j, double dt) {
  validate_pulse(pulse);
  const int n = step_count(pulse.duration(), dt);
  const double h = pulse.duration() / n;
  Mat2 u = Mat2::identity();
  for (int k = 0; k < n; ++k) {
    const double amp = pulse.at((k + 0.5) * h);
    Mat2 h0;
    h0(0, 0) = -0.25 * j;
    h0(1, 1) = 0.25 * j;
    h0(0, 1) = h0(1, 0) = 0.25 * amp;
    u = expm_hermitian_skew_unchecked(h0, h) * u;
  }
  return u;
}

Mat4 magnus_unitary(double j, const Vec3& r) {
  const Mat2 rs = r[0] * pauli('X') + r[1] * pauli('Y') + r[2] * pauli('Z');
  return expm_hermitian_skew_unchecked(kron(pauli('Z'), rs), 0.25 * j);
}

Mat4 first_order_prediction(const Pulse& pulse, double j) {
  const auto curve = curve_from_pulse(pulse, j);
  return magnus_unitary(j, curve.r.back());
}

}  // namespace curvegate
