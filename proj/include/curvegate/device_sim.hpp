#pragma once

// Two-qubit device model: the full interaction-picture Hamiltonian, the
// simplified rotating-frame Hamiltonian, time-ordered propagation and the
// first-order Magnus prediction.
//
// Units: every field and frequency is an angular frequency in rad/s, times are
// in seconds. Qubit 1 (first tensor slot) is the undriven control qubit,
// qubit 2 is the driven qubit.

#include <optional>
#include <string>
#include <vector>

#include "curvegate/curvegeom.hpp"
#include "curvegate/qmat.hpp"

namespace curvegate {

struct DeviceParams {
  double bz_l0 = 0.0;
  double bz_r0 = 0.0;
  double bz_l1 = 0.0;
  double bz_r1 = 0.0;
  double by_l0 = 0.0;
  double by_r0 = 0.0;
  double phi = 0.0;
  double j = 0.0;
  std::optional<double> drive_omega;  // nullopt means auto
  double crosstalk = 0.0;
  bool static_transverse = true;      // include by_l0, by_r0 in the drive terms
};

// Exchange coupling calibrated from the short published pulse:
// derive_j(28.3836 ns, 0.221163, 2 pi / 3).
inline constexpr double kCalibratedJ = 123778740.47238509;

DeviceParams default_device();

// Throws InputError for j <= 0 or crosstalk < 0. Returns warnings (weak
// coupling violated).
std::vector<std::string> validate_device(const DeviceParams& p);

// J = 2 s_f / t_f with s_f the binormal arclength of the ansatz.
double derive_j(double t_f_target, double lambda, double beta);

struct DerivedFields {
  double bbar_z, bbar1_z, dbz, dbz1, alpha_m, alpha_p, xi;
};
DerivedFields derived_fields(const DeviceParams& p);

// Left-qubit resonance read off the full Hamiltonian's diagonal. Returned as a
// positive carrier frequency.
double auto_drive_frequency(const DeviceParams& p);

// p.drive_omega if set, otherwise auto_drive_frequency(p).
double carrier_frequency(const DeviceParams& p);

// center + k * step for k = -(points-1)/2 ... (points-1)/2 spanning +-half_width.
std::vector<double> detuning_grid(double center, double half_width, int points);

enum class Frame { full, rotating };

const char* frame_name(Frame f);
Frame parse_frame(const std::string& s);

struct PropagationConfig {
  double dt = 0.5e-12;
  Frame frame = Frame::full;

  static PropagationConfig defaults(Frame f);
};

inline constexpr double kMaxFullFrameDt = 2e-12;

// Full Hamiltonian for drive amplitude `amp` (rad/s) at time t with carrier
// frequency `carrier`.
Mat4 hamiltonian_full_amp(const DeviceParams& p, const DerivedFields& d, double amp, double t, double carrier);
Mat4 hamiltonian_full(const DeviceParams& p, const Pulse& pulse, double t);

// (J/4)(ZZ - IZ) + (amp/4) IX
Mat4 hamiltonian_rotating_amp(double j, double amp);
Mat4 hamiltonian_rotating(const DeviceParams& p, const Pulse& pulse, double t);

// Midpoint-sampled product of piecewise-constant exponentials. The step is
// shrunk so that an integer number of steps covers the window exactly.
Mat4 propagate(const DeviceParams& p, const Pulse& pulse, const PropagationConfig& cfg);

// Throws NumericalError when U is not unitary to within
// kPropagatorUnitarityLimit, NaN included.
inline constexpr double kPropagatorUnitarityLimit = 1e-6;
void check_propagator(const Mat4& u);

Mat4 propagate_window(const DeviceParams& p, const Pulse& pulse, const PropagationConfig& cfg, double t0,
                      double t1);

// Propagator of the single-qubit part -(J/4) Z + (Omega/4) X of the rotating
// Hamiltonian, acting on the driven qubit.
Mat2 drive_frame_propagator(const Pulse& pulse, double j, double dt = 10e-12);

// exp(-i (J/4) Z (x) (R . sigma))
Mat4 magnus_unitary(double j, const Vec3& r);

// magnus_unitary(j, R(t_f)) with R from curve_from_pulse.
Mat4 first_order_prediction(const Pulse& pulse, double j);

}  // namespace curvegate
