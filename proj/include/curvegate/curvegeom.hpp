#pragma once

// Space-curve construction for entangling-gate pulses.
//
// A unit-sphere curve B(s) (the binormal curve) defines a constant-torsion
// space curve R = (1/tau) * integral of B x dB. For the weakly coupled
// two-qubit Hamiltonian (J/4)(ZZ - IZ) + (Omega/4) IX the torsion is J/2,
// the curvature is Omega/2, and J|R(t_f)| fixes the entangling class of the
// gate. Time and arclength on B are related by s = tau * t.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "curvegate/parallel.hpp"
#include "curvegate/vec3.hpp"

namespace curvegate {

inline constexpr int kDefaultCurveSamples = 4096;

// Parameters of the binormal ansatz
//   sqrt(1 - lambda sin^2(beta l)) (cos l, sin l, 0) + sqrt(lambda) sin(beta l) z,
// for l in [0, pi/beta]. The curve is a great circle near both ends, which
// makes the extracted pulse start and end at zero.
struct AnsatzParams {
  double lambda = 0.0;
  double beta = 1.0;
};

struct BinormalSample {
  double l = 0.0;  // curve parameter
  Vec3 b{};        // point on the unit sphere
  double s = 0.0;  // arclength from the first sample
};

struct BinormalCurve {
  std::vector<BinormalSample> samples;
  // Present when the samples came from sample_ansatz; enables analytic
  // derivatives downstream.
  std::optional<AnsatzParams> ansatz;
  bool uniform_arclength = false;

  double arclength() const { return samples.empty() ? 0.0 : samples.back().s; }
};

struct SpaceCurve {
  std::vector<double> t;      // seconds
  std::vector<Vec3> r;        // seconds (R has units of time)
  std::vector<double> kappa;  // curvature, rad/s, aligned with t
  double tau_r = 0.0;         // torsion, rad/s
  double t_f = 0.0;
  std::optional<AnsatzParams> ansatz;
};

struct Pulse {
  std::vector<double> t;      // seconds, t[0] = 0, strictly increasing
  std::vector<double> omega;  // rad/s
  std::map<std::string, std::string> meta;

  double duration() const { return t.empty() ? 0.0 : t.back(); }
  double peak() const;
  // Linear interpolation; time must lie in [0, duration()].
  double at(double time) const;
};

// Throws InputError unless the pulse has >= 2 samples, t[0] == 0 and strictly
// increasing times.
void validate_pulse(const Pulse& p);

// ---------------------------------------------------------------------------
// Binormal curves

// n+1 samples uniform in l over [0, pi/beta]; arclength by composite Simpson
// on the analytic speed |dB/dl|.
BinormalCurve sample_ansatz(double lambda, double beta, int n = kDefaultCurveSamples);

// Builds a curve from user-supplied sphere points (parameter values l must be
// strictly increasing). Arclength is accumulated from finite-difference
// speeds. Throws InputError if any point is off the unit sphere by > 1e-9.
BinormalCurve binormal_from_points(std::vector<double> l, const std::vector<Vec3>& points);

// Resamples onto n+1 points uniform in arclength. Ansatz curves are evaluated
// exactly at the inverted parameter; generic curves use cubic Hermite
// interpolation followed by renormalization onto the sphere.
BinormalCurve reparametrize_by_arclength(const BinormalCurve& curve, int n);

// |geodesic curvature| per sample, with respect to arclength.
std::vector<double> geodesic_curvature(const BinormalCurve& curve);

// ---------------------------------------------------------------------------
// Space curves and pulses

SpaceCurve integrate_space_curve(const BinormalCurve& curve, double tau_r);

// Omega(t) = 2 kappa_R(t) on the curve's time grid.
Pulse pulse_from_curve(const SpaceCurve& curve);

// J |R(t_f)| = 2 |integral of B x dB| for the ansatz. Independent of J.
double displacement_invariant(double lambda, double beta, int n = kDefaultCurveSamples);

// Smallest lambda in [0, 1] with |displacement_invariant(lambda, beta) - target| < tol.
// Coarse scan with step 1e-3, then bisection on the first bracket.
double search_lambda(double beta, double target, double tol = 1e-10, Exec exec = Exec::parallel);

// Inverse map: integrates the Frenet frame with curvature Omega/2 and torsion
// j/2 starting from T = z, N = y, B = -x, then R = integral of T. This frame
// matches the Bloch components of U0^dagger Z U0 for the driven qubit, so the
// result can be used directly in exp(-i (J/4) Z (x) (R . sigma)).
SpaceCurve curve_from_pulse(const Pulse& pulse, double j);

// Cumulative integral on a uniform grid (Simpson with a three-point partial
// rule on odd indices). Exposed for the tests and the GRAPE discretizer.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h);

}  // namespace curvegate
