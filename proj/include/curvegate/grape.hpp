#pragma once

// Piecewise-constant pulse optimization against the Makhlin cost
// C = |G1|^2 + |G2 - 1|^2.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "curvegate/curvegeom.hpp"
#include "curvegate/device_sim.hpp"
#include "curvegate/parallel.hpp"
#include "curvegate/qmat.hpp"

namespace curvegate {

struct PiecewisePulse {
  std::vector<double> amps;  // rad/s, one per interval
  double dt = 0.0;           // seconds

  int size() const { return static_cast<int>(amps.size()); }
  double duration() const { return dt * static_cast<double>(amps.size()); }
  // Samples at interval midpoints plus both endpoints (first/last amplitude).
  Pulse to_pulse() const;
};

void validate_piecewise(const PiecewisePulse& pw);

// Interval means of the linearly interpolated pulse (exact trapezoid rule over
// every knot inside the interval).
PiecewisePulse discretize(const Pulse& pulse, int n);

struct ForwardResult {
  Mat4 u;
  std::vector<Mat4> steps;  // U_k per interval
};

// Rotating frame: U_k = exp(-i dt ((J/4)(ZZ - IZ) + amp_k IX / 4)).
// Full frame: each interval is sub-stepped at <= substep_dt with the carrier
// evolving inside it.
ForwardResult forward_propagate(const PiecewisePulse& pw, Frame frame, const DeviceParams& device,
                                double substep_dt = 0.5e-12, Exec exec = Exec::parallel);

struct CostGradient {
  double cost = 0.0;
  std::vector<double> grad;  // dC / d amp_k, units 1/(rad/s)
};

// Analytic gradient. The step derivative dU_k/d amp_k is the exact derivative
// of the step exponential, chained through the trace and determinant
// expressions of G1 and G2. Full frame accumulates it over the sub-steps of
// each interval.
CostGradient cost_gradient(const PiecewisePulse& pw, Frame frame, const DeviceParams& device,
                           double substep_dt = 0.5e-12, Exec exec = Exec::parallel);

// Central differences with step rel_step / dt: the phase an amplitude change
// imprints on one interval is what sets the curvature scale of the cost.
CostGradient cost_gradient_fd(const PiecewisePulse& pw, Frame frame, const DeviceParams& device,
                              double rel_step = 1e-4, double substep_dt = 0.5e-12, Exec exec = Exec::parallel);

double makhlin_cost_of(const PiecewisePulse& pw, Frame frame, const DeviceParams& device,
                       double substep_dt = 0.5e-12, Exec exec = Exec::parallel);

struct GrapeConfig {
  int max_iters = 500;
  // Stop when max_k |dC/dOmega_k| * scale < grad_tol, scale = max(peak |amp|, J).
  double grad_tol = 1e-10;
  double cost_tol = 1e-16;
  Frame frame = Frame::rotating;
  bool endpoint_pin = true;
  std::optional<double> amplitude_bound;  // rad/s
  double substep_dt = 0.5e-12;            // full frame only
  // Full frame: compare analytic against finite differences on a few
  // components first and switch to finite differences above 1e-3.
  bool check_gradient = true;
  DeviceParams device = default_device();
  Exec exec = Exec::parallel;
};

struct DescentOptions {
  int max_iters = 500;
  double grad_tol = 1e-10;
  double cost_tol = 1e-16;
  double scale = 1.0;  // variable scale used for the gradient test and the first trial step
};

struct DescentResult {
  std::vector<double> x;
  std::vector<double> trace;  // cost per accepted iterate, starting with x0
  int iters = 0;
  bool stalled = false;
  std::string stop_reason;
};

using CostGradFn = std::function<CostGradient(const std::vector<double>&)>;
using ProjectFn = std::function<void(std::vector<double>&)>;

// Projected steepest descent with Armijo backtracking (c1 = 1e-4, shrink 0.5).
// The trial step starts from the Barzilai-Borwein estimate of the previous
// iteration, so the cost trace is non-increasing by construction.
DescentResult gradient_descent(const CostGradFn& fn, std::vector<double> x0, const DescentOptions& opt,
                               const ProjectFn& project = {});

struct GrapeResult {
  PiecewisePulse pulse;
  std::vector<double> trace;
  int iters = 0;
  bool stalled = false;
  bool finite_difference_gradient = false;
  std::string stop_reason;
};

GrapeResult optimize(const PiecewisePulse& pw0, const GrapeConfig& cfg);

double relative_l2_change(const PiecewisePulse& a, const PiecewisePulse& b);

}  // namespace curvegate
