#pragma once

// Local dressing K1 U K2 toward a target gate and the gate fidelity
// F = [Tr(U^dagger U) + |Tr(T^dagger U)|^2] / (n (n + 1)) with n = 4.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "curvegate/device_sim.hpp"
#include "curvegate/parallel.hpp"
#include "curvegate/qmat.hpp"

namespace curvegate {

inline constexpr int kDefaultDressingRestarts = 20;

// Rz(a) Ry(b) Rz(c)
Mat2 su2_zyz(double a, double b, double c);

// Angles (a1, b1, c1, a2, b2, c2) -> su2_zyz(a1, b1, c1) (x) su2_zyz(a2, b2, c2).
Mat4 local_from_angles(const std::array<double, 6>& angles);

double gate_fidelity(const Mat4& u, const Mat4& target);

struct DressingResult {
  std::array<double, 6> k1_angles{};
  std::array<double, 6> k2_angles{};
  double fidelity = 0.0;
  std::string target = "CNOT";

  Mat4 k1() const { return local_from_angles(k1_angles); }
  Mat4 k2() const { return local_from_angles(k2_angles); }
};

// Nelder-Mead over the 12 angles from the zero seed plus `restarts` uniformly
// random seeds. The seed for restart r is derived from (seed, r) only, so the
// serial and parallel paths return identical results.
DressingResult optimize_dressing(const Mat4& u, const Mat4& target, int restarts = kDefaultDressingRestarts,
                                 std::uint64_t seed = 0, Exec exec = Exec::parallel);

struct SweepPoint {
  double carrier = 0.0;  // rad/s
  Mat4 u;
  DressingResult dressing;
};

struct DetuningSweep {
  std::vector<SweepPoint> points;
  std::size_t best = 0;  // highest fidelity, lowest index on ties

  const SweepPoint& best_point() const { return points.at(best); }
};

using Propagator = std::function<Mat4(const DeviceParams&)>;

// Calls `propagator` once per carrier frequency (set as drive_omega on a copy
// of p) and dresses each result.
DetuningSweep sweep_detuning(const DeviceParams& p, const Propagator& propagator, const std::vector<double>& carriers,
                             const Mat4& target, int restarts = kDefaultDressingRestarts, std::uint64_t seed = 0,
                             Exec exec = Exec::parallel);

// Same with device-sim propagation of a sampled pulse.
DetuningSweep sweep_detuning(const DeviceParams& p, const Pulse& pulse, const PropagationConfig& cfg,
                             const std::vector<double>& carriers, const Mat4& target,
                             int restarts = kDefaultDressingRestarts, std::uint64_t seed = 0,
                             Exec exec = Exec::parallel);

}  // namespace curvegate
