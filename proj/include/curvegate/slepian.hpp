#pragma once

// Discrete prolate spheroidal sequences and pulses living in their span.

#include <cstdint>
#include <vector>

#include "curvegate/grape.hpp"

namespace curvegate {

struct SlepianBasis {
  int n = 0;
  double nw = 0.0;
  int k = 0;
  std::vector<std::vector<double>> vectors;  // k sequences of length n
  std::vector<double> concentrations;        // sinc-kernel Rayleigh quotients

  // Sequences with the linear ramp through their endpoint values removed, so
  // every member (and every combination) starts and ends at exactly zero.
  std::vector<std::vector<double>> ramp_free() const;
};

// Eigenvectors of the symmetric tridiagonal matrix that commutes with the
// sinc kernel, sorted by decreasing concentration. Sign convention: even
// orders have a positive sum, odd orders are positive on the first half.
SlepianBasis dpss(int n, double nw, int k);

// Sum_i coeffs_i * ramp_free()[i]
std::vector<double> combine(const SlepianBasis& basis, const std::vector<double>& coeffs);

struct SlepianPulse {
  std::vector<double> coeffs;  // rad/s, with respect to ramp_free()
  PiecewisePulse pulse;
};

// Coefficients uniform in [-1, 1] from a generator seeded with `seed`,
// rescaled so the peak |amplitude| equals amplitude_scale.
SlepianPulse random_pulse(const SlepianBasis& basis, double amplitude_scale, double duration, std::uint64_t seed);

struct BasisOptimization {
  SlepianPulse result;
  std::vector<double> trace;
  int iters = 0;
  bool stalled = false;
  std::string stop_reason;
};

// Gradient descent in coefficient space with the GRAPE gradient projected onto
// the basis. cfg.amplitude_bound is not supported here.
BasisOptimization optimize_in_basis(const SlepianBasis& basis, const std::vector<double>& coeffs0, double dt,
                                    const GrapeConfig& cfg);

// Gradient of the Makhlin cost with respect to the coefficients.
CostGradient basis_cost_gradient(const SlepianBasis& basis, const std::vector<double>& coeffs, double dt,
                                 const GrapeConfig& cfg);

struct Multistart {
  std::vector<BasisOptimization> runs;
  std::size_t best = 0;  // lowest final cost, lowest index on ties
};

// Restart r starts from random_pulse(basis, amplitude_scale, duration, seed + r).
Multistart slepian_multistart(const SlepianBasis& basis, double duration, double amplitude_scale, int restarts,
                              std::uint64_t seed, const GrapeConfig& cfg);

}  // namespace curvegate
