#pragma once

// Shared helpers for the unit and acceptance tests: deterministic random
// matrices and independent reference computations.

#include <cmath>
#include <complex>
#include <random>

#include "curvegate/qmat.hpp"

namespace curvegate::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(rng()); }

template <int N>
Mat<N> random_hermitian(double scale = 1.0) {
  Mat<N> h;
  for (int i = 0; i < N; ++i) {
    h(i, i) = scale * gaussian();
    for (int j = i + 1; j < N; ++j) {
      h(i, j) = scale * cplx(gaussian(), gaussian());
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

// Haar-ish random unitary by Gram-Schmidt on a complex Gaussian matrix.
template <int N>
Mat<N> random_unitary() {
  Mat<N> a;
  for (auto& x : a.data()) x = cplx(gaussian(), gaussian());
  for (int c = 0; c < N; ++c) {
    for (int p = 0; p < c; ++p) {
      cplx proj = 0.0;
      for (int r = 0; r < N; ++r) proj += std::conj(a(r, p)) * a(r, c);
      for (int r = 0; r < N; ++r) a(r, c) -= proj * a(r, p);
    }
    double nrm = 0.0;
    for (int r = 0; r < N; ++r) nrm += std::norm(a(r, c));
    nrm = std::sqrt(nrm);
    for (int r = 0; r < N; ++r) a(r, c) /= nrm;
  }
  return a;
}

// exp(A) by scaling and squaring of a truncated Taylor series.
template <int N>
Mat<N> expm_taylor(const Mat<N>& a) {
  const double nrm = frobenius_norm(a);
  int squarings = 0;
  double scale = 1.0;
  while (nrm * scale > 0.05) {
    scale *= 0.5;
    ++squarings;
  }
  const Mat<N> x = a * scale;
  Mat<N> term = Mat<N>::identity();
  Mat<N> sum = Mat<N>::identity();
  for (int k = 1; k <= 20; ++k) {
    term = term * x * (1.0 / k);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline Mat2 su2_zyz(double a, double b, double c) {
  Mat2 rz_a = Mat2::diagonal({std::polar(1.0, -a / 2), std::polar(1.0, a / 2)});
  Mat2 rz_c = Mat2::diagonal({std::polar(1.0, -c / 2), std::polar(1.0, c / 2)});
  Mat2 ry;
  ry(0, 0) = std::cos(b / 2);
  ry(0, 1) = -std::sin(b / 2);
  ry(1, 0) = std::sin(b / 2);
  ry(1, 1) = std::cos(b / 2);
  return rz_a * ry * rz_c;
}

inline Mat4 random_local() {
  const double pi = 3.141592653589793;
  return kron(su2_zyz(uniform(-pi, pi), uniform(0, pi), uniform(-pi, pi)),
              su2_zyz(uniform(-pi, pi), uniform(0, pi), uniform(-pi, pi)));
}

template <int N>
double max_abs_diff(const Mat<N>& a, const Mat<N>& b) {
  double m = 0.0;
  for (int i = 0; i < N * N; ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace curvegate::testing
