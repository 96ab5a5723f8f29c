#pragma once

// Fixed-size complex matrices for one- and two-qubit operators.
//
// Only 2x2 and 4x4 are instantiated. Storage is row-major, values are plain
// std::complex<double>, and every function here is pure.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string_view>

namespace curvegate {

using cplx = std::complex<double>;

template <int N>
class Mat {
  static_assert(N == 2 || N == 4, "only 2x2 and 4x4 matrices are supported");

 public:
  static constexpr int dim = N;

  constexpr Mat() = default;

  static Mat identity() {
    Mat m;
    for (int i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat diagonal(const std::array<cplx, N>& d) {
    Mat m;
    for (int i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  cplx& operator()(int r, int c) { return a_[r * N + c]; }
  const cplx& operator()(int r, int c) const { return a_[r * N + c]; }

  const std::array<cplx, N * N>& data() const { return a_; }
  std::array<cplx, N * N>& data() { return a_; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < N * N; ++i) a_[i] += o.a_[i];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (int i = 0; i < N * N; ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Mat& operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, cplx s) { return a *= s; }
  friend Mat operator*(cplx s, Mat a) { return a *= s; }
  friend Mat operator*(Mat a, double s) { return a *= cplx(s); }
  friend Mat operator*(double s, Mat a) { return a *= cplx(s); }
  friend Mat operator-(Mat a) { return a *= cplx(-1.0); }

  friend Mat operator*(const Mat& a, const Mat& b) {
    Mat c;
    for (int i = 0; i < N; ++i) {
      for (int k = 0; k < N; ++k) {
        const cplx aik = a(i, k);
        for (int j = 0; j < N; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::array<cplx, N * N> a_{};
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;

template <int N>
Mat<N> adjoint(const Mat<N>& m) {
  Mat<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = std::conj(m(j, i));
  return r;
}

template <int N>
Mat<N> transpose(const Mat<N>& m) {
  Mat<N> r;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r(i, j) = m(j, i);
  return r;
}

template <int N>
cplx trace(const Mat<N>& m) {
  cplx t = 0.0;
  for (int i = 0; i < N; ++i) t += m(i, i);
  return t;
}

template <int N>
double frobenius_norm(const Mat<N>& m) {
  double s = 0.0;
  for (const auto& x : m.data()) s += std::norm(x);
  return std::sqrt(s);
}

// Sum_ij a_ij * b_ij, i.e. Tr(A^T B), without forming the product.
template <int N>
cplx elementwise_dot(const Mat<N>& a, const Mat<N>& b) {
  cplx s = 0.0;
  for (int i = 0; i < N * N; ++i) s += a.data()[i] * b.data()[i];
  return s;
}

cplx det(const Mat2& m);
cplx det(const Mat4& m);

// First factor occupies the high-order bit: kron(a, b)(2i+k, 2j+l) = a(i,j) b(k,l).
Mat4 kron(const Mat2& a, const Mat2& b);

// Single Pauli matrix for one of 'I', 'X', 'Y', 'Z'.
Mat2 pauli(char c);

// sigma_a (x) sigma_b for a two-letter label such as "ZX". The first letter
// acts on qubit 1 (control slot), the second on qubit 2 (driven slot).
Mat4 pauli_product(std::string_view label);

template <int N>
double hermiticity_error(const Mat<N>& h) {
  return frobenius_norm(h - adjoint(h));
}

// ||U^dagger U - I||_F
template <int N>
double unitarity_error(const Mat<N>& u) {
  return frobenius_norm(adjoint(u) * u - Mat<N>::identity());
}

template <int N>
struct HermitianEigen {
  std::array<double, N> values{};  // unsorted
  Mat<N> vectors;                  // column k is the eigenvector for values[k]
};

// Cyclic complex Jacobi. Input must be Hermitian; only the upper triangle and
// the real part of the diagonal are trusted.
template <int N>
HermitianEigen<N> eigh(const Mat<N>& h);

// exp(-i H t) for Hermitian H via eigendecomposition. Throws InputError when
// ||H - H^dagger||_F exceeds 1e-10 * max(1, ||H||_F).
template <int N>
Mat<N> expm_hermitian_skew(const Mat<N>& h, double t);

// Same as above without the Hermiticity check, for hot loops whose inputs are
// Hermitian by construction.
template <int N>
Mat<N> expm_hermitian_skew_unchecked(const Mat<N>& h, double t);

// exp(-i H t) together with its directional derivative along C,
// d/de exp(-i (H + e C) t) at e = 0, from divided differences in the
// eigenbasis of H.
template <int N>
void expm_with_derivative(const Mat<N>& h, double t, const Mat<N>& c, Mat<N>& u, Mat<N>& du);

// min over phi of ||A - e^{i phi} B||_F, closed form through |Tr(B^dagger A)|.
template <int N>
double frobenius_distance_up_to_phase(const Mat<N>& a, const Mat<N>& b) {
  const double na = frobenius_norm(a);
  const double nb = frobenius_norm(b);
  const double overlap = std::abs(trace(adjoint(b) * a));
  return std::sqrt(std::max(0.0, na * na + nb * nb - 2.0 * overlap));
}

namespace gates {
Mat4 cnot();
Mat4 swap();
Mat4 identity();
}  // namespace gates

}  // namespace curvegate
