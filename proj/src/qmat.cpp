#include "curvegate/qmat.hpp"

#include <string>

#include "curvegate/errors.hpp"

namespace curvegate {

cplx det(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

cplx det(const Mat4& m) {
  // Laplace expansion along the first two rows using 2x2 minors.
  const cplx s0 = m(0, 0) * m(1, 1) - m(1, 0) * m(0, 1);
  const cplx s1 = m(0, 0) * m(1, 2) - m(1, 0) * m(0, 2);
  const cplx s2 = m(0, 0) * m(1, 3) - m(1, 0) * m(0, 3);
  const cplx s3 = m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2);
  const cplx s4 = m(0, 1) * m(1, 3) - m(1, 1) * m(0, 3);
  const cplx s5 = m(0, 2) * m(1, 3) - m(1, 2) * m(0, 3);

  const cplx c5 = m(2, 2) * m(3, 3) - m(3, 2) * m(2, 3);
  const cplx c4 = m(2, 1) * m(3, 3) - m(3, 1) * m(2, 3);
  const cplx c3 = m(2, 1) * m(3, 2) - m(3, 1) * m(2, 2);
  const cplx c2 = m(2, 0) * m(3, 3) - m(3, 0) * m(2, 3);
  const cplx c1 = m(2, 0) * m(3, 2) - m(3, 0) * m(2, 2);
  const cplx c0 = m(2, 0) * m(3, 1) - m(3, 0) * m(2, 1);

  return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

Mat2 pauli(char c) {
  Mat2 m;
  switch (c) {
    case 'I':
      return Mat2::identity();
    case 'X':
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      return m;
    case 'Y':
      m(0, 1) = cplx(0.0, -1.0);
      m(1, 0) = cplx(0.0, 1.0);
      return m;
    case 'Z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      return m;
    default:
      throw InputError(std::string("invalid Pauli letter '") + c + "'");
  }
}

Mat4 pauli_product(std::string_view label) {
  if (label.size() != 2) {
    throw InputError("Pauli label must have exactly two letters, got '" + std::string(label) + "'");
  }
  return kron(pauli(label[0]), pauli(label[1]));
}

template <int N>
HermitianEigen<N> eigh(const Mat<N>& h) {
  Mat<N> a = h;
  Mat<N> v = Mat<N>::identity();
  for (int i = 0; i < N; ++i) a(i, i) = a(i, i).real();
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < i; ++j) a(i, j) = std::conj(a(j, i));

  double scale = 0.0;
  for (const auto& x : a.data()) scale += std::norm(x);
  const double negligible = 1e-18 * std::sqrt(scale);

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += std::norm(a(p, q));
    if (off == 0.0) break;

    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= negligible) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        // Phase e^{-i phi} on column q makes the (p,q) entry real, then a real
        // Givens rotation zeroes it.
        const cplx ph = std::conj(apq) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = 0.5 * std::atan2(2.0 * mag, app - aqq);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const cplx sph = s * ph;
        const cplx cph = c * ph;

        for (int r = 0; r < N; ++r) {
          const cplx xp = a(r, p);
          const cplx xq = a(r, q);
          a(r, p) = c * xp + sph * xq;
          a(r, q) = -s * xp + cph * xq;
        }
        for (int r = 0; r < N; ++r) {
          const cplx xp = a(p, r);
          const cplx xq = a(q, r);
          a(p, r) = c * xp + std::conj(sph) * xq;
          a(q, r) = -s * xp + std::conj(cph) * xq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (int r = 0; r < N; ++r) {
          const cplx xp = v(r, p);
          const cplx xq = v(r, q);
          v(r, p) = c * xp + sph * xq;
          v(r, q) = -s * xp + cph * xq;
        }
      }
    }
  }

  HermitianEigen<N> out;
  for (int i = 0; i < N; ++i) out.values[i] = a(i, i).real();
  out.vectors = v;
  return out;
}

template <int N>
Mat<N> expm_hermitian_skew_unchecked(const Mat<N>& h, double t) {
  const auto eig = eigh(h);
  std::array<cplx, N> phase;
  for (int k = 0; k < N; ++k) phase[k] = std::polar(1.0, -eig.values[k] * t);
  Mat<N> u;
  const Mat<N>& v = eig.vectors;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < N; ++k) s += v(i, k) * phase[k] * std::conj(v(j, k));
      u(i, j) = s;
    }
  }
  return u;
}

template <int N>
Mat<N> expm_hermitian_skew(const Mat<N>& h, double t) {
  const double err = hermiticity_error(h);
  if (err > 1e-10 * std::max(1.0, frobenius_norm(h))) {
    throw InputError("expm_hermitian_skew: generator is not Hermitian (||H - H^dagger||_F = " +
                     std::to_string(err) + ")");
  }
  return expm_hermitian_skew_unchecked(h, t);
}

template <int N>
void expm_with_derivative(const Mat<N>& h, double t, const Mat<N>& c, Mat<N>& u, Mat<N>& du) {
  const auto eig = eigh(h);
  const Mat<N>& v = eig.vectors;
  const Mat<N> cv = adjoint(v) * c * v;
  Mat<N> g;
  std::array<cplx, N> phase;
  for (int k = 0; k < N; ++k) phase[k] = std::polar(1.0, -eig.values[k] * t);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      // (e^{-i t w_i} - e^{-i t w_j}) / (w_i - w_j), written through sinc.
      const double half = 0.5 * t * (eig.values[i] - eig.values[j]);
      const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
      const cplx mid = std::polar(1.0, -0.5 * t * (eig.values[i] + eig.values[j]));
      g(i, j) = cplx(0.0, -t) * mid * sinc * cv(i, j);
    }
  }
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < N; ++k) s += v(i, k) * phase[k] * std::conj(v(j, k));
      u(i, j) = s;
    }
  }
  du = v * g * adjoint(v);
}

template HermitianEigen<2> eigh(const Mat<2>&);
template HermitianEigen<4> eigh(const Mat<4>&);
template Mat<2> expm_hermitian_skew(const Mat<2>&, double);
template Mat<4> expm_hermitian_skew(const Mat<4>&, double);
template Mat<2> expm_hermitian_skew_unchecked(const Mat<2>&, double);
template Mat<4> expm_hermitian_skew_unchecked(const Mat<4>&, double);
template void expm_with_derivative(const Mat<2>&, double, const Mat<2>&, Mat<2>&, Mat<2>&);
template void expm_with_derivative(const Mat<4>&, double, const Mat<4>&, Mat<4>&, Mat<4>&);

namespace gates {

Mat4 cnot() {
  Mat4 m;
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

Mat4 swap() {
  Mat4 m;
  m(0, 0) = 1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 3) = 1.0;
  return m;
}

Mat4 identity() { return Mat4::identity(); }

}  // namespace gates

}  // namespace curvegate
