#include <cmath>
#include <numbers>

#include "curvegate/errors.hpp"
#include "curvegate/qmat.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace curvegate;
using namespace curvegate::testing;

TEST_CASE("pauli_product builds tensor products") {
  CHECK(pauli_product("II") == Mat4::identity());
  CHECK(pauli_product("ZZ") == Mat4::diagonal({1.0, -1.0, -1.0, 1.0}));

  const Mat4 ix = pauli_product("IX");
  Mat4 expected;
  expected(0, 1) = expected(1, 0) = expected(2, 3) = expected(3, 2) = 1.0;
  CHECK(ix == expected);

  // First letter acts on the high-order (control) slot.
  const Mat4 zi = pauli_product("ZI");
  CHECK(zi == Mat4::diagonal({1.0, 1.0, -1.0, -1.0}));

  CHECK_THROWS_AS(pauli_product("Q1"), InputError);
  CHECK_THROWS_AS(pauli_product("XYZ"), InputError);
  CHECK_THROWS_AS(pauli_product("x"), InputError);
}

TEST_CASE("pauli products are involutory and traceless") {
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  for (char a : letters) {
    for (char b : letters) {
      const std::string label{a, b};
      const Mat4 p = pauli_product(label);
      CHECK(max_abs_diff(p * p, Mat4::identity()) < 1e-15);
      if (label != "II") CHECK(std::abs(trace(p)) < 1e-15);
      CHECK(hermiticity_error(p) == 0.0);
    }
  }
}

TEST_CASE("expm of zero generator is identity") {
  CHECK(max_abs_diff(expm_hermitian_skew(Mat4{}, 3.7), Mat4::identity()) == 0.0);
  CHECK(max_abs_diff(expm_hermitian_skew(Mat2{}, -1.0), Mat2::identity()) == 0.0);
}

TEST_CASE("expm matches closed-form single-qubit rotations") {
  const double t = 2.5e-9;
  for (char axis : {'X', 'Y', 'Z'}) {
    // Eigenvalues of H t are +-pi/2.
    const Mat2 h = pauli(axis) * (std::numbers::pi / (2.0 * t));
    const Mat2 u = expm_hermitian_skew(h, t);
    const Mat2 expected = cplx(0.0, -1.0) * pauli(axis);  // cos(pi/2) I - i sin(pi/2) sigma
    CHECK(max_abs_diff(u, expected) < 1e-14);
  }
  const double theta = 0.731;
  const Mat2 u = expm_hermitian_skew(pauli('X') * 0.5, theta);
  Mat2 expected = Mat2::identity() * std::cos(theta / 2) + pauli('X') * cplx(0.0, -std::sin(theta / 2));
  CHECK(max_abs_diff(u, expected) < 1e-15);
}

TEST_CASE("expm agrees with scaling-and-squaring Taylor oracle") {
  for (int trial = 0; trial < 50; ++trial) {
    const Mat4 h = random_hermitian<4>();
    const Mat4 u = expm_hermitian_skew(h, 1.0);
    const Mat4 ref = expm_taylor(h * cplx(0.0, -1.0));
    CHECK(max_abs_diff(u, ref) < 1e-10);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const Mat2 h = random_hermitian<2>(3.0);
    CHECK(max_abs_diff(expm_hermitian_skew(h, 0.4), expm_taylor(h * cplx(0.0, -0.4))) < 1e-10);
  }
}

TEST_CASE("expm results are unitary and compose") {
  for (int trial = 0; trial < 100; ++trial) {
    const Mat4 h = random_hermitian<4>(uniform(0.1, 50.0));
    const double t1 = uniform(-2.0, 2.0);
    const double t2 = uniform(-2.0, 2.0);
    const Mat4 u1 = expm_hermitian_skew(h, t1);
    CHECK(unitarity_error(u1) < 1e-10);
    const Mat4 u12 = expm_hermitian_skew(h, t1 + t2);
    CHECK(max_abs_diff(u12, u1 * expm_hermitian_skew(h, t2)) < 1e-9);
  }
}

TEST_CASE("expm handles degenerate and physically scaled generators") {
  // Degenerate spectrum.
  const Mat4 zz = pauli_product("ZZ") * 1e8;
  const Mat4 u = expm_hermitian_skew(zz, 1e-9);
  CHECK(max_abs_diff(u, expm_taylor(zz * cplx(0.0, -1e-9))) < 1e-12);
  // Rad/s scale generators times picosecond steps.
  const Mat4 h = random_hermitian<4>(2e8);
  CHECK(max_abs_diff(expm_hermitian_skew(h, 5e-13), expm_taylor(h * cplx(0.0, -5e-13))) < 1e-13);
}

TEST_CASE("expm rejects non-Hermitian generators") {
  Mat4 h = random_hermitian<4>();
  h(0, 1) += 0.1;
  CHECK_THROWS_AS(expm_hermitian_skew(h, 1.0), InputError);
}

TEST_CASE("eigh reconstructs the input") {
  for (int trial = 0; trial < 50; ++trial) {
    const Mat4 h = random_hermitian<4>();
    const auto e = eigh(h);
    Mat4 d;
    for (int k = 0; k < 4; ++k) d(k, k) = e.values[k];
    CHECK(max_abs_diff(e.vectors * d * adjoint(e.vectors), h) < 1e-12);
    CHECK(unitarity_error(e.vectors) < 1e-12);
  }
}

TEST_CASE("determinant matches eigenvalue product for unitaries") {
  for (int trial = 0; trial < 20; ++trial) {
    const Mat4 h = random_hermitian<4>();
    const auto e = eigh(h);
    double sum = 0.0;
    for (double v : e.values) sum += v;
    const cplx expected = std::polar(1.0, -sum);
    CHECK(std::abs(det(expm_hermitian_skew(h, 1.0)) - expected) < 1e-12);
  }
  CHECK(std::abs(det(gates::swap()) + 1.0) < 1e-15);
  CHECK(std::abs(det(gates::cnot()) + 1.0) < 1e-15);
}

TEST_CASE("frobenius distance up to phase") {
  const Mat4 u = random_unitary<4>();
  CHECK(frobenius_distance_up_to_phase(u, u) < 1e-7);
  CHECK(frobenius_distance_up_to_phase(u, -u) < 1e-7);
  CHECK(frobenius_distance_up_to_phase(u, u * std::polar(1.0, 0.77)) < 1e-7);

  // Oracle: scan the global phase on a fine grid.
  const Mat4 a = Mat4::identity();
  const Mat4 b = Mat4::diagonal({1.0, 1.0, 1.0, -1.0});
  double best = 1e300;
  const int steps = 200000;
  for (int k = 0; k < steps; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / steps;
    best = std::min(best, frobenius_norm(a - b * std::polar(1.0, phi)));
  }
  CHECK(frobenius_distance_up_to_phase(a, b) == doctest::Approx(best).epsilon(1e-9));
  CHECK(frobenius_distance_up_to_phase(a, b) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("exponential derivative matches central differences") {
  for (int trial = 0; trial < 20; ++trial) {
    const Mat4 h = random_hermitian<4>();
    const Mat4 c = random_hermitian<4>();
    const double t = uniform(0.1, 2.0);
    Mat4 u, du;
    expm_with_derivative(h, t, c, u, du);
    CHECK(max_abs_diff(u, expm_hermitian_skew(h, t)) < 1e-14);
    const double e = 1e-5;
    const Mat4 fd = (expm_taylor((h + e * c) * cplx(0.0, -t)) - expm_taylor((h - e * c) * cplx(0.0, -t))) * (0.5 / e);
    CHECK(max_abs_diff(du, fd) < 1e-8);
  }
  // Degenerate spectrum: the derivative of exp(-i t (I + e C)) is -i t C e^{-i t}.
  Mat4 u, du;
  const Mat4 c = random_hermitian<4>();
  expm_with_derivative(Mat4::identity(), 0.7, c, u, du);
  CHECK(max_abs_diff(du, c * (cplx(0.0, -0.7) * std::polar(1.0, -0.7))) < 1e-14);
}
