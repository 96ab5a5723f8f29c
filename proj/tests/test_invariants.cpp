#include <cmath>
#include <numbers>

#include "curvegate/errors.hpp"
#include "curvegate/invariants.hpp"
#include "curvegate/vec3.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace curvegate;
using namespace curvegate::testing;
using std::numbers::pi;

namespace {

// exp(i/2 (c1 XX + c2 YY + c3 ZZ)) via the Taylor oracle.
Mat4 canonical_gate(double c1, double c2, double c3) {
  const Mat4 h = c1 * pauli_product("XX") + c2 * pauli_product("YY") + c3 * pauli_product("ZZ");
  return expm_taylor(h * cplx(0.0, 0.5));
}

// Closed-form invariants of the canonical gate above.
MakhlinPair canonical_invariants(double c1, double c2, double c3) {
  const double cc = std::pow(std::cos(c1) * std::cos(c2) * std::cos(c3), 2);
  const double ss = std::pow(std::sin(c1) * std::sin(c2) * std::sin(c3), 2);
  const double s2 = std::sin(2 * c1) * std::sin(2 * c2) * std::sin(2 * c3);
  const double c2p = std::cos(2 * c1) * std::cos(2 * c2) * std::cos(2 * c3);
  return {cplx(cc - ss, 0.25 * s2), 4.0 * cc - 4.0 * ss - c2p};
}

void check_pair(const MakhlinPair& a, const MakhlinPair& b, double tol) {
  CHECK(std::abs(a.g1 - b.g1) < tol);
  CHECK(std::abs(a.g2 - b.g2) < tol);
}

}  // namespace

TEST_CASE("closed-form invariants of standard gates") {
  check_pair(makhlin(gates::identity()), {1.0, 3.0}, 1e-14);
  check_pair(makhlin(gates::cnot()), {0.0, 1.0}, 1e-14);
  check_pair(makhlin(gates::swap()), {-1.0, -3.0}, 1e-14);
  CHECK(makhlin_cost(gates::cnot()) == doctest::Approx(0.0));
  CHECK(makhlin_cost(gates::identity()) == doctest::Approx(5.0));
  CHECK(makhlin_cost(gates::swap()) == doctest::Approx(17.0));
}

TEST_CASE("invariants agree with the canonical-gate oracle") {
  check_pair(canonical_invariants(pi / 2, 0, 0), {0.0, 1.0}, 1e-15);
  check_pair(canonical_invariants(pi / 2, pi / 2, pi / 2), {-1.0, -3.0}, 1e-15);
  for (int trial = 0; trial < 50; ++trial) {
    const double c1 = uniform(-pi, pi), c2 = uniform(-pi, pi), c3 = uniform(-pi, pi);
    const Mat4 u = random_local() * canonical_gate(c1, c2, c3) * random_local();
    check_pair(makhlin(u), canonical_invariants(c1, c2, c3), 1e-10);
  }
}

TEST_CASE("local and global-phase invariance") {
  for (int trial = 0; trial < 200; ++trial) {
    const Mat4 u = random_unitary<4>();
    const auto ref = makhlin(u);
    check_pair(makhlin(random_local() * u * random_local()), ref, 1e-8);
    check_pair(makhlin(std::polar(1.0, uniform(-pi, pi)) * u), ref, 1e-8);
  }
}

TEST_CASE("first-order unitary matches predicted invariants") {
  for (int trial = 0; trial < 50; ++trial) {
    const double j = uniform(1e7, 2e8);
    const Vec3 r{uniform(-1e-8, 1e-8), uniform(-1e-8, 1e-8), uniform(-1e-8, 1e-8)};
    const Mat2 rs = r[0] * pauli('X') + r[1] * pauli('Y') + r[2] * pauli('Z');
    const Mat4 u = expm_taylor(kron(pauli('Z'), rs) * cplx(0.0, -0.25 * j));
    check_pair(makhlin(u), predicted_invariants(j, norm(r)), 1e-10);
  }
}

TEST_CASE("predicted invariants") {
  check_pair(predicted_invariants(1.0, 0.0), {1.0, 3.0}, 1e-15);
  check_pair(predicted_invariants(2.0, pi / 2), {0.0, 1.0}, 1e-15);
  check_pair(predicted_invariants(1.0, pi / 2), {0.5, 2.0}, 1e-15);
}

TEST_CASE("conditional rotation angle") {
  CHECK(conditional_rotation_angle({1.0, 3.0}).theta == doctest::Approx(0.0));
  CHECK(conditional_rotation_angle({0.0, 1.0}).theta == doctest::Approx(pi / 2));
  CHECK(conditional_rotation_angle({0.5, 2.0}).theta == doctest::Approx(pi / 4));
  CHECK(conditional_rotation_angle({0.5, 2.0}).residual < 1e-15);
  CHECK_THROWS_AS(conditional_rotation_angle({-1.0, -3.0}), InputError);
  CHECK_THROWS_AS(conditional_rotation_angle(makhlin(gates::swap())), InputError);
}

TEST_CASE("cost vanishes exactly on the CNOT class") {
  for (int trial = 0; trial < 20; ++trial) {
    const Mat4 u = random_local() * gates::cnot() * random_local();
    CHECK(makhlin_cost(u) < 1e-16);
    const auto m = makhlin(u);
    CHECK(std::abs(m.g1) < 1e-8);
    CHECK(std::abs(m.g2 - 1.0) < 1e-8);
  }
  CHECK(makhlin_cost(random_unitary<4>()) > 1e-6);
}

TEST_CASE("non-unitary input is rejected") {
  Mat4 u = gates::cnot();
  u(0, 0) = 1.1;
  CHECK_THROWS_AS(makhlin(u), InputError);
  CHECK_THROWS_AS(makhlin_cost(u), InputError);
}
