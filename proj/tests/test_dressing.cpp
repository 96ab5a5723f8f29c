#include <cmath>
#include <numbers>

#include "curvegate/dressing.hpp"
#include "curvegate/invariants.hpp"
#include "curvegate/vec3.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace curvegate;
using namespace curvegate::testing;
using std::numbers::pi;

TEST_CASE("gate fidelity values") {
  CHECK(gate_fidelity(gates::cnot(), gates::cnot()) == doctest::Approx(1.0));
  CHECK(gate_fidelity(cplx(0.0, 1.0) * gates::cnot(), gates::cnot()) == doctest::Approx(1.0));
  // Tr(CNOT^dagger (X (x) I)) = 0
  CHECK(gate_fidelity(kron(pauli('X'), Mat2::identity()), gates::cnot()) == doctest::Approx(0.2));
  for (int trial = 0; trial < 20; ++trial) {
    const double f = gate_fidelity(random_unitary<4>(), gates::cnot());
    CHECK(f >= 0.2 - 1e-15);
    CHECK(f <= 1.0 + 1e-15);
  }
}

TEST_CASE("zyz parametrization") {
  const Mat2 u = curvegate::su2_zyz(0.3, -1.1, 2.0);
  CHECK(unitarity_error(u) < 1e-15);
  CHECK(std::abs(det(u) - 1.0) < 1e-15);
  const Mat2 rz = expm_taylor(pauli('Z') * cplx(0.0, -0.15));
  const Mat2 ry = expm_taylor(pauli('Y') * cplx(0.0, 0.55));
  const Mat2 rz2 = expm_taylor(pauli('Z') * cplx(0.0, -1.0));
  CHECK(max_abs_diff(u, rz * ry * rz2) < 1e-14);
}

TEST_CASE("dressing recovers hidden local unitaries") {
  CHECK(optimize_dressing(gates::cnot(), gates::cnot(), 1).fidelity == doctest::Approx(1.0).epsilon(1e-14));
  for (int trial = 0; trial < 5; ++trial) {
    const Mat4 u = random_local() * gates::cnot() * random_local();
    const auto d = optimize_dressing(u, gates::cnot());
    CHECK(d.fidelity > 1.0 - 1e-9);
    CHECK(gate_fidelity(d.k1() * u * d.k2(), gates::cnot()) == doctest::Approx(d.fidelity).epsilon(1e-12));
  }
}

TEST_CASE("zero cost implies unit dressed fidelity") {
  // First-order unitary with J|R| = pi along a random direction.
  const Vec3 axis = normalized(Vec3{gaussian(), gaussian(), gaussian()});
  const Mat2 rs = axis[0] * pauli('X') + axis[1] * pauli('Y') + axis[2] * pauli('Z');
  const Mat4 u = expm_taylor(kron(pauli('Z'), rs) * cplx(0.0, -pi / 4));
  REQUIRE(makhlin_cost(u) < 1e-20);
  CHECK(optimize_dressing(u, gates::cnot(), 50).fidelity > 1.0 - 1e-6);
}

TEST_CASE("dressed fidelity is locally invariant") {
  const Mat4 u = random_unitary<4>();
  const double f0 = optimize_dressing(u, gates::cnot()).fidelity;
  const double f1 = optimize_dressing(random_local() * u * random_local(), gates::cnot()).fidelity;
  CHECK(f0 == doctest::Approx(f1).epsilon(1e-6));
}

TEST_CASE("more restarts never lower the result") {
  const Mat4 u = random_unitary<4>();
  double prev = 0.0;
  for (int r : {1, 2, 4, 8}) {
    const double f = optimize_dressing(u, gates::cnot(), r, 7).fidelity;
    CHECK(f >= prev);
    prev = f;
  }
}

TEST_CASE("serial and parallel dressing agree exactly") {
  const Mat4 u = random_unitary<4>();
  const auto a = optimize_dressing(u, gates::cnot(), 8, 3, Exec::serial);
  const auto b = optimize_dressing(u, gates::cnot(), 8, 3, Exec::parallel);
  CHECK(a.fidelity == b.fidelity);
  CHECK(a.k1_angles == b.k1_angles);
  CHECK(a.k2_angles == b.k2_angles);
}

TEST_CASE("detuning sweep picks the best carrier") {
  // Synthetic propagator: CNOT-class away from a single good carrier.
  const auto d = default_device();
  const Mat4 off = expm_taylor(pauli_product("ZZ") * cplx(0.0, -0.6));
  const Propagator prop = [&](const DeviceParams& p) {
    return *p.drive_omega == 3.0 ? gates::cnot() : off;
  };
  const auto s = sweep_detuning(d, prop, {1.0, 2.0, 3.0, 4.0}, gates::cnot(), 3);
  REQUIRE(s.points.size() == 4);
  CHECK(s.best == 2);
  CHECK(s.best_point().carrier == 3.0);
  CHECK(s.best_point().dressing.fidelity == doctest::Approx(1.0));
  CHECK(s.points[0].dressing.fidelity < 0.99);
}
