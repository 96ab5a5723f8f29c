#include "curvegate/invariants.hpp"

#include <cmath>
#include <sstream>

#include "curvegate/errors.hpp"

namespace curvegate {

const Mat4& magic_basis() {
  static const Mat4 q = [] {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, r);
    Mat4 m;
    m(0, 0) = r;
    m(0, 3) = i;
    m(1, 1) = i;
    m(1, 2) = r;
    m(2, 1) = i;
    m(2, 2) = -r;
    m(3, 0) = r;
    m(3, 3) = -i;
    return m;
  }();
  return q;
}

MakhlinPair makhlin(const Mat4& u) {
  const double err = unitarity_error(u);
  if (!(err <= 1e-8)) {
    std::ostringstream msg;
    msg << "makhlin: input is not unitary, ||U^dagger U - I||_F = " << err;
    throw InputError(msg.str());
  }
  const Mat4& q = magic_basis();
  const Mat4 ub = adjoint(q) * u * q;
  const Mat4 m = transpose(ub) * ub;
  const cplx d = det(u);
  const cplx t1 = trace(m);
  const cplx t2 = trace(m * m);
  const cplx g2 = (t1 * t1 - t2) / (4.0 * d);
  if (std::abs(g2.imag()) > 1e-8) {
    std::ostringstream msg;
    msg << "makhlin: G2 has imaginary part " << g2.imag();
    throw InputError(msg.str());
  }
  return {t1 * t1 / (16.0 * d), g2.real()};
}

MakhlinPair predicted_invariants(double j, double r_final) {
  const double x = j * r_final;
  const double c = std::cos(0.5 * x);
  return {c * c, 2.0 + std::cos(x)};
}

RotationAngle conditional_rotation_angle(const MakhlinPair& pair) {
  const double g1 = std::clamp(pair.g1.real(), 0.0, 1.0);
  RotationAngle out;
  out.theta = std::acos(std::sqrt(g1));
  out.residual = std::abs(pair.g2 - 2.0 - std::cos(2.0 * out.theta));
  const double g1_resid = std::abs(pair.g1 - cplx(std::cos(out.theta) * std::cos(out.theta)));
  if (out.residual > 0.05 || g1_resid > 0.05) {
    std::ostringstream msg;
    msg << "gate outside conditional-rotation family (G1 residual " << g1_resid << ", G2 residual " << out.residual
        << ")";
    throw InputError(msg.str());
  }
  return out;
}

double makhlin_cost(const MakhlinPair& pair) { return std::norm(pair.g1) + (pair.g2 - 1.0) * (pair.g2 - 1.0); }

double makhlin_cost(const Mat4& u) { return makhlin_cost(makhlin(u)); }

}  // namespace curvegate
