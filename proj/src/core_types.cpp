#include "modquad/core_types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace modquad {

bool all_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

RotationMatrix::RotationMatrix(const Eigen::Matrix3d& m) : m_(m) {
  if (!m.allFinite()) throw ValidationError("rotation matrix has non-finite entries");
  const double ortho = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (ortho > kTol.orthonormality) {
    std::ostringstream msg;
    msg << "rotation matrix is not orthonormal (max |R^T R - I| = " << ortho << ")";
    throw ValidationError(msg.str());
  }
  if (std::abs(m.determinant() - 1.0) > kTol.orthonormality) {
    throw ValidationError("rotation matrix is not proper (det != 1)");
  }
}

RotationMatrix RotationMatrix::operator*(const RotationMatrix& other) const {
  return RotationMatrix(m_ * other.m_, Unchecked{});
}

RotationMatrix RotationMatrix::transpose() const {
  return RotationMatrix(m_.transpose(), Unchecked{});
}

Vector6 Wrench::stacked() const {
  Vector6 w;
  w << force, torque;
  return w;
}

InputVector::InputVector(Eigen::VectorXd thrusts) : thrusts_(std::move(thrusts)) {
  if (thrusts_.size() == 0 || thrusts_.size() % 4 != 0) {
    throw ValidationError("input vector length must be a positive multiple of 4, got " +
                          std::to_string(thrusts_.size()));
  }
}

InputVector InputVector::zeros(Eigen::Index rotors) {
  return InputVector(Eigen::VectorXd::Zero(rotors));
}

Vec3 cross(const Vec3& a, const Vec3& b) { return a.cross(b); }

RotationMatrix rotation_about_axis(const Vec3& axis, double angle) {
  if (!all_finite(axis) || std::abs(axis.norm() - 1.0) > kTol.unit_norm) {
    throw ValidationError("rotation axis must be a unit vector");
  }
  if (!std::isfinite(angle)) throw ValidationError("rotation angle must be finite");

  const Vec3 n = axis.normalized();
  // R = I + sin(a) K + (1 - cos(a)) K^2 with K the cross-product matrix of n.
  Eigen::Matrix3d k;
  k << 0.0, -n.z(), n.y(),
       n.z(), 0.0, -n.x(),
       -n.y(), n.x(), 0.0;
  return RotationMatrix(Eigen::Matrix3d::Identity() + std::sin(angle) * k +
                        (1.0 - std::cos(angle)) * k * k);
}

}  // namespace modquad
