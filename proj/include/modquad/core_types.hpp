#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace modquad {

using Vec3 = Eigen::Vector3d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;

/// Numerical tolerances shared by every module. One record so tests can
/// reason about a single set of knobs.
struct Tolerances {
  double orthonormality = 1e-12;
  double geometric = 1e-9;
  double unit_norm = 1e-9;
  double redundancy = 1e-8;      // point-in-hull equality tolerance
  double lp_feasibility = 1e-9;  // primal residual accepted by the solver
  double wrench_boundary = 1e-9; // slack on lambda >= |w|
  double zero_wrench = 1e-12;
  double saturation = 1e-12;
  double pinv_rank = 1e-10;      // relative singular-value cutoff
};

inline constexpr Tolerances kTol{};

/// Raised when an argument violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a request would exceed a hard computational limit.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool all_finite(const Vec3& v);

/// Proper rotation in SO(3). Construction validates orthonormality and
/// determinant, so every instance satisfies the group invariants.
class RotationMatrix {
 public:
  RotationMatrix() : m_(Eigen::Matrix3d::Identity()) {}
  explicit RotationMatrix(const Eigen::Matrix3d& m);

  static RotationMatrix identity() { return RotationMatrix(); }

  const Eigen::Matrix3d& matrix() const { return m_; }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  RotationMatrix operator*(const RotationMatrix& other) const;
  RotationMatrix transpose() const;

 private:
  struct Unchecked {};
  RotationMatrix(const Eigen::Matrix3d& m, Unchecked) : m_(m) {}

  Eigen::Matrix3d m_;
};

struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();

  Wrench() = default;
  Wrench(const Vec3& f, const Vec3& t) : force(f), torque(t) {}
  explicit Wrench(const Vector6& w) : force(w.head<3>()), torque(w.tail<3>()) {}
  Wrench(double fx, double fy, double fz, double tx, double ty, double tz)
      : force(fx, fy, fz), torque(tx, ty, tz) {}

  Vector6 stacked() const;
  double norm() const { return stacked().norm(); }
  bool finite() const { return all_finite(force) && all_finite(torque); }
};

/// Per-rotor thrusts u = [f_1 ... f_4n], always a positive multiple of four.
class InputVector {
 public:
  explicit InputVector(Eigen::VectorXd thrusts);

  static InputVector zeros(Eigen::Index rotors);

  const Eigen::VectorXd& values() const { return thrusts_; }
  Eigen::Index size() const { return thrusts_.size(); }
  double operator[](Eigen::Index i) const { return thrusts_[i]; }

 private:
  Eigen::VectorXd thrusts_;
};

inline Vec3 e1() { return Vec3::UnitX(); }
inline Vec3 e2() { return Vec3::UnitY(); }
inline Vec3 e3() { return Vec3::UnitZ(); }

Vec3 cross(const Vec3& a, const Vec3& b);

/// Rodrigues rotation by `angle` radians about the unit vector `axis`.
/// Throws ValidationError when the axis is not unit length or the angle is
/// not finite.
RotationMatrix rotation_about_axis(const Vec3& axis, double angle);

}  // namespace modquad
