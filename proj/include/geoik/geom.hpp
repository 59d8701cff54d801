// Copyright 2026 The geoik Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small 3D geometry kernel on top of Eigen: unit vectors, Rodrigues rotations,
// rigid poses, closest points between lines and angle wrapping.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "geoik/error.hpp"

namespace geoik {

using Vec3 = Eigen::Vector3d;
/// Rotation matrix; orthonormal with det +1 wherever the library produces one.
using Rot3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tolerance on 1 - |d1.d2| below which two directions count as parallel.
inline constexpr double kParallelTol = 1e-8;

/// A vector of unit length. Construction normalizes and rejects near-zero input.
class UnitVec3 {
 public:
  UnitVec3() : v_(Vec3::UnitZ()) {}
  // Implicit on purpose so that call sites can pass Vec3 expressions that are
  // already unit up to rounding.
  UnitVec3(const Vec3& v) : v_(normalize_or_throw(v)) {}  // NOLINT
  UnitVec3(double x, double y, double z) : UnitVec3(Vec3(x, y, z)) {}

  static UnitVec3 unit_x() { return UnitVec3(Vec3::UnitX()); }
  static UnitVec3 unit_y() { return UnitVec3(Vec3::UnitY()); }
  static UnitVec3 unit_z() { return UnitVec3(Vec3::UnitZ()); }

  const Vec3& vec() const noexcept { return v_; }
  operator const Vec3&() const noexcept { return v_; }  // NOLINT
  double operator[](int i) const { return v_[i]; }
  double dot(const Vec3& o) const { return v_.dot(o); }
  Vec3 cross(const Vec3& o) const { return v_.cross(o); }
  UnitVec3 operator-() const { return UnitVec3(Tag{}, -v_); }

 private:
  struct Tag {};
  UnitVec3(Tag, const Vec3& v) : v_(v) {}

  static Vec3 normalize_or_throw(const Vec3& v) {
    const double n = v.norm();
    if (!(n > 1e-9) || !std::isfinite(n)) {
      throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero or non-finite vector");
    }
    return v / n;
  }

  Vec3 v_;
};

/// Rigid transform: x -> rotation * x + translation.
struct Pose {
  Rot3 rotation = Rot3::Identity();
  Vec3 translation = Vec3::Zero();

  static Pose identity() { return {}; }

  Pose operator*(const Pose& o) const {
    return {rotation * o.rotation, rotation * o.translation + translation};
  }
  Pose inverse() const {
    const Rot3 rt = rotation.transpose();
    return {rt, -rt * translation};
  }
};

/// Wraps to (-pi, pi].
inline double normalize_angle(double theta) {
  double r = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// Smallest absolute difference between two angles, in [0, pi].
inline double angle_distance(double a, double b) { return std::abs(normalize_angle(a - b)); }

inline Rot3 skew(const Vec3& v) {
  Rot3 k;
  k << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return k;
}

/// R(h, theta) = I + sin(theta) [h] + (1 - cos(theta)) [h]^2.
inline Rot3 rodrigues(const UnitVec3& h, double theta) {
  const Rot3 k = skew(h.vec());
  return Rot3::Identity() + std::sin(theta) * k + (1.0 - std::cos(theta)) * (k * k);
}

/// Geodesic distance on SO(3) between two rotations, in [0, pi].
inline double rotation_distance(const Rot3& a, const Rot3& b) {
  const Rot3 d = a.transpose() * b;
  const Vec3 axis(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  return std::atan2(0.5 * axis.norm(), 0.5 * (d.trace() - 1.0));
}

/// Unit vector normal to h: h crossed with the coordinate axis least aligned with it.
inline UnitVec3 any_normal(const Vec3& h) {
  const Vec3 a = h.cwiseAbs();
  Vec3 e = Vec3::UnitX();
  if (a.y() <= a.x() && a.y() <= a.z()) {
    e = Vec3::UnitY();
  } else if (a.z() <= a.x() && a.z() <= a.y()) {
    e = Vec3::UnitZ();
  }
  return UnitVec3(h.cross(e));
}

inline bool directions_parallel(const Vec3& d1, const Vec3& d2, double tol = kParallelTol) {
  return 1.0 - std::abs(d1.dot(d2)) < tol;
}

struct LineClosestPoints {
  Vec3 on_first;
  Vec3 on_second;
  double distance;

  Vec3 midpoint() const { return 0.5 * (on_first + on_second); }
};

/// Closest points between the lines p1 + t d1 and p2 + s d2.
inline LineClosestPoints line_pair_closest(const Vec3& p1, const UnitVec3& d1, const Vec3& p2,
                                           const UnitVec3& d2) {
  const double b = d1.dot(d2);
  if (1.0 - std::abs(b) < kParallelTol) {
    throw Error(ErrorKind::ParallelLines, "lines are parallel, closest points not unique");
  }
  const Vec3 w = p1 - p2;
  const double d = d1.dot(w);
  const double e = d2.dot(w);
  const double denom = 1.0 - b * b;
  const double t = (b * e - d) / denom;
  const double s = (e - b * d) / denom;
  LineClosestPoints out;
  out.on_first = p1 + t * d1.vec();
  out.on_second = p2 + s * d2.vec();
  out.distance = (out.on_first - out.on_second).norm();
  return out;
}

/// Projects a near-rotation onto SO(3) (polar decomposition via SVD).
inline Rot3 orthonormalize(const Rot3& m) {
  Eigen::JacobiSVD<Rot3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Rot3 u = svd.matrixU();
  const Rot3 v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

inline bool is_rotation(const Rot3& m, double tol = 1e-9) {
  return (m.transpose() * m - Rot3::Identity()).norm() <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

}  // namespace geoik
