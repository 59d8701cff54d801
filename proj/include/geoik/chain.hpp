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

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "geoik/geom.hpp"

namespace geoik {

using JointConfig = std::vector<double>;

/// Revolute axis: unit direction and a point on the axis, both in the base frame at zero pose.
struct JointAxis {
  UnitVec3 h;
  Vec3 p = Vec3::Zero();
};

/// Serial chain of revolute joints.
///
/// `ee_offset().rotation` is the static end-effector rotation relative to the
/// last joint; `ee_offset().translation` is the displacement from the last
/// reference point to the end effector, expressed (like every displacement)
/// in base orientation at zero pose.
class KinematicChain {
 public:
  KinematicChain(std::vector<JointAxis> joints, Pose ee_offset = Pose::identity())
      : joints_(std::move(joints)), ee_(std::move(ee_offset)) {
    if (joints_.empty()) {
      throw Error(ErrorKind::DegenerateChain, "a chain needs at least one joint");
    }
    for (std::size_t j = 0; j + 1 < joints_.size(); ++j) {
      const JointAxis& a = joints_[j];
      const JointAxis& b = joints_[j + 1];
      if (directions_parallel(a.h, b.h)) {
        const Vec3 w = b.p - a.p;
        const double off_line = (w - a.h.vec() * a.h.dot(w)).norm();
        if (off_line <= 1e-9 * std::max(1.0, w.norm())) {
          throw Error(ErrorKind::DegenerateChain,
                      "joints " + std::to_string(j + 1) + " and " + std::to_string(j + 2) +
                          " share the same axis line");
        }
      }
    }
  }

  std::size_t dof() const noexcept { return joints_.size(); }
  const std::vector<JointAxis>& joints() const noexcept { return joints_; }
  const JointAxis& joint(std::size_t j) const { return joints_.at(j); }
  const Pose& ee_offset() const noexcept { return ee_; }

  /// p_{j,j+1} for 0-based j < dof-1.
  Vec3 displacement(std::size_t j) const { return joints_.at(j + 1).p - joints_.at(j).p; }
  /// End-effector position at zero pose.
  Vec3 ee_home_point() const { return joints_.back().p + ee_.translation; }

  /// Sum of the offset norms, at least 1. Scales length tolerances.
  double characteristic_length() const {
    double sum = ee_.translation.norm();
    for (std::size_t j = 0; j + 1 < joints_.size(); ++j) sum += displacement(j).norm();
    return std::max(1.0, sum);
  }

 private:
  std::vector<JointAxis> joints_;
  Pose ee_;
};

/// Forward kinematics: p_0EE = p_01 + sum_i R_0i p_{i,i+1} + R_0n p_nEE and R_0EE = R_0n R_nEE.
inline Pose fk(const KinematicChain& chain, std::span<const double> q) {
  if (q.size() != chain.dof()) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(chain.dof()) +
                                                  " joint values, got " + std::to_string(q.size()));
  }
  const auto& joints = chain.joints();
  Rot3 r = Rot3::Identity();
  Vec3 p = joints.front().p;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    r = r * rodrigues(joints[i].h, q[i]);
    const Vec3 d = (i + 1 < joints.size()) ? Vec3(joints[i + 1].p - joints[i].p)
                                           : chain.ee_offset().translation;
    p += r * d;
  }
  return {r * chain.ee_offset().rotation, p};
}

/// Swaps base and end effector.
///
/// Axes become h'_j = -h_{n-j+1} and displacements p'_{j,j+1} = -p_{n-j,n-j+1};
/// joint values carry over in reversed order. The inverted chain has identity
/// end-effector rotation, so with Q = reverse(q):
///   fk(invert_chain(c), Q) = [R_0n^T, -R_0n^T p_0EE]
/// where R_0n excludes the original static end-effector rotation.
inline KinematicChain invert_chain(const KinematicChain& chain) {
  const auto& joints = chain.joints();
  const std::size_t n = joints.size();
  const Vec3 ee_point = chain.ee_home_point();
  std::vector<JointAxis> inv;
  inv.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const JointAxis& src = joints[n - 1 - k];
    inv.push_back({-src.h, src.p - ee_point});
  }
  Pose ee;
  ee.translation = -joints.front().p;
  return KinematicChain(std::move(inv), ee);
}

/// Joint values of the original chain from values of its inverted chain (and back).
inline JointConfig reverse_config(std::span<const double> q) { return JointConfig(q.rbegin(), q.rend()); }

/// Freezes joint `j` (1-based) at `theta`, returning an (n-1)-joint chain with
/// identical forward kinematics. Everything distal to the joint is rotated
/// rigidly about the frozen axis.
inline KinematicChain lock_joint(const KinematicChain& chain, std::size_t j, double theta) {
  const std::size_t n = chain.dof();
  if (j < 1 || j > n) {
    throw Error(ErrorKind::IndexOutOfRange,
                "joint index " + std::to_string(j) + " outside 1.." + std::to_string(n));
  }
  if (n < 2) throw Error(ErrorKind::DegenerateChain, "cannot lock the only joint of a chain");
  const std::size_t idx = j - 1;
  const JointAxis& locked = chain.joint(idx);
  const Rot3 r = rodrigues(locked.h, theta);
  const Vec3 ee_point = chain.ee_home_point();

  std::vector<JointAxis> joints;
  joints.reserve(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == idx) continue;
    const JointAxis& a = chain.joint(k);
    if (k < idx) {
      joints.push_back(a);
    } else {
      joints.push_back({UnitVec3(r * a.h.vec()), locked.p + r * (a.p - locked.p)});
    }
  }
  Pose ee;
  ee.rotation = r * chain.ee_offset().rotation;
  ee.translation = locked.p + r * (ee_point - locked.p) - joints.back().p;
  return KinematicChain(std::move(joints), ee);
}

/// Re-inserts a frozen joint value at 1-based index `j`.
inline JointConfig insert_locked(std::span<const double> q, std::size_t j, double theta) {
  JointConfig out(q.begin(), q.end());
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(j - 1), theta);
  return out;
}

}  // namespace geoik
