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

// Class-specific IK decompositions and solution assembly.
//
// Notation in the comments: R_ij is the rotation produced by joints i+1..j,
// p_ij the zero-pose displacement between reference points i and j, and p16
// the position of reference point 6 relative to reference point 1. Every
// routine returns candidate joint vectors for the remodeled chain it is
// given; candidates are checked against the full pose afterwards, which is
// where extraneous branches (from norm or projection simplifications) die.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <span>
#include <vector>

#include "geoik/remodel.hpp"
#include "geoik/subproblems.hpp"

namespace geoik {

struct SolveOptions {
  double pos_tol = 1e-8;  // relative to the chain's characteristic length
  double rot_tol = 1e-8;  // rad
};

struct IKSolution {
  JointConfig q;
  bool exact = false;
  double pos_err = 0.0;
  double rot_err = 0.0;
};

struct IKSolutionSet {
  std::vector<IKSolution> solutions;
  KinematicClass class_used;
  std::size_t dof = 0;
  std::chrono::nanoseconds timing{0};

  bool has_exact() const {
    return std::any_of(solutions.begin(), solutions.end(), [](const IKSolution& s) { return s.exact; });
  }
};

using Triple = std::array<double, 3>;
using Candidates = std::vector<JointConfig>;

/// Largest per-joint angular difference (mod 2 pi).
inline double config_distance(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, angle_distance(a[i], b[i]));
  return m;
}

/// R_06 = R_0EE R_6EE^T.
inline Rot3 compute_r06(const Pose& target, const KinematicChain& chain) {
  return target.rotation * chain.ee_offset().rotation.transpose();
}

/// Wrist orientation: R(h4,t4) R(h5,t5) R(h6,t6) = r36.
///
/// t5 from SP4 on h4^T R(h5,t5) h6 = h4^T r36 h6, then t4 from SP1 on
/// R(h4,t4) R(h5,t5) h6 = r36 h6, t5 again from SP1 on the same equation, then
/// t6 from SP1 on a vector normal to h6.
inline std::vector<Triple> solve_spherical_orientation(const Rot3& r36, const UnitVec3& h4, const UnitVec3& h5,
                                                       const UnitVec3& h6) {
  if (directions_parallel(h4, h5) || directions_parallel(h5, h6)) {
    throw Error(ErrorKind::DegenerateWrist, "consecutive wrist axes are parallel");
  }
  std::vector<Triple> out;
  const Vec3 target6 = r36 * h6.vec();
  const UnitVec3 n6 = any_normal(h6);
  for (const auto& s5 : sp4(h4, h6, h5, h4.dot(target6))) {
    const double t4 = sp1(rodrigues(h5, s5.angles[0]) * h6.vec(), target6, h4)[0].angles[0];
    // Re-solve t5 with the full residual vector; SP4 alone only sees its cosine.
    const Rot3 r34 = rodrigues(h4, t4);
    const double t5 = sp1(h6.vec(), r34.transpose() * target6, h5)[0].angles[0];
    const Rot3 r35 = r34 * rodrigues(h5, t5);
    const double t6 = sp1(n6, r35.transpose() * r36 * n6.vec(), h6)[0].angles[0];
    out.push_back({t4, t5, t6});
  }
  return out;
}

namespace detail {

// Zero-pose quantities of a six-joint chain in 1-based notation:
// h[j] axis j, p[j] = p_{j,j+1}.
struct SixAxes {
  std::array<UnitVec3, 7> h;
  std::array<Vec3, 7> p;
};

inline SixAxes six_axes(const KinematicChain& c) {
  SixAxes a;
  for (std::size_t j = 1; j <= 6; ++j) a.h[j] = c.joint(j - 1).h;
  for (std::size_t j = 1; j <= 5; ++j) a.p[j] = c.displacement(j - 1);
  a.p[6] = c.ee_offset().translation;
  a.p[0] = c.joint(0).p;
  return a;
}

// Position of the last reference point relative to the first.
inline Vec3 last_point_offset(const Pose& target, const KinematicChain& c, const Rot3& r0n) {
  return target.translation - c.joint(0).p - r0n * c.ee_offset().translation;
}

}  // namespace detail

/// Spherical wrist, axes 2 and 3 intersect (p23 = 0).
/// SP3 on ||R_01^T p16 - p12|| = ||p34|| for t1, then SP2 on
/// R_12^T (R_01^T p16 - p12) = R_23 p34 for (t2, t3).
inline std::vector<Triple> solve_spherical_position_23intersect(const Vec3& p16, const KinematicChain& c) {
  const auto a = detail::six_axes(c);
  std::vector<Triple> out;
  for (const auto& s1 : sp3(p16, a.p[1], -a.h[1], a.p[3].norm())) {
    const double t1 = s1.angles[0];
    const Vec3 y = rodrigues(a.h[1], t1).transpose() * p16 - a.p[1];
    for (const auto& s23 : sp2(y, a.p[3], -a.h[2], a.h[3])) out.push_back({t1, s23.angles[0], s23.angles[1]});
  }
  return out;
}

/// Spherical wrist, axes 1 and 2 parallel (h1 = h2).
/// SP4 on h1^T R_23 p34 = h1^T (p16 - p12 - p23) for t3, SP3 on
/// ||R_01^T p16 - p12|| = ||p23 + R_23 p34|| for t1, SP1 for t2.
inline std::vector<Triple> solve_spherical_position_12parallel(const Vec3& p16, const KinematicChain& c) {
  const auto a = detail::six_axes(c);
  std::vector<Triple> out;
  const double d3 = a.h[1].dot(p16 - a.p[1] - a.p[2]);
  for (const auto& s3 : sp4(a.h[1], a.p[3], a.h[3], d3)) {
    const double t3 = s3.angles[0];
    const Vec3 w = a.p[2] + rodrigues(a.h[3], t3) * a.p[3];
    for (const auto& s1 : sp3(p16, a.p[1], -a.h[1], w.norm())) {
      const double t1 = s1.angles[0];
      const Vec3 y = rodrigues(a.h[1], t1).transpose() * p16 - a.p[1];
      const double t2 = sp1(w, y, a.h[2])[0].angles[0];
      out.push_back({t1, t2, t3});
    }
  }
  return out;
}

/// Spherical wrist, no further structure:
/// -p12 + R(h1,-t1) p16 = R(h2,t2) (p23 + R(h3,t3) p34), solved with SP5.
inline std::vector<Triple> solve_spherical_position_general(const Vec3& p16, const KinematicChain& c) {
  const auto a = detail::six_axes(c);
  std::vector<Triple> out;
  for (const auto& s : sp5(-a.p[1], p16, a.p[2], a.p[3], -a.h[1], a.h[2], a.h[3])) {
    out.push_back({s.angles[0], s.angles[1], s.angles[2]});
  }
  return out;
}

/// Full spherical-wrist decomposition: position triple, then wrist orientation.
inline Candidates solve_spherical_wrist(const Pose& target, const KinematicChain& c, ClassTag tag) {
  const auto a = detail::six_axes(c);
  const Rot3 r06 = compute_r06(target, c);
  const Vec3 p16 = detail::last_point_offset(target, c, r06);
  std::vector<Triple> pos;
  switch (tag) {
    case ClassTag::SphericalWrist_23Intersect: pos = solve_spherical_position_23intersect(p16, c); break;
    case ClassTag::SphericalWrist_12Parallel: pos = solve_spherical_position_12parallel(p16, c); break;
    default: pos = solve_spherical_position_general(p16, c); break;
  }
  Candidates out;
  for (const auto& t : pos) {
    const Rot3 r03 = rodrigues(a.h[1], t[0]) * rodrigues(a.h[2], t[1]) * rodrigues(a.h[3], t[2]);
    for (const auto& w : solve_spherical_orientation(r03.transpose() * r06, a.h[4], a.h[5], a.h[6])) {
      out.push_back({t[0], t[1], t[2], w[0], w[1], w[2]});
    }
  }
  return out;
}

/// Axes 1, 2, 3 parallel (h1 = h2 = h3 = h) and axes 5, 6 intersecting (p56 = 0).
///
///   t4   SP4  h^T R_34 p45 = h^T (p16 - p12 - p23 - p34)
///   t6   SP4  h5^T R_56 R_06^T h = h5^T R_34^T h
///   t03  SP4  h4^T R(h,-t03) R_06 R_56^T h5 = h4^T h5,  t03 = t1 + t2 + t3
///   t5   SP1  R_45 v = R_34^T R_03^T R_06 R_56^T v       (v normal to h5)
///   t2   SP3  ||R_12 p23 + p12|| = ||p16 - R_03 delta||, delta = p34 + R_34 p45
///   t1   SP1  R_01 (p12 + R_12 p23) = p16 - R_03 delta
///   t3   SP1  R_23 n = (R_01 R_12)^T R_03 n               (n normal to h3)
///
/// `normal5` overrides the choice of v; any unit vector normal to h5 works.
inline Candidates solve_three_parallel_123_56intersect(const Pose& target, const KinematicChain& c,
                                                       std::optional<UnitVec3> normal5 = std::nullopt) {
  const auto a = detail::six_axes(c);
  const UnitVec3& h = a.h[1];
  const Rot3 r06 = compute_r06(target, c);
  const Vec3 p16 = detail::last_point_offset(target, c, r06);
  const UnitVec3 v5 = normal5 ? *normal5 : any_normal(a.h[5]);
  const UnitVec3 n3 = any_normal(a.h[3]);
  Candidates out;
  const double d4 = h.dot(p16 - a.p[1] - a.p[2] - a.p[3]);
  for (const auto& s4 : sp4(h, a.p[4], a.h[4], d4)) {
    const double t4 = s4.angles[0];
    const Rot3 r34 = rodrigues(a.h[4], t4);
    const Vec3 delta = a.p[3] + r34 * a.p[4];
    for (const auto& s6 : sp4(a.h[5], r06.transpose() * h.vec(), a.h[6], a.h[5].dot(r34.transpose() * h.vec()))) {
      const double t6 = s6.angles[0];
      const Rot3 r56 = rodrigues(a.h[6], t6);
      const Vec3 y = r06 * r56.transpose() * a.h[5].vec();
      for (const auto& s03 : sp4(a.h[4], y, -h, a.h[4].dot(a.h[5]))) {
        const double t03 = s03.angles[0];
        const Rot3 r03 = rodrigues(h, t03);
        const Vec3 rhs5 = r34.transpose() * r03.transpose() * r06 * r56.transpose() * v5.vec();
        const double t5 = sp1(v5, rhs5, a.h[5])[0].angles[0];
        const Vec3 reach = p16 - r03 * delta;
        for (const auto& s2 : sp3(a.p[2], -a.p[1], a.h[2], reach.norm())) {
          const double t2 = s2.angles[0];
          const Rot3 r12 = rodrigues(a.h[2], t2);
          const double t1 = sp1(a.p[1] + r12 * a.p[2], reach, h)[0].angles[0];
          const Rot3 r02 = rodrigues(h, t1) * r12;
          const double t3 = sp1(n3, r02.transpose() * r03 * n3.vec(), a.h[3])[0].angles[0];
          out.push_back({t1, t2, t3, t4, t5, t6});
        }
      }
    }
  }
  return out;
}

/// Axes 2, 3, 4 parallel (h2 = h3 = h4 = h).
///
///   (t1, t5)  SP6  h^T R(h1,-t1) R_06 h6 - h^T R(h5,t5) h6 = 0
///                  h^T R(h1,-t1) p16 - h^T R(h5,t5) p56 = h^T (p12 + p23 + p34 + p45)
///   t6        SP1  R(h6,-t6) R_45^T h = R_06^T R_01 h
///   t234      SP1  R(h,t234) v = R_01^T R_06 R_56^T R_45^T v        (v normal to h)
///   t3        SP3  ||p23 + R_23 p34|| = ||w||,
///                  w = R_01^T p16 - p12 - R(h,t234) (p45 + R_45 p56)
///   t2        SP1  R_12 (p23 + R_23 p34) = w
///   t4        t234 - t2 - t3
inline Candidates solve_three_parallel_234(const Pose& target, const KinematicChain& c) {
  const auto a = detail::six_axes(c);
  const UnitVec3& h = a.h[2];
  const Rot3 r06 = compute_r06(target, c);
  const Vec3 p16 = detail::last_point_offset(target, c, r06);
  const UnitVec3 vh = any_normal(h);
  Candidates out;
  const double d2 = h.dot(a.p[1] + a.p[2] + a.p[3] + a.p[4]);
  const auto pairs = sp6(h, -a.h[1], a.h[5], r06 * a.h[6].vec(), -a.h[6].vec(), p16, -a.p[5], 0.0, d2);
  for (const auto& s15 : pairs) {
    const double t1 = s15.angles[0];
    const double t5 = s15.angles[1];
    const Rot3 r01 = rodrigues(a.h[1], t1);
    const Rot3 r45 = rodrigues(a.h[5], t5);
    const double t6 = sp1(r45.transpose() * h.vec(), r06.transpose() * r01 * h.vec(), -a.h[6])[0].angles[0];
    const Rot3 r56 = rodrigues(a.h[6], t6);
    const Vec3 rhs = r01.transpose() * r06 * r56.transpose() * r45.transpose() * vh.vec();
    const double t234 = sp1(vh, rhs, h)[0].angles[0];
    const Vec3 w = r01.transpose() * p16 - a.p[1] - rodrigues(h, t234) * (a.p[4] + r45 * a.p[5]);
    for (const auto& s3 : sp3(a.p[3], -a.p[2], a.h[3], w.norm())) {
      const double t3 = s3.angles[0];
      const double t2 = sp1(a.p[2] + rodrigues(a.h[3], t3) * a.p[3], w, h)[0].angles[0];
      out.push_back({t1, t2, t3, normalize_angle(t234 - t2 - t3), t5, t6});
    }
  }
  return out;
}

/// Three-joint chains: two position constraints plus one orientation
/// constraint, the remaining three checked by the caller.
///
/// Axes 1, 2 intersecting (p12 = 0): SP2 on R_01^T p13 = R_12 p23.
/// No intersection: SP3 on ||R_12 p23 + p12|| = ||p13|| for t2, SP1 for t1.
/// Either way t3 from SP1 on R_23 n = R_02^T R_03 n with n normal to h3.
/// Three concurrent axes reduce to the wrist orientation problem.
inline Candidates solve_3r_candidates(const Pose& target, const KinematicChain& c, ClassTag tag) {
  if (c.dof() != 3) throw Error(ErrorKind::DimensionMismatch, "3R routine needs a three-joint chain");
  const UnitVec3 h1 = c.joint(0).h;
  const UnitVec3 h2 = c.joint(1).h;
  const UnitVec3 h3 = c.joint(2).h;
  const Vec3 p12 = c.displacement(0);
  const Vec3 p23 = c.displacement(1);
  const Rot3 r03 = compute_r06(target, c);
  const Vec3 p13 = detail::last_point_offset(target, c, r03);
  const double len = c.characteristic_length();
  const UnitVec3 n3 = any_normal(h3);
  Candidates out;
  auto finish = [&](double t1, double t2) {
    const Rot3 r02 = rodrigues(h1, t1) * rodrigues(h2, t2);
    const double t3 = sp1(n3, r02.transpose() * r03 * n3.vec(), h3)[0].angles[0];
    out.push_back({t1, t2, t3});
  };
  if (tag == ClassTag::ThreeDof_12Intersect || tag == ClassTag::ThreeDof_23Intersect) {
    if (p23.norm() <= kIntersectTol * len) {
      for (const auto& t : solve_spherical_orientation(r03, h1, h2, h3)) out.push_back({t[0], t[1], t[2]});
      return out;
    }
    for (const auto& s : sp2(p13, p23, -h1, h2)) finish(s.angles[0], s.angles[1]);
  } else {
    if (p23.norm() <= kIntersectTol * len || p12.norm() <= kIntersectTol * len) {
      throw Error(ErrorKind::DegenerateChain, "3R chain without intersections has a zero offset");
    }
    for (const auto& s2 : sp3(p23, -p12, h2, p13.norm())) {
      const double t2 = s2.angles[0];
      const double t1 = sp1(p12 + rodrigues(h2, t2) * p23, p13, h1)[0].angles[0];
      finish(t1, t2);
    }
  }
  return out;
}

namespace detail {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// Position error scaled by 1/len stacked over the rotation error vector.
inline Vec6 scaled_pose_error(const KinematicChain& chain, const Pose& target, std::span<const double> q,
                              double len) {
  const Pose p = fk(chain, q);
  const Eigen::AngleAxisd aa(Rot3(target.rotation * p.rotation.transpose()));
  Vec6 e;
  e.head<3>() = (target.translation - p.translation) / len;
  e.tail<3>() = aa.angle() * aa.axis();
  return e;
}

// Spatial Jacobian of the end-effector point and orientation, from the
// current joint axes.
inline Eigen::MatrixXd pose_jacobian(const KinematicChain& chain, std::span<const double> q, double len) {
  const std::size_t n = chain.dof();
  Eigen::MatrixXd jac(6, static_cast<Eigen::Index>(n));
  Rot3 r = Rot3::Identity();
  Vec3 origin = chain.joint(0).p;
  std::vector<Vec3> axes(n), points(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) origin += r * chain.displacement(i - 1);
    axes[i] = r * chain.joint(i).h.vec();
    points[i] = origin;
    r = r * rodrigues(chain.joint(i).h, q[i]);
  }
  const Vec3 ee = origin + r * chain.ee_offset().translation;
  for (std::size_t i = 0; i < n; ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    jac.block<3, 1>(0, col) = axes[i].cross(ee - points[i]) / len;
    jac.block<3, 1>(3, col) = axes[i];
  }
  return jac;
}

}  // namespace detail

/// Damped Gauss-Newton on the full pose error, starting from `q`. Used to
/// polish candidates that land just outside the exactness tolerance (double
/// roots, gimbal-adjacent wrists) and to produce a least-squares answer
/// when a routine yields no candidate at all.
/// A `frozen` joint (0-based) keeps its value.
inline JointConfig refine_config(const KinematicChain& chain, const Pose& target, JointConfig q, int iters,
                                 std::optional<std::size_t> frozen = std::nullopt) {
  const double len = chain.characteristic_length();
  const auto n = static_cast<Eigen::Index>(chain.dof());
  detail::Vec6 e = detail::scaled_pose_error(chain, target, q, len);
  double lambda = 1e-9;
  for (int it = 0; it < iters && e.norm() > 1e-15; ++it) {
    Eigen::MatrixXd jac = detail::pose_jacobian(chain, q, len);
    if (frozen) jac.col(static_cast<Eigen::Index>(*frozen)).setZero();
    const Eigen::MatrixXd lhs = jac.transpose() * jac + lambda * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd dq = lhs.ldlt().solve(jac.transpose() * e);
    JointConfig trial = q;
    for (Eigen::Index i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] += dq(i);
    const detail::Vec6 et = detail::scaled_pose_error(chain, target, trial, len);
    if (et.allFinite() && et.norm() < e.norm()) {
      q = std::move(trial);
      e = et;
      lambda = std::max(1e-12, lambda * 0.1);
    } else {
      lambda *= 100.0;
      if (lambda > 1e6) break;
    }
  }
  for (double& x : q) x = normalize_angle(x);
  return q;
}

/// Candidates this close to the target are polished before the exactness test.
inline constexpr double kPolishRadius = 1e-4;

/// Evaluates candidates on `chain`, keeps those reproducing `target`.
///
/// Candidates within kPolishRadius are refined first. If none is exact, the
/// single closest candidate is returned flagged inexact.
/// Near-identical candidates (all joints within 1e-6 rad) collapse into one.
inline IKSolutionSet filter_candidates(const Candidates& candidates, const KinematicChain& chain, const Pose& target,
                                       const SolveOptions& opts = {},
                                       std::optional<std::size_t> frozen = std::nullopt) {
  const double len = chain.characteristic_length();
  std::vector<IKSolution> all;
  all.reserve(candidates.size());
  for (const auto& raw : candidates) {
    if (raw.size() != chain.dof()) continue;
    IKSolution s;
    s.q.resize(raw.size());
    bool finite = true;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      finite = finite && std::isfinite(raw[i]);
      s.q[i] = normalize_angle(raw[i]);
    }
    if (!finite) continue;
    auto measure = [&] {
      const Pose p = fk(chain, s.q);
      s.pos_err = (p.translation - target.translation).norm();
      s.rot_err = rotation_distance(p.rotation, target.rotation);
      s.exact = s.pos_err <= opts.pos_tol * len && s.rot_err <= opts.rot_tol;
    };
    measure();
    if (!s.exact && s.pos_err <= kPolishRadius * len && s.rot_err <= kPolishRadius) {
      const IKSolution before = s;
      s.q = refine_config(chain, target, s.q, 10, frozen);
      measure();
      if (s.pos_err / len + s.rot_err > before.pos_err / len + before.rot_err) s = before;
    }
    all.push_back(std::move(s));
  }
  auto score = [len](const IKSolution& s) { return s.pos_err / len + s.rot_err; };

  IKSolutionSet set;
  set.dof = chain.dof();
  const bool any_exact = std::any_of(all.begin(), all.end(), [](const IKSolution& s) { return s.exact; });
  if (any_exact) {
    for (auto& s : all) {
      if (!s.exact) continue;
      auto dup = std::find_if(set.solutions.begin(), set.solutions.end(),
                              [&](const IKSolution& o) { return config_distance(o.q, s.q) <= 1e-6; });
      if (dup == set.solutions.end()) {
        set.solutions.push_back(std::move(s));
      } else if (score(s) < score(*dup)) {
        *dup = std::move(s);
      }
    }
  } else if (!all.empty()) {
    set.solutions.push_back(*std::min_element(
        all.begin(), all.end(), [&](const IKSolution& x, const IKSolution& y) { return score(x) < score(y); }));
  }
  std::sort(set.solutions.begin(), set.solutions.end(),
            [](const IKSolution& x, const IKSolution& y) { return x.q < y.q; });
  return set;
}

/// Target for the inverted chain: [R_nEE R_D^T, -R_nEE R_D^T p_D].
inline Pose inverted_target(const Pose& target, const KinematicChain& original) {
  const Rot3 r = original.ee_offset().rotation * target.rotation.transpose();
  return {r, -r * target.translation};
}

/// Candidates in the plan's working chain ordering.
inline Candidates solve_candidates(const DecompositionPlan& plan, const Pose& working_target) {
  const KinematicChain& c = plan.remodeled;
  const ClassTag tag = plan.cls.tag;
  if (is_spherical_wrist(tag)) return solve_spherical_wrist(working_target, c, tag);
  if (tag == ClassTag::ThreeParallel_234) return solve_three_parallel_234(working_target, c);
  if (tag == ClassTag::ThreeParallel_123_56Intersect) return solve_three_parallel_123_56intersect(working_target, c);
  if (is_three_dof(tag)) return solve_3r_candidates(working_target, c, tag);
  throw Error(ErrorKind::UnsolvableClass, "no known decomposition for this chain");
}

/// All IK solutions of `plan` for `target`, in the input chain's joint order.
inline IKSolutionSet solve(const DecompositionPlan& plan, const Pose& target, const SolveOptions& opts = {}) {
  const auto start = std::chrono::steady_clock::now();
  if (!plan.cls.solvable()) throw Error(ErrorKind::UnsolvableClass, "no known decomposition for this chain");
  const Pose working = plan.cls.inverted ? inverted_target(target, plan.reduced) : target;
  Candidates raw = solve_candidates(plan, working);
  const std::size_t n = plan.remodeled.dof();
  Candidates mapped;
  mapped.reserve(raw.size());
  std::optional<std::size_t> frozen;
  if (plan.locked) frozen = plan.locked->index - 1;
  for (const auto& qw : raw) {
    JointConfig q(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t dst = plan.cls.inverted ? n - 1 - i : i;
      q[dst] = plan.signs[i] * qw[i];
    }
    if (plan.locked) q = insert_locked(q, plan.locked->index, plan.locked->theta);
    mapped.push_back(std::move(q));
  }
  if (mapped.empty()) {
    // No routine output (e.g. SP5 without real roots): least-squares from the zero pose.
    JointConfig q0(plan.input.dof(), 0.0);
    if (plan.locked) q0[plan.locked->index - 1] = plan.locked->theta;
    mapped.push_back(refine_config(plan.input, target, std::move(q0), 100, frozen));
  }
  IKSolutionSet set = filter_candidates(mapped, plan.input, target, opts, frozen);
  set.class_used = plan.cls;
  set.timing = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start);
  return set;
}

/// Scales both FK tolerances by the value of IK_TOL_OVERRIDE when set.
inline SolveOptions options_from_env() {
  SolveOptions o;
  if (const char* env = std::getenv("IK_TOL_OVERRIDE")) {
    char* end = nullptr;
    const double scale = std::strtod(env, &end);
    if (end != env && std::isfinite(scale) && scale > 0.0) {
      o.pos_tol *= scale;
      o.rot_tol *= scale;
    }
  }
  return o;
}

}  // namespace geoik
