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

// Test robots, random solvable chains, round-trip statistics and a small
// damped least-squares IK used as an independent reference.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "geoik/solver.hpp"

namespace geoik {

/// Standard Denavit-Hartenberg row: Rz(theta) Tz(d) Tx(a) Rx(alpha).
struct DhRow {
  double d = 0.0;
  double a = 0.0;
  double alpha = 0.0;
};

inline KinematicChain chain_from_dh(const std::vector<DhRow>& rows, const Pose& flange = Pose::identity()) {
  Pose t = Pose::identity();
  std::vector<JointAxis> joints;
  for (const DhRow& r : rows) {
    joints.push_back({UnitVec3(Vec3(t.rotation.col(2))), t.translation});
    t.translation += t.rotation * Vec3(r.a, 0.0, r.d);
    t.rotation = t.rotation * rodrigues(UnitVec3::unit_x(), r.alpha);
  }
  t = t * flange;
  return KinematicChain(std::move(joints), Pose{t.rotation, t.translation - joints.back().p});
}

/// Modified (proximal) DH row: Rx(alpha) Tx(a) Rz(theta) Tz(d).
inline KinematicChain chain_from_modified_dh(const std::vector<DhRow>& rows, const Pose& flange = Pose::identity()) {
  Pose t = Pose::identity();
  std::vector<JointAxis> joints;
  for (const DhRow& r : rows) {
    t.translation += t.rotation * Vec3(r.a, 0.0, 0.0);
    t.rotation = t.rotation * rodrigues(UnitVec3::unit_x(), r.alpha);
    joints.push_back({UnitVec3(Vec3(t.rotation.col(2))), t.translation});
    t.translation += t.rotation * Vec3(0.0, 0.0, r.d);
  }
  t = t * flange;
  return KinematicChain(std::move(joints), Pose{t.rotation, t.translation - joints.back().p});
}

/// UR5 published DH parameters: axes 2, 3, 4 parallel.
inline KinematicChain ur5_like() {
  const double h = kPi / 2;
  return chain_from_dh({{0.089159, 0.0, h},
                        {0.0, -0.425, 0.0},
                        {0.0, -0.39225, 0.0},
                        {0.10915, 0.0, h},
                        {0.09465, 0.0, -h},
                        {0.0823, 0.0, 0.0}});
}

namespace detail {

inline KinematicChain chain_from_lines(const std::vector<std::pair<Vec3, Vec3>>& lines, const Pose& ee) {
  std::vector<JointAxis> joints;
  for (const auto& [h, p] : lines) joints.push_back({UnitVec3(h), p});
  return KinematicChain(std::move(joints), ee);
}

}  // namespace detail

/// Puma-type arm: offset shoulder, axes 2 and 3 intersecting, spherical wrist.
inline KinematicChain puma_like() {
  const Vec3 c(0.5, 0.25, 1.0);
  return detail::chain_from_lines({{Vec3::UnitZ(), Vec3::Zero()},
                                   {Vec3::UnitY(), Vec3(0.1, 0.0, 0.6)},
                                   {Vec3::UnitX(), Vec3(0.1, 0.15, 0.6)},
                                   {Vec3::UnitZ(), c},
                                   {Vec3::UnitY(), c},
                                   {Vec3::UnitZ(), c}},
                                  Pose{Rot3::Identity(), Vec3(0.0, 0.0, 0.1)});
}

/// Heavy-duty arm with two parallel vertical leading axes and a spherical wrist.
inline KinematicChain irb6640_like() {
  const Vec3 c(1.2, 0.2, 0.9);
  return detail::chain_from_lines({{Vec3::UnitZ(), Vec3::Zero()},
                                   {Vec3::UnitZ(), Vec3(0.3, 0.0, 0.5)},
                                   {Vec3::UnitY(), Vec3(0.8, 0.0, 0.7)},
                                   {Vec3::UnitX(), c},
                                   {Vec3::UnitY(), c},
                                   {Vec3::UnitX(), c}},
                                  Pose{rodrigues(UnitVec3::unit_y(), kPi / 2), Vec3(0.15, 0.0, 0.0)});
}

/// Spherical wrist on an arm without further structure.
inline KinematicChain spherical_robot() {
  const Vec3 c(0.7, 0.3, 1.3);
  return detail::chain_from_lines({{Vec3::UnitZ(), Vec3::Zero()},
                                   {Vec3(0.3, 1.0, 0.2), Vec3(0.1, 0.05, 0.5)},
                                   {Vec3(1.0, 0.2, -0.3), Vec3(0.2, 0.4, 1.1)},
                                   {Vec3(0.9, 0.1, 0.2), c},
                                   {Vec3(0.1, 1.0, 0.3), c + Vec3(0.1, 1.0, 0.3) * 0.2},
                                   {Vec3(0.8, -0.2, 0.4), c}},
                                  Pose{rodrigues(UnitVec3(0.2, 0.5, 0.8), 0.7), Vec3(0.1, -0.05, 0.12)});
}

/// Axes 2, 3, 4 parallel; every other neighbour pair skew.
inline KinematicChain three_parallel_robot() {
  return detail::chain_from_lines({{Vec3::UnitZ(), Vec3::Zero()},
                                   {Vec3::UnitY(), Vec3(0.1, 0.0, 0.5)},
                                   {-Vec3::UnitY(), Vec3(0.6, 0.05, 0.6)},
                                   {Vec3::UnitY(), Vec3(1.0, -0.03, 0.55)},
                                   {Vec3(0.2, 0.1, 1.0), Vec3(1.1, 0.1, 0.5)},
                                   {Vec3(1.0, 0.3, 0.1), Vec3(1.2, 0.15, 0.4)}},
                                  Pose{Rot3::Identity(), Vec3(0.1, 0.0, 0.0)});
}

/// Seven-joint arm in the Panda layout with the last three axes concurrent.
inline KinematicChain panda_like_7r() {
  const double h = kPi / 2;
  return chain_from_modified_dh({{0.333, 0.0, 0.0},
                                 {0.0, 0.0, -h},
                                 {0.316, 0.0, h},
                                 {0.0, 0.0825, h},
                                 {0.384, -0.0825, -h},
                                 {0.0, 0.0, h},
                                 {0.0, 0.0, h}},
                                Pose{Rot3::Identity(), Vec3(0.0, 0.0, 0.107)});
}

struct NamedRobot {
  std::string name;
  KinematicChain chain;
};

inline std::vector<NamedRobot> named_test_robots() {
  return {{"ur5_like", ur5_like()},
          {"puma_like", puma_like()},
          {"irb6640_like", irb6640_like()},
          {"spherical", spherical_robot()},
          {"three_parallel", three_parallel_robot()}};
}

// ---------------------------------------------------------------------------
// Random chains

/// Independent stream for sub-task `task` of a run seeded with `master`.
inline std::mt19937_64 task_rng(std::uint64_t master, std::uint64_t task) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32)};
  return std::mt19937_64(seq);
}

inline double uniform_angle(std::mt19937_64& g) {
  // (-pi, pi]
  return -std::uniform_real_distribution<double>(-kPi, kPi)(g);
}

inline JointConfig random_config(std::mt19937_64& g, std::size_t n) {
  JointConfig q(n);
  for (double& x : q) x = uniform_angle(g);
  return q;
}

inline Vec3 random_point(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double x = u(g), y = u(g), z = u(g);
  return {x, y, z};
}

inline UnitVec3 random_direction(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  for (;;) {
    const double x = n(g), y = n(g), z = n(g);
    const Vec3 v(x, y, z);
    if (v.norm() > 1e-3) return UnitVec3(v);
  }
}

inline Rot3 random_rotation(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  const double w = n(g), x = n(g), y = n(g), z = n(g);
  Eigen::Quaterniond q(w, x, y, z);
  if (q.norm() < 1e-6) return Rot3::Identity();
  return q.normalized().toRotationMatrix();
}

/// Every class the solver handles, inverted variants included.
inline std::vector<KinematicClass> solvable_classes() {
  std::vector<KinematicClass> out;
  for (ClassTag t : {ClassTag::SphericalWrist_23Intersect, ClassTag::SphericalWrist_12Parallel,
                     ClassTag::SphericalWrist_General, ClassTag::ThreeParallel_234,
                     ClassTag::ThreeParallel_123_56Intersect}) {
    out.push_back({t, false});
    out.push_back({t, true});
  }
  out.push_back({ClassTag::ThreeDof_12Intersect, false});
  out.push_back({ClassTag::ThreeDof_23Intersect, true});
  out.push_back({ClassTag::ThreeDof_NoIntersect, false});
  return out;
}

struct RobotSample {
  KinematicChain chain;
  KinematicClass cls_expected;
  std::uint64_t seed = 0;
};

namespace detail {

// Minimum angle between non-parallel neighbours and minimum distance between
// non-intersecting neighbours accepted for random chains (unit scale).
inline constexpr double kMinAxisSine = 0.1;
inline constexpr double kMinOffset = 0.02;

// Shape of the non-inverted chain for a tag: which neighbour pairs (0-based)
// are parallel and which groups of joints share an intersection point.
struct ClassShape {
  std::size_t dof = 6;
  std::vector<std::size_t> parallel_pairs;
  std::vector<std::vector<std::size_t>> concurrent;
};

inline ClassShape class_shape(ClassTag tag) {
  switch (tag) {
    case ClassTag::SphericalWrist_23Intersect: return {6, {}, {{1, 2}, {3, 4, 5}}};
    case ClassTag::SphericalWrist_12Parallel: return {6, {0}, {{3, 4, 5}}};
    case ClassTag::SphericalWrist_General: return {6, {}, {{3, 4, 5}}};
    case ClassTag::ThreeParallel_234: return {6, {1, 2}, {}};
    case ClassTag::ThreeParallel_123_56Intersect: return {6, {0, 1}, {{4, 5}}};
    case ClassTag::ThreeDof_12Intersect: return {3, {}, {{0, 1}}};
    case ClassTag::ThreeDof_23Intersect: return {3, {}, {{1, 2}}};
    case ClassTag::ThreeDof_NoIntersect: return {3, {}, {}};
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "no random generator for this class");
}

inline KinematicChain scaled(const KinematicChain& c, double s) {
  std::vector<JointAxis> joints = c.joints();
  for (auto& j : joints) j.p *= s;
  Pose ee = c.ee_offset();
  ee.translation *= s;
  return KinematicChain(std::move(joints), ee);
}

inline KinematicChain draw_shape(const ClassShape& shape, std::mt19937_64& g) {
  std::uniform_real_distribution<double> along(-0.5, 0.5);
  std::vector<JointAxis> joints;
  for (std::size_t j = 0; j < shape.dof; ++j) joints.push_back({random_direction(g), random_point(g)});
  for (std::size_t j : shape.parallel_pairs) {
    const double s = std::bernoulli_distribution(0.5)(g) ? 1.0 : -1.0;
    joints[j + 1].h = UnitVec3(s * joints[j].h.vec());
  }
  for (const auto& group : shape.concurrent) {
    const Vec3 k = random_point(g);
    // Reference points are placed somewhere on each line, not at the
    // intersection itself, so remodeling has work to do.
    for (std::size_t j : group) joints[j].p = k + along(g) * joints[j].h.vec();
  }
  const Vec3 ee_point = random_point(g);
  const Pose ee{random_rotation(g), ee_point - joints.back().p};
  return KinematicChain(std::move(joints), ee);
}

inline bool well_conditioned(const KinematicChain& c) {
  const auto rel = detect_relations(c);
  for (std::size_t j = 0; j < rel.size(); ++j) {
    const JointAxis& a = c.joint(j);
    const JointAxis& b = c.joint(j + 1);
    if (rel[j].parallel()) {
      const Vec3 d = b.p - a.p;
      if ((d - d.dot(a.h.vec()) * a.h.vec()).norm() < kMinOffset) return false;
      continue;
    }
    if (a.h.cross(b.h).norm() < kMinAxisSine) return false;
    if (!rel[j].intersecting() && line_pair_closest(a.p, a.h, b.p, b.h).distance < kMinOffset) return false;
  }
  return true;
}

inline KinematicChain class_template(ClassTag tag) {
  switch (tag) {
    case ClassTag::SphericalWrist_23Intersect: return puma_like();
    case ClassTag::SphericalWrist_12Parallel: return irb6640_like();
    case ClassTag::SphericalWrist_General: return spherical_robot();
    case ClassTag::ThreeParallel_234: return three_parallel_robot();
    case ClassTag::ThreeParallel_123_56Intersect: {
      const Vec3 k(1.2, 0.3, 0.3);
      return chain_from_lines({{Vec3::UnitZ(), Vec3::Zero()},
                               {Vec3::UnitZ(), Vec3(0.4, 0.0, 0.1)},
                               {-Vec3::UnitZ(), Vec3(0.8, 0.1, 0.0)},
                               {Vec3(1.0, 0.2, 0.3), Vec3(1.0, 0.1, 0.2)},
                               {Vec3::UnitY(), k},
                               {Vec3(0.3, 0.1, 1.0), k}},
                              Pose{Rot3::Identity(), Vec3(0.1, 0.0, 0.1)});
    }
    case ClassTag::ThreeDof_12Intersect:
      return chain_from_lines({{Vec3::UnitZ(), Vec3::Zero()},
                               {Vec3::UnitY(), Vec3(0.0, 0.0, 0.3)},
                               {Vec3::UnitX(), Vec3(0.4, 0.1, 0.3)}},
                              Pose{Rot3::Identity(), Vec3(0.2, 0.0, 0.0)});
    case ClassTag::ThreeDof_23Intersect:
      return chain_from_lines({{Vec3::UnitZ(), Vec3::Zero()},
                               {Vec3::UnitY(), Vec3(0.3, 0.0, 0.3)},
                               {Vec3::UnitX(), Vec3(0.3, 0.0, 0.3)}},
                              Pose{Rot3::Identity(), Vec3(0.2, 0.1, 0.0)});
    case ClassTag::ThreeDof_NoIntersect:
      return chain_from_lines({{Vec3::UnitZ(), Vec3::Zero()},
                               {Vec3::UnitY(), Vec3(0.3, 0.0, 0.3)},
                               {Vec3::UnitX(), Vec3(0.6, 0.1, 0.5)}},
                              Pose{Rot3::Identity(), Vec3(0.2, 0.0, 0.0)});
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "no template for this class");
}

}  // namespace detail

/// Draws a chain that classifies as `cls`. Offsets are drawn in [-1, 1]^3 and
/// the chain is scaled to unit characteristic length. Draws that are
/// ill-conditioned or pick up extra structure are redrawn; after a bounded
/// number of attempts a fixed template of the class is returned.
inline RobotSample generate_random_solvable(std::uint64_t seed, KinematicClass cls) {
  if (!cls.solvable()) throw Error(ErrorKind::InvalidArgument, "cannot sample an unsolvable class");
  const detail::ClassShape shape = detail::class_shape(cls.tag);
  const bool invert = cls.inverted && shape.dof == 6;
  std::mt19937_64 g = task_rng(seed, 0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    try {
      KinematicChain c = detail::draw_shape(shape, g);
      if (invert) {
        const KinematicChain inv = invert_chain(c);
        c = KinematicChain(inv.joints(), Pose{random_rotation(g), inv.ee_offset().translation});
      }
      double len = 0.0;
      for (std::size_t j = 0; j + 1 < c.dof(); ++j) len += c.displacement(j).norm();
      len += c.ee_offset().translation.norm();
      c = detail::scaled(c, 1.0 / len);
      if (!detail::well_conditioned(c)) continue;
      if (classify(c).cls != cls) continue;
      return {std::move(c), cls, seed};
    } catch (const Error&) {
      continue;
    }
  }
  KinematicChain c = detail::class_template(cls.tag);
  if (invert) c = invert_chain(c);
  return {std::move(c), cls, seed};
}

// ---------------------------------------------------------------------------
// Round trips

struct BenchRow {
  std::string name;
  std::size_t dof = 0;
  KinematicClass cls;
  std::size_t n_poses = 0;
  std::size_t recovered = 0;
  double recovery_rate = 1.0;
  double derive_us = 0.0;
  double solve_p50_us = 0.0;
  double solve_p95_us = 0.0;
  double solve_p99_us = 0.0;
  double solve_max_us = 0.0;
  double pos_err_mean = 0.0;
  double pos_err_max = 0.0;
  double rot_err_mean = 0.0;
  double rot_err_max = 0.0;
  double length = 1.0;  // characteristic length of the chain
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

/// Thresholds for a round-trip row: full recovery and FK-exact solutions.
inline bool row_passes(const BenchRow& r, const SolveOptions& opts = {}) {
  return r.recovered == r.n_poses && r.pos_err_max <= opts.pos_tol * r.length && r.rot_err_max <= opts.rot_tol;
}

inline bool contains_config(const IKSolutionSet& set, std::span<const double> q, double tol = 1e-6,
                            bool exact_only = true) {
  return std::any_of(set.solutions.begin(), set.solutions.end(), [&](const IKSolution& s) {
    return (s.exact || !exact_only) && config_distance(s.q, q) <= tol;
  });
}

namespace detail {

inline double percentile(std::vector<double> v, double pct) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

inline double micros(std::chrono::nanoseconds ns) { return static_cast<double>(ns.count()) / 1000.0; }

}  // namespace detail

/// Median derivation time over `reps` runs, after 100 warm-up runs.
inline double median_derive_us(const KinematicChain& chain, std::optional<JointLock> lock = std::nullopt,
                               int reps = 101) {
  for (int i = 0; i < 100; ++i) (void)classify(chain, lock);
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) t.push_back(detail::micros(classify(chain, lock).derivation_time));
  return detail::percentile(t, 50.0);
}

/// Samples `n_poses` configurations, solves their FK poses with one plan and
/// records recovery, exact-solution errors and solve times. A locked joint
/// is held at its lock value in every sample.
inline BenchRow roundtrip(const KinematicChain& chain, std::size_t n_poses, std::uint64_t seed,
                          std::optional<JointLock> lock = std::nullopt, std::string name = {},
                          const SolveOptions& opts = {}) {
  BenchRow row;
  row.name = std::move(name);
  row.dof = chain.dof();
  row.n_poses = n_poses;
  row.length = chain.characteristic_length();
  row.derive_us = median_derive_us(chain, lock);
  const DecompositionPlan plan = classify(chain, lock);
  row.cls = plan.cls;
  if (n_poses == 0) return row;

  std::mt19937_64 g = task_rng(seed, 0);
  std::vector<JointConfig> qs;
  qs.reserve(n_poses);
  for (std::size_t i = 0; i < n_poses; ++i) {
    JointConfig q = random_config(g, chain.dof());
    if (lock) q[lock->index - 1] = normalize_angle(lock->theta);
    qs.push_back(std::move(q));
  }
  for (int i = 0; i < 100; ++i) (void)solve(plan, fk(chain, qs[static_cast<std::size_t>(i) % n_poses]), opts);

  std::vector<double> times;
  times.reserve(n_poses);
  double pos_sum = 0.0, rot_sum = 0.0;
  std::size_t n_exact = 0;
  for (const JointConfig& q : qs) {
    const IKSolutionSet set = solve(plan, fk(chain, q), opts);
    times.push_back(detail::micros(set.timing));
    if (contains_config(set, q)) ++row.recovered;
    for (const IKSolution& s : set.solutions) {
      if (!s.exact) continue;
      ++n_exact;
      pos_sum += s.pos_err;
      rot_sum += s.rot_err;
      row.pos_err_max = std::max(row.pos_err_max, s.pos_err);
      row.rot_err_max = std::max(row.rot_err_max, s.rot_err);
    }
  }
  row.recovery_rate = static_cast<double>(row.recovered) / static_cast<double>(n_poses);
  if (n_exact > 0) {
    row.pos_err_mean = pos_sum / static_cast<double>(n_exact);
    row.rot_err_mean = rot_sum / static_cast<double>(n_exact);
  }
  row.solve_p50_us = detail::percentile(times, 50.0);
  row.solve_p95_us = detail::percentile(times, 95.0);
  row.solve_p99_us = detail::percentile(times, 99.0);
  row.solve_max_us = detail::percentile(times, 100.0);
  return row;
}

/// One row per random robot: derive once, solve one pose from its own FK.
/// Classes cycle through `solvable_classes()`.
inline BenchReport bench_random(std::size_t count, std::uint64_t seed, const SolveOptions& opts = {}) {
  BenchReport report;
  const auto classes = solvable_classes();
  bool warmed = false;
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 g = task_rng(seed, i + 1);
    const std::uint64_t robot_seed = g();
    const KinematicClass cls = classes[i % classes.size()];
    const RobotSample sample = generate_random_solvable(robot_seed, cls);
    const JointConfig q = random_config(g, sample.chain.dof());
    const Pose target = fk(sample.chain, q);
    if (!warmed) {
      for (int w = 0; w < 100; ++w) (void)solve(classify(sample.chain), target, opts);
      warmed = true;
    }
    BenchRow row;
    row.name = "random_" + std::to_string(i);
    row.dof = sample.chain.dof();
    row.n_poses = 1;
    row.length = sample.chain.characteristic_length();
    const DecompositionPlan plan = classify(sample.chain);
    row.cls = plan.cls;
    row.derive_us = detail::micros(plan.derivation_time);
    if (plan.cls.solvable()) {
      const IKSolutionSet set = solve(plan, target, opts);
      row.solve_p50_us = row.solve_p95_us = row.solve_p99_us = row.solve_max_us = detail::micros(set.timing);
      row.recovered = contains_config(set, q) ? 1 : 0;
      for (const IKSolution& s : set.solutions) {
        if (!s.exact) continue;
        row.pos_err_max = std::max(row.pos_err_max, s.pos_err);
        row.rot_err_max = std::max(row.rot_err_max, s.rot_err);
      }
      row.pos_err_mean = row.pos_err_max;
      row.rot_err_mean = row.rot_err_max;
    }
    row.recovery_rate = static_cast<double>(row.recovered);
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Numeric reference

struct NumericResult {
  JointConfig q;
  bool converged = false;
  int iterations = 0;
  double error = 0.0;
};

namespace detail {

using Vec6 = Eigen::Matrix<double, 6, 1>;

inline Vec6 pose_error(const KinematicChain& chain, const Pose& target, std::span<const double> q) {
  const Pose p = fk(chain, q);
  const Eigen::AngleAxisd aa(Rot3(target.rotation * p.rotation.transpose()));
  Vec6 e;
  e.head<3>() = target.translation - p.translation;
  e.tail<3>() = aa.angle() * aa.axis();
  return e;
}

}  // namespace detail

/// Damped least squares on the 6D pose error with a central-difference
/// Jacobian. The damping starts at 1e-3, shrinks tenfold after every step
/// that lowers the error and grows tenfold otherwise. Converged iff the
/// final error norm is at most 1e-6.
inline NumericResult numeric_ik_baseline(const KinematicChain& chain, const Pose& target, const JointConfig& q0,
                                         int max_iters = 30) {
  if (max_iters < 1) throw Error(ErrorKind::InvalidArgument, "max_iters must be at least 1");
  if (q0.size() != chain.dof()) throw Error(ErrorKind::DimensionMismatch, "q0 size does not match the chain");
  const std::size_t n = chain.dof();
  constexpr double kStep = 1e-7;
  double damping = 1e-3;
  NumericResult r;
  r.q = q0;
  detail::Vec6 e = detail::pose_error(chain, target, r.q);
  for (int it = 1; it <= max_iters; ++it) {
    r.iterations = it;
    if (e.norm() < 1e-12) break;
    Eigen::MatrixXd jac(6, n);
    for (std::size_t i = 0; i < n; ++i) {
      JointConfig qp = r.q, qm = r.q;
      qp[i] += kStep;
      qm[i] -= kStep;
      jac.col(static_cast<Eigen::Index>(i)) =
          (detail::pose_error(chain, target, qp) - detail::pose_error(chain, target, qm)) / (2.0 * kStep);
    }
    const Eigen::MatrixXd lhs = jac.transpose() * jac + damping * Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd dq = lhs.ldlt().solve(-jac.transpose() * e);
    JointConfig trial = r.q;
    for (std::size_t i = 0; i < n; ++i) trial[i] = normalize_angle(trial[i] + dq(static_cast<Eigen::Index>(i)));
    const detail::Vec6 et = detail::pose_error(chain, target, trial);
    if (et.norm() < e.norm()) {
      r.q = std::move(trial);
      e = et;
      damping = std::max(1e-12, damping * 0.1);
    } else {
      damping = std::min(1e6, damping * 10.0);
    }
  }
  r.error = e.norm();
  r.converged = r.error <= 1e-6;
  return r;
}

}  // namespace geoik
