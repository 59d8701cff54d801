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

// Axis-relation detection, kinematic remodeling and classification.
//
// Remodeling moves the reference points of consecutive intersecting axes into
// their intersection point (zeroing the displacement between them) and makes
// parallel axes share one direction. Neither step changes the forward
// kinematics; flipped axes carry a -1 sign on their joint value.

#pragma once

#include <array>
#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "geoik/chain.hpp"

namespace geoik {

/// Intersection tolerance relative to the chain's characteristic length.
inline constexpr double kIntersectTol = 1e-8;

enum class RelationKind { Parallel, Antiparallel, Intersecting, Skew };

struct AxisRelation {
  std::size_t first = 0;  // 0-based index j of the pair (j, j+1)
  RelationKind kind = RelationKind::Skew;
  std::optional<Vec3> intersection;

  bool parallel() const { return kind == RelationKind::Parallel || kind == RelationKind::Antiparallel; }
  bool intersecting() const { return kind == RelationKind::Intersecting; }
};

enum class ClassTag {
  SphericalWrist_23Intersect,
  SphericalWrist_12Parallel,
  SphericalWrist_General,
  ThreeParallel_234,
  ThreeParallel_123_56Intersect,
  ThreeDof_12Intersect,
  ThreeDof_23Intersect,
  ThreeDof_NoIntersect,
  Unsolvable,
};

inline const char* to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::SphericalWrist_23Intersect: return "SphericalWrist_23Intersect";
    case ClassTag::SphericalWrist_12Parallel: return "SphericalWrist_12Parallel";
    case ClassTag::SphericalWrist_General: return "SphericalWrist_General";
    case ClassTag::ThreeParallel_234: return "ThreeParallel_234";
    case ClassTag::ThreeParallel_123_56Intersect: return "ThreeParallel_123_56Intersect";
    case ClassTag::ThreeDof_12Intersect: return "ThreeDof_12Intersect";
    case ClassTag::ThreeDof_23Intersect: return "ThreeDof_23Intersect";
    case ClassTag::ThreeDof_NoIntersect: return "ThreeDof_NoIntersect";
    case ClassTag::Unsolvable: return "Unsolvable";
  }
  return "Unknown";
}

inline std::optional<ClassTag> class_tag_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(ClassTag::Unsolvable); ++i) {
    const auto tag = static_cast<ClassTag>(i);
    if (s == to_string(tag)) return tag;
  }
  return std::nullopt;
}

inline bool is_spherical_wrist(ClassTag tag) {
  return tag == ClassTag::SphericalWrist_23Intersect || tag == ClassTag::SphericalWrist_12Parallel ||
         tag == ClassTag::SphericalWrist_General;
}

inline bool is_three_dof(ClassTag tag) {
  return tag == ClassTag::ThreeDof_12Intersect || tag == ClassTag::ThreeDof_23Intersect ||
         tag == ClassTag::ThreeDof_NoIntersect;
}

struct KinematicClass {
  ClassTag tag = ClassTag::Unsolvable;
  bool inverted = false;  // matched on the inverted chain

  bool solvable() const { return tag != ClassTag::Unsolvable; }
  bool operator==(const KinematicClass&) const = default;
};

/// Joint frozen before classification; `index` is 1-based.
struct JointLock {
  std::size_t index = 0;
  double theta = 0.0;
};

/// Product of the one-time derivation, reusable across solve calls.
struct DecompositionPlan {
  KinematicClass cls;
  KinematicChain input;       // chain as given
  KinematicChain reduced;     // input with the lock applied
  KinematicChain remodeled;   // chain the class routine works on; inverted when cls.inverted
  std::vector<int> signs;     // per joint of `remodeled`: reduced value = sign * remodeled value
  std::optional<JointLock> locked;
  std::chrono::nanoseconds derivation_time{0};
};

/// One relation per consecutive axis pair. Parallel wins over intersecting.
inline std::vector<AxisRelation> detect_relations(const KinematicChain& chain) {
  const auto& joints = chain.joints();
  const double tol = kIntersectTol * chain.characteristic_length();
  std::vector<AxisRelation> out;
  if (joints.size() < 2) return out;
  out.reserve(joints.size() - 1);
  for (std::size_t j = 0; j + 1 < joints.size(); ++j) {
    AxisRelation rel;
    rel.first = j;
    const JointAxis& a = joints[j];
    const JointAxis& b = joints[j + 1];
    const double dot = a.h.dot(b.h);
    if (1.0 - std::abs(dot) < kParallelTol) {
      rel.kind = dot > 0.0 ? RelationKind::Parallel : RelationKind::Antiparallel;
    } else {
      const LineClosestPoints cp = line_pair_closest(a.p, a.h, b.p, b.h);
      if (cp.distance <= tol) {
        rel.kind = RelationKind::Intersecting;
        rel.intersection = cp.midpoint();
      }
    }
    out.push_back(rel);
  }
  return out;
}

/// Moves reference points of intersecting pairs into their intersection point
/// and aligns parallel directions.
///
/// Pairs listed in `priority` (0-based first index) are shifted first; the
/// remaining intersecting pairs follow left to right. A pair is skipped when
/// one of its joints was already moved to a different point. When `signs` is
/// given it receives the per-joint direction flips.
inline KinematicChain remodel_chain(const KinematicChain& chain, const std::vector<AxisRelation>& relations,
                                    std::span<const std::size_t> priority = {},
                                    std::vector<int>* signs = nullptr) {
  const std::size_t n = chain.dof();
  const double tol = kIntersectTol * chain.characteristic_length();
  std::vector<JointAxis> joints = chain.joints();
  std::vector<std::optional<Vec3>> pinned(n);

  auto shift = [&](std::size_t j) {
    if (j >= relations.size() || !relations[j].intersecting()) return;
    const Vec3 k = *relations[j].intersection;
    Vec3 target = k;
    if (pinned[j]) {
      if ((*pinned[j] - k).norm() > tol) return;
      target = *pinned[j];
    }
    if (pinned[j + 1]) {
      if ((*pinned[j + 1] - target).norm() > tol) return;
      target = *pinned[j + 1];
    }
    joints[j].p = target;
    joints[j + 1].p = target;
    pinned[j] = target;
    pinned[j + 1] = target;
  };
  for (std::size_t j : priority) shift(j);
  for (std::size_t j = 0; j < relations.size(); ++j) shift(j);

  std::vector<int> flip(n, 1);
  for (std::size_t j = 0; j < relations.size(); ++j) {
    if (!relations[j].parallel()) continue;
    const Vec3 original = chain.joint(j + 1).h.vec();
    joints[j + 1].h = joints[j].h;
    flip[j + 1] = joints[j].h.dot(original) > 0.0 ? 1 : -1;
  }
  if (signs) *signs = std::move(flip);

  Pose ee = chain.ee_offset();
  ee.translation = chain.ee_home_point() - joints.back().p;
  return KinematicChain(std::move(joints), ee);
}

namespace detail {

struct ClassMatch {
  ClassTag tag;
  std::vector<std::size_t> priority;
};

// Structure tests on one orientation of a 6R chain (0-based pair indices).
inline std::optional<ClassMatch> match_spherical(const KinematicChain& c, const std::vector<AxisRelation>& rel) {
  const double tol = kIntersectTol * c.characteristic_length();
  if (!rel[3].intersecting() || !rel[4].intersecting()) return std::nullopt;
  if ((*rel[3].intersection - *rel[4].intersection).norm() > tol) return std::nullopt;
  if (rel[1].intersecting()) return ClassMatch{ClassTag::SphericalWrist_23Intersect, {3, 4, 1}};
  if (rel[0].parallel()) return ClassMatch{ClassTag::SphericalWrist_12Parallel, {3, 4}};
  return ClassMatch{ClassTag::SphericalWrist_General, {3, 4}};
}

inline std::optional<ClassMatch> match_three_parallel_234(const std::vector<AxisRelation>& rel) {
  if (rel[1].parallel() && rel[2].parallel()) return ClassMatch{ClassTag::ThreeParallel_234, {}};
  return std::nullopt;
}

inline std::optional<ClassMatch> match_three_parallel_123_56(const std::vector<AxisRelation>& rel) {
  if (rel[0].parallel() && rel[1].parallel() && rel[4].intersecting()) {
    return ClassMatch{ClassTag::ThreeParallel_123_56Intersect, {4}};
  }
  return std::nullopt;
}

}  // namespace detail

/// Derives the decomposition plan: lock, classify, remodel.
///
/// Six-joint chains are tested in a fixed order: spherical wrist, spherical
/// wrist of the inverted chain, parallel axes 2-3-4, the same on the inverted
/// chain, parallel 1-2-3 with intersecting 5-6, and its inverted mirror. The
/// first match wins. Seven-joint chains need an explicit lock.
inline DecompositionPlan classify(const KinematicChain& chain, std::optional<JointLock> lock = std::nullopt) {
  const auto start = std::chrono::steady_clock::now();
  if (chain.dof() == 7 && !lock) {
    throw Error(ErrorKind::LockRequired, "7-joint chains need a joint lock (e.g. --lock 3=0.5)");
  }
  if (chain.dof() != 3 && chain.dof() != 6 && chain.dof() != 7) {
    throw Error(ErrorKind::UnsupportedJointCount,
                "chains with " + std::to_string(chain.dof()) + " joints are not supported");
  }
  KinematicChain reduced = lock ? lock_joint(chain, lock->index, lock->theta) : chain;
  if (reduced.dof() != 3 && reduced.dof() != 6) {
    throw Error(ErrorKind::UnsupportedJointCount,
                "locked chain has " + std::to_string(reduced.dof()) + " joints, expected 3 or 6");
  }

  const KinematicChain inverted = invert_chain(reduced);
  const auto rel = detect_relations(reduced);
  const auto rel_inv = detect_relations(inverted);

  KinematicClass cls;
  std::vector<std::size_t> priority;
  if (reduced.dof() == 6) {
    using Match = std::optional<detail::ClassMatch>;
    const std::array<std::pair<Match, bool>, 6> order = {
        std::pair{detail::match_spherical(reduced, rel), false},
        std::pair{detail::match_spherical(inverted, rel_inv), true},
        std::pair{detail::match_three_parallel_234(rel), false},
        std::pair{detail::match_three_parallel_234(rel_inv), true},
        std::pair{detail::match_three_parallel_123_56(rel), false},
        std::pair{detail::match_three_parallel_123_56(rel_inv), true},
    };
    for (const auto& [m, inv] : order) {
      if (m) {
        cls = {m->tag, inv};
        priority = m->priority;
        break;
      }
    }
  } else {
    if (rel[0].intersecting()) {
      cls = {ClassTag::ThreeDof_12Intersect, false};
      priority = {0};
    } else if (rel[1].intersecting()) {
      cls = {ClassTag::ThreeDof_23Intersect, true};
      priority = {0};
    } else {
      cls = {ClassTag::ThreeDof_NoIntersect, false};
    }
  }

  std::vector<int> signs;
  KinematicChain remodeled =
      cls.inverted ? remodel_chain(inverted, rel_inv, priority, &signs) : remodel_chain(reduced, rel, priority, &signs);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  return DecompositionPlan{cls,
                           chain,
                           std::move(reduced),
                           std::move(remodeled),
                           std::move(signs),
                           lock,
                           std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed)};
}

}  // namespace geoik
