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

#include <gtest/gtest.h>

#include <random>

#include "geoik/geom.hpp"
#include "oracles.hpp"

using namespace geoik;

TEST(Rodrigues, ZeroAngleIsIdentity) {
  EXPECT_TRUE(rodrigues(UnitVec3::unit_z(), 0.0).isApprox(Rot3::Identity(), 1e-15));
}

TEST(Rodrigues, QuarterTurnAboutZ) {
  const Vec3 v = rodrigues(UnitVec3::unit_z(), kPi / 2) * Vec3::UnitX();
  EXPECT_NEAR((v - Vec3::UnitY()).norm(), 0.0, 1e-15);
}

TEST(Rodrigues, RandomPropertiesAgainstAngleAxis) {
  std::mt19937_64 g(3);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 hv = oracle::rand_dir(g);
    const UnitVec3 h(hv);
    const double a = oracle::rand_angle(g), b = oracle::rand_angle(g);
    const Rot3 r = rodrigues(h, a);
    EXPECT_LE((r * h.vec() - h.vec()).norm(), 1e-12);
    EXPECT_LE((r.transpose() * r - Rot3::Identity()).norm(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
    EXPECT_LE((r * rodrigues(h, -a) - Rot3::Identity()).norm(), 1e-12);
    EXPECT_LE((r * rodrigues(h, b) - rodrigues(h, a + b)).norm(), 1e-12);
    EXPECT_LE((r - oracle::rot(hv, a)).norm(), 1e-12);
  }
}

TEST(UnitVec3, RejectsZeroVector) {
  EXPECT_THROW(UnitVec3(Vec3::Zero()), Error);
  EXPECT_NEAR(UnitVec3(3.0, 4.0, 0.0).vec().norm(), 1.0, 1e-15);
}

TEST(LinePairClosest, ParallelLinesThrow) {
  try {
    line_pair_closest(Vec3::Zero(), UnitVec3::unit_z(), Vec3(1, 0, 0), UnitVec3::unit_z());
    FAIL() << "expected ParallelLines";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParallelLines);
  }
}

TEST(LinePairClosest, PerpendicularCommonNormalAlongX) {
  const auto cp = line_pair_closest(Vec3::Zero(), UnitVec3::unit_z(), Vec3(1, 0, 0), UnitVec3::unit_y());
  EXPECT_LE(cp.on_first.norm(), 1e-15);
  EXPECT_LE((cp.on_second - Vec3(1, 0, 0)).norm(), 1e-15);
  EXPECT_NEAR(cp.distance, 1.0, 1e-15);
}

TEST(LinePairClosest, ZAxisAndOffsetXLine) {
  const auto cp = line_pair_closest(Vec3::Zero(), UnitVec3::unit_z(), Vec3(0, 1, 0), UnitVec3::unit_x());
  EXPECT_LE(cp.on_first.norm(), 1e-15);
  EXPECT_LE((cp.on_second - Vec3(0, 1, 0)).norm(), 1e-15);
  EXPECT_NEAR(cp.distance, 1.0, 1e-15);
}

TEST(LinePairClosest, SymmetricAndMinimal) {
  std::mt19937_64 g(5);
  for (int i = 0; i < 500; ++i) {
    const Vec3 p1 = oracle::rand_vec(g), p2 = oracle::rand_vec(g);
    const UnitVec3 d1(oracle::rand_dir(g)), d2(oracle::rand_dir(g));
    const auto a = line_pair_closest(p1, d1, p2, d2);
    const auto b = line_pair_closest(p2, d2, p1, d1);
    EXPECT_LE((a.on_first - b.on_second).norm(), 1e-12);
    EXPECT_LE((a.on_second - b.on_first).norm(), 1e-12);
    EXPECT_NEAR(a.distance, b.distance, 1e-12);
    // Common normal is perpendicular to both directions.
    const Vec3 n = a.on_second - a.on_first;
    EXPECT_LE(std::abs(n.dot(d1.vec())), 1e-10);
    EXPECT_LE(std::abs(n.dot(d2.vec())), 1e-10);
    EXPECT_NEAR(a.distance, n.norm(), 1e-12);
  }
}

TEST(NormalizeAngle, Conventions) {
  EXPECT_EQ(normalize_angle(0.0), 0.0);
  EXPECT_NEAR(normalize_angle(3 * kPi), kPi, 1e-15);
  EXPECT_EQ(normalize_angle(-kPi), kPi);
  EXPECT_EQ(normalize_angle(kPi), kPi);
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = u(g);
    const double n = normalize_angle(t);
    EXPECT_GT(n, -kPi);
    EXPECT_LE(n, kPi);
    EXPECT_NEAR(std::remainder(t - n, kTwoPi), 0.0, 1e-12);
  }
}

TEST(RotationDistance, MatchesAngleAxis) {
  std::mt19937_64 g(2);
  for (int i = 0; i < 200; ++i) {
    const Rot3 a = oracle::rot(oracle::rand_dir(g), oracle::rand_angle(g));
    const Rot3 b = oracle::rot(oracle::rand_dir(g), oracle::rand_angle(g));
    EXPECT_NEAR(rotation_distance(a, b), oracle::rot_angle(a, b), 1e-9);
  }
  EXPECT_EQ(rotation_distance(Rot3::Identity(), Rot3::Identity()), 0.0);
}
