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

#include "geoik/bench.hpp"
#include "geoik/models_io.hpp"

using namespace geoik;

TEST(Generator, DeterministicPerSeed) {
  for (const KinematicClass& cls : solvable_classes()) {
    EXPECT_EQ(serialize_native(generate_random_solvable(42, cls).chain),
              serialize_native(generate_random_solvable(42, cls).chain));
  }
  const KinematicClass sw{ClassTag::SphericalWrist_General, false};
  EXPECT_NE(serialize_native(generate_random_solvable(1, sw).chain),
            serialize_native(generate_random_solvable(2, sw).chain));
}

TEST(Generator, DrawsClassifyAsRequested) {
  const auto classes = solvable_classes();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const KinematicClass want = classes[seed % classes.size()];
    const RobotSample s = generate_random_solvable(seed, want);
    EXPECT_EQ(s.cls_expected, want);
    EXPECT_EQ(classify(s.chain).cls, want) << seed;
    EXPECT_NEAR(s.chain.characteristic_length(), 1.0, 1e-9);
  }
}

TEST(Generator, UnsolvableRequestIsRejected) {
  try {
    generate_random_solvable(1, {ClassTag::Unsolvable, false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(Roundtrip, ZeroPosesHasFullRate) {
  const BenchRow r = roundtrip(ur5_like(), 0, 1);
  EXPECT_EQ(r.recovered, 0u);
  EXPECT_DOUBLE_EQ(r.recovery_rate, 1.0);
  EXPECT_TRUE(row_passes(r));
}

TEST(Roundtrip, SphericalWristRobot) {
  const BenchRow r = roundtrip(spherical_robot(), 1000, 3, std::nullopt, "spherical");
  EXPECT_EQ(r.recovered, 1000u);
  EXPECT_DOUBLE_EQ(r.recovery_rate, 1.0);
  EXPECT_LE(r.pos_err_max, 1e-8 * r.length);
  EXPECT_LE(r.rot_err_max, 1e-8);
  EXPECT_TRUE(row_passes(r));
}

TEST(Roundtrip, ReportWithoutTimingIsReproducible) {
  BenchReport a, b;
  a.rows.push_back(roundtrip(puma_like(), 200, 9, std::nullopt, "puma"));
  b.rows.push_back(roundtrip(puma_like(), 200, 9, std::nullopt, "puma"));
  EXPECT_EQ(serialize_report(a, OutputFormat::Csv, false), serialize_report(b, OutputFormat::Csv, false));
  EXPECT_EQ(serialize_report(a, OutputFormat::Json, false), serialize_report(b, OutputFormat::Json, false));
  const BenchReport ra = bench_random(30, 5), rb = bench_random(30, 5);
  EXPECT_EQ(serialize_report(ra, OutputFormat::Csv, false), serialize_report(rb, OutputFormat::Csv, false));
}

TEST(BenchRandom, EmptyAndSmallBatches) {
  EXPECT_TRUE(bench_random(0, 1).rows.empty());
  const BenchReport r = bench_random(100, 2);
  ASSERT_EQ(r.rows.size(), 100u);
  for (const BenchRow& row : r.rows) {
    EXPECT_TRUE(row.cls.solvable()) << row.name;
    EXPECT_TRUE(row_passes(row)) << row.name;
  }
}

TEST(NumericBaseline, StartAtSolutionConvergesImmediately) {
  const KinematicChain c = ur5_like();
  const JointConfig q{0.2, -0.4, 0.6, -0.8, 1.0, -1.2};
  const NumericResult r = numeric_ik_baseline(c, fk(c, q), q);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_LE(config_distance(r.q, q), 1e-12);
}

TEST(NumericBaseline, SmallPerturbationAgreesWithAnalytic) {
  std::mt19937_64 g(31);
  for (const auto& [name, c] : named_test_robots()) {
    const DecompositionPlan plan = classify(c);
    int converged = 0;
    for (int i = 0; i < 40; ++i) {
      const JointConfig q = random_config(g, 6);
      JointConfig q0 = q;
      std::uniform_real_distribution<double> d(-0.1, 0.1);
      for (double& x : q0) x += d(g);
      const Pose t = fk(c, q);
      const NumericResult r = numeric_ik_baseline(c, t, q0);
      if (!r.converged) continue;
      ++converged;
      EXPECT_TRUE(contains_config(solve(plan, t), r.q, 1e-5)) << name << " " << i;
    }
    EXPECT_GE(converged, 30) << name;
  }
}

TEST(NumericBaseline, UnreachableDoesNotConverge) {
  const KinematicChain c = ur5_like();
  const NumericResult r = numeric_ik_baseline(c, Pose{Rot3::Identity(), Vec3(10, 0, 0)}, JointConfig(6, 0.0));
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 30);
  EXPECT_GT(r.error, 1.0);
}

TEST(NumericBaseline, ArgumentChecks) {
  const KinematicChain c = ur5_like();
  EXPECT_THROW(numeric_ik_baseline(c, Pose::identity(), JointConfig(6, 0.0), 0), Error);
  EXPECT_THROW(numeric_ik_baseline(c, Pose::identity(), JointConfig(5, 0.0)), Error);
}

TEST(Rng, TaskStreamsAreIndependentOfOrder) {
  std::mt19937_64 a = task_rng(7, 3);
  std::mt19937_64 b = task_rng(7, 4);
  std::mt19937_64 c = task_rng(7, 3);
  const auto x = a();
  EXPECT_NE(x, b());
  EXPECT_EQ(x, c());
  std::mt19937_64 g(1);
  for (int i = 0; i < 1000; ++i) {
    const double t = uniform_angle(g);
    EXPECT_GT(t, -kPi);
    EXPECT_LE(t, kPi);
  }
}
