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

// geoik: command-line front end.
//
//   geoik derive <file> [--format urdf|native] [--base L --tip L] [--lock J=THETA] [--json]
//   geoik solve <file> --pose "px py pz qw qx qy qz" [--lock J=THETA] [--out PATH] [--json|--csv]
//   geoik roundtrip <file> -n N --seed S [--lock J=THETA] [--json|--csv]
//   geoik bench random --count N --seed S [--out PATH] [--json|--csv]
//
// Exit codes: 0 success, 1 input or usage error, 2 unsolvable chain (or a
// 7-joint chain without --lock), 3 solve returned only least-squares rows.
// Roundtrip and bench exit 0 only when every threshold of the report holds.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "geoik.hpp"

namespace {

using namespace geoik;

struct ChainInput {
  std::string path;
  std::string format;
  std::string base;
  std::string tip;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KinematicChain load_chain(const ChainInput& in) {
  std::string fmt = in.format;
  if (fmt.empty()) {
    const auto dot = in.path.rfind('.');
    fmt = (dot != std::string::npos && in.path.substr(dot) == ".urdf") ? "urdf" : "native";
  }
  const std::string text = read_file(in.path);
  if (fmt == "urdf") return parse_urdf(text, in.base, in.tip);
  return parse_native(text);
}

std::optional<JointLock> parse_lock(const std::string& arg) {
  if (arg.empty()) return std::nullopt;
  const auto eq = arg.find('=');
  if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "lock must look like J=THETA");
  try {
    std::size_t used_j = 0, used_t = 0;
    const std::string js = arg.substr(0, eq), ts = arg.substr(eq + 1);
    const long j = std::stol(js, &used_j);
    const double theta = std::stod(ts, &used_t);
    if (used_j != js.size() || used_t != ts.size() || j < 1) throw std::invalid_argument(arg);
    return JointLock{static_cast<std::size_t>(j), theta};
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "lock must look like J=THETA, got \"" + arg + "\"");
  }
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::UnsolvableClass:
    case ErrorKind::LockRequired:
    case ErrorKind::UnsupportedJointCount: return 2;
    default: return 1;
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write \"" + out_path + "\"");
  out << text;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

int cmd_derive(const ChainInput& in, const std::string& lock_arg, bool json) {
  const KinematicChain chain = load_chain(in);
  const DecompositionPlan plan = classify(chain, parse_lock(lock_arg));
  const double us = static_cast<double>(plan.derivation_time.count()) / 1000.0;
  const KinematicChain& c = plan.remodeled;
  if (json) {
    nlohmann::ordered_json doc;
    doc["class"] = to_string(plan.cls.tag);
    doc["inverted"] = plan.cls.inverted;
    doc["solvable"] = plan.cls.solvable();
    doc["dof"] = chain.dof();
    doc["derive_us"] = us;
    doc["remodeled"] = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < c.dof(); ++j) {
      const JointAxis& a = c.joint(j);
      doc["remodeled"].push_back({{"h", {a.h[0], a.h[1], a.h[2]}}, {"p", {a.p[0], a.p[1], a.p[2]}}, {"sign", plan.signs[j]}});
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "class: " << to_string(plan.cls.tag) << "\n"
              << "inverted: " << (plan.cls.inverted ? "true" : "false") << "\n"
              << "solvable: " << (plan.cls.solvable() ? "true" : "false") << "\n"
              << "dof: " << chain.dof() << "\n"
              << "derive_us: " << fmt(us) << "\n"
              << "joint,hx,hy,hz,px,py,pz,sign\n";
    for (std::size_t j = 0; j < c.dof(); ++j) {
      const JointAxis& a = c.joint(j);
      std::cout << j + 1 << "," << fmt(a.h[0]) << "," << fmt(a.h[1]) << "," << fmt(a.h[2]) << "," << fmt(a.p[0]) << ","
                << fmt(a.p[1]) << "," << fmt(a.p[2]) << "," << plan.signs[j] << "\n";
    }
  }
  return plan.cls.solvable() ? 0 : 2;
}

int cmd_solve(const ChainInput& in, const std::string& pose_text, const std::string& lock_arg, bool json,
              const std::string& out_path) {
  const KinematicChain chain = load_chain(in);
  bool renormalized = false;
  const Pose target = parse_pose(pose_text, &renormalized);
  if (renormalized) std::cerr << "warning: quaternion normalized to unit length\n";
  const DecompositionPlan plan = classify(chain, parse_lock(lock_arg));
  if (!plan.cls.solvable()) throw Error(ErrorKind::UnsolvableClass, "no known decomposition for this chain");
  const IKSolutionSet set = solve(plan, target, options_from_env());
  emit(serialize_solutions(set, json ? OutputFormat::Json : OutputFormat::Csv), out_path);
  return set.has_exact() ? 0 : 3;
}

int cmd_roundtrip(const ChainInput& in, std::size_t n, std::uint64_t seed, const std::string& lock_arg, bool json,
                  const std::string& out_path) {
  const KinematicChain chain = load_chain(in);
  const auto lock = parse_lock(lock_arg);
  if (!classify(chain, lock).cls.solvable()) throw Error(ErrorKind::UnsolvableClass, "no known decomposition for this chain");
  const SolveOptions opts = options_from_env();
  BenchReport report;
  report.rows.push_back(roundtrip(chain, n, seed, lock, in.path, opts));
  emit(serialize_report(report, json ? OutputFormat::Json : OutputFormat::Csv), out_path);
  return row_passes(report.rows.front(), opts) ? 0 : 3;
}

int cmd_bench_random(std::size_t count, std::uint64_t seed, bool json, const std::string& out_path) {
  const SolveOptions opts = options_from_env();
  const BenchReport report = bench_random(count, seed, opts);
  emit(serialize_report(report, json ? OutputFormat::Json : OutputFormat::Csv), out_path);
  std::size_t recovered = 0;
  bool ok = true;
  for (const BenchRow& r : report.rows) {
    recovered += r.recovered;
    ok = ok && r.cls.solvable() && r.pos_err_max <= opts.pos_tol * r.length && r.rot_err_max <= opts.rot_tol;
  }
  if (!report.rows.empty()) ok = ok && static_cast<double>(recovered) >= 0.999 * static_cast<double>(report.rows.size());
  std::cerr << "recovered " << recovered << "/" << report.rows.size() << "\n";
  return ok ? 0 : 3;
}

void add_chain_options(CLI::App* cmd, ChainInput& in) {
  cmd->add_option("file", in.path, "Robot description (native JSON or URDF)")->required();
  cmd->add_option("--format", in.format, "Input format")->check(CLI::IsMember({"urdf", "native"}));
  cmd->add_option("--base", in.base, "URDF base link");
  cmd->add_option("--tip", in.tip, "URDF tip link");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytical inverse kinematics for revolute chains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GEOIK_VERSION);

  ChainInput in;
  std::string lock_arg, pose_text, out_path;
  bool json = false, csv = false;
  std::size_t n = 1000, count = 100;
  std::uint64_t seed = 1;

  auto* derive = app.add_subcommand("derive", "Classify a chain and print its decomposition");
  add_chain_options(derive, in);
  derive->add_option("--lock", lock_arg, "Freeze a joint: J=THETA (1-based, rad)");
  derive->add_flag("--json", json, "JSON output");

  auto* solve_cmd = app.add_subcommand("solve", "Compute all IK solutions for a pose");
  add_chain_options(solve_cmd, in);
  solve_cmd->add_option("--pose", pose_text, "\"px py pz qw qx qy qz\" or 12 reals (rotation rows, translation)")
      ->required();
  solve_cmd->add_option("--lock", lock_arg, "Freeze a joint: J=THETA (1-based, rad)");
  solve_cmd->add_option("--out", out_path, "Write the table to a file");
  auto* sj = solve_cmd->add_flag("--json", json, "JSON output");
  auto* sc = solve_cmd->add_flag("--csv", csv, "CSV output (default)");
  sj->excludes(sc);

  auto* rt = app.add_subcommand("roundtrip", "FK round trip over random configurations");
  add_chain_options(rt, in);
  rt->add_option("-n", n, "Number of poses")->check(CLI::NonNegativeNumber);
  rt->add_option("--seed", seed, "Random seed");
  rt->add_option("--lock", lock_arg, "Freeze a joint: J=THETA (1-based, rad)");
  rt->add_option("--out", out_path, "Write the report to a file");
  auto* rj = rt->add_flag("--json", json, "JSON output");
  auto* rc = rt->add_flag("--csv", csv, "CSV output (default)");
  rj->excludes(rc);

  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  auto* random = bench->add_subcommand("random", "Random solvable robots, one pose each");
  random->add_option("--count", count, "Number of robots")->check(CLI::NonNegativeNumber);
  random->add_option("--seed", seed, "Random seed");
  random->add_option("--out", out_path, "Write the report to a file");
  auto* bj = random->add_flag("--json", json, "JSON output");
  auto* bc = random->add_flag("--csv", csv, "CSV output (default)");
  bj->excludes(bc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*derive) return cmd_derive(in, lock_arg, json);
    if (*solve_cmd) return cmd_solve(in, pose_text, lock_arg, json, out_path);
    if (*rt) return cmd_roundtrip(in, n, seed, lock_arg, json, out_path);
    if (*random) return cmd_bench_random(count, seed, json, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
