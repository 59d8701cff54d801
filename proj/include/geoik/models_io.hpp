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

// Robot description formats (native JSON, URDF subset) and text output of
// solution sets and benchmark reports.

#pragma once

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "geoik/bench.hpp"

namespace geoik {

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline std::string format17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline Vec3 json_vec3(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::ValidationError, where + " must be an array of 3 numbers");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number()) throw Error(ErrorKind::ValidationError, where + " must hold numbers");
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

inline Rot3 checked_rotation(const Rot3& m, const std::string& where) {
  if (!m.allFinite() || !is_rotation(m, 1e-6)) {
    throw Error(ErrorKind::ValidationError, where + " is not a rotation matrix");
  }
  // Matrices that are orthonormal to rounding are kept bit for bit.
  return is_rotation(m, 1e-12) ? m : orthonormalize(m);
}

}  // namespace detail

/// Parses the native JSON description:
///   {"joints": [{"h": [x,y,z], "p": [x,y,z]}, ...],
///    "ee": {"R": [[...],[...],[...]], "p": [x,y,z]}}
/// "ee" may be omitted (identity). Axis vectors are normalized.
inline KinematicChain parse_native(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("joints") || !doc["joints"].is_array()) {
    throw Error(ErrorKind::ValidationError, "document needs a \"joints\" array");
  }
  std::vector<JointAxis> joints;
  for (std::size_t i = 0; i < doc["joints"].size(); ++i) {
    const auto& j = doc["joints"][i];
    const std::string where = "joints[" + std::to_string(i) + "]";
    if (!j.is_object() || !j.contains("h") || !j.contains("p")) {
      throw Error(ErrorKind::ValidationError, where + " needs \"h\" and \"p\"");
    }
    const Vec3 h = detail::json_vec3(j["h"], where + ".h");
    if (!h.allFinite() || h.norm() <= 1e-9) throw Error(ErrorKind::ValidationError, where + ".h has zero length");
    joints.push_back({UnitVec3(h), detail::json_vec3(j["p"], where + ".p")});
  }
  if (joints.empty()) throw Error(ErrorKind::ValidationError, "document has no joints");
  Pose ee;
  if (doc.contains("ee")) {
    const auto& e = doc["ee"];
    if (!e.is_object()) throw Error(ErrorKind::ValidationError, "\"ee\" must be an object");
    if (e.contains("R")) {
      const auto& r = e["R"];
      if (!r.is_array() || r.size() != 3) throw Error(ErrorKind::ValidationError, "ee.R must be 3x3");
      Rot3 m;
      for (int i = 0; i < 3; ++i) m.row(i) = detail::json_vec3(r[static_cast<std::size_t>(i)], "ee.R row").transpose();
      ee.rotation = detail::checked_rotation(m, "ee.R");
    }
    if (e.contains("p")) ee.translation = detail::json_vec3(e["p"], "ee.p");
  }
  return KinematicChain(std::move(joints), ee);
}

inline std::string serialize_native(const KinematicChain& chain) {
  detail::ordered_json doc;
  doc["joints"] = detail::ordered_json::array();
  for (const JointAxis& j : chain.joints()) {
    doc["joints"].push_back({{"h", {j.h[0], j.h[1], j.h[2]}}, {"p", {j.p[0], j.p[1], j.p[2]}}});
  }
  const Rot3& r = chain.ee_offset().rotation;
  const Vec3& p = chain.ee_offset().translation;
  doc["ee"]["R"] = {{r(0, 0), r(0, 1), r(0, 2)}, {r(1, 0), r(1, 1), r(1, 2)}, {r(2, 0), r(2, 1), r(2, 2)}};
  doc["ee"]["p"] = {p[0], p[1], p[2]};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// URDF

/// Roll-pitch-yaw about fixed X, Y, Z axes: Rz(yaw) Ry(pitch) Rx(roll).
inline Rot3 rpy_to_rotation(const Vec3& rpy) {
  return rodrigues(UnitVec3::unit_z(), rpy[2]) * rodrigues(UnitVec3::unit_y(), rpy[1]) *
         rodrigues(UnitVec3::unit_x(), rpy[0]);
}

struct UrdfJoint {
  std::string name;
  std::string type;
  std::string parent;
  std::string child;
  Pose origin;
  Vec3 axis = Vec3::UnitX();
};

namespace detail {

inline Vec3 parse_triple(const std::string& s, const std::string& where) {
  std::istringstream in(s);
  Vec3 v;
  if (!(in >> v[0] >> v[1] >> v[2])) throw Error(ErrorKind::ParseError, where + ": expected three numbers, got \"" + s + "\"");
  std::string rest;
  if (in >> rest) throw Error(ErrorKind::ParseError, where + ": trailing text \"" + rest + "\"");
  return v;
}

inline std::vector<UrdfJoint> read_urdf_joints(const std::string& text, std::set<std::string>* links) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(e.line()) + ": " + e.message());
  }
  const auto robot = tree.get_child_optional("robot");
  if (!robot) throw Error(ErrorKind::ParseError, "missing <robot> element");
  std::vector<UrdfJoint> out;
  for (const auto& [tag, node] : *robot) {
    if (tag == "link") {
      if (links) links->insert(node.get<std::string>("<xmlattr>.name", ""));
      continue;
    }
    if (tag != "joint") continue;
    UrdfJoint j;
    j.name = node.get<std::string>("<xmlattr>.name", "");
    j.type = node.get<std::string>("<xmlattr>.type", "");
    const std::string where = "joint \"" + j.name + "\"";
    const auto parent = node.get_optional<std::string>("parent.<xmlattr>.link");
    const auto child = node.get_optional<std::string>("child.<xmlattr>.link");
    if (!parent || !child) throw Error(ErrorKind::ParseError, where + " needs parent and child links");
    j.parent = *parent;
    j.child = *child;
    if (const auto origin = node.get_child_optional("origin")) {
      j.origin.translation = parse_triple(origin->get<std::string>("<xmlattr>.xyz", "0 0 0"), where + " origin xyz");
      j.origin.rotation = rpy_to_rotation(parse_triple(origin->get<std::string>("<xmlattr>.rpy", "0 0 0"), where + " origin rpy"));
    }
    if (const auto axis = node.get_optional<std::string>("axis.<xmlattr>.xyz")) j.axis = parse_triple(*axis, where + " axis");
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace detail

/// Extracts the serial chain from `base_link` to `tip_link`.
///
/// Joint origins are accumulated at zero pose to place every axis in the base
/// frame; fixed joints fold into the neighbouring displacements. Continuous
/// joints are treated as revolute. Empty link names select the root link and
/// the unique leaf of the tree.
inline KinematicChain parse_urdf(const std::string& text, const std::string& base_link = {},
                                 const std::string& tip_link = {}) {
  std::set<std::string> links;
  const std::vector<UrdfJoint> all = detail::read_urdf_joints(text, &links);
  std::map<std::string, const UrdfJoint*> by_child;
  std::set<std::string> parents;
  for (const UrdfJoint& j : all) {
    by_child[j.child] = &j;
    parents.insert(j.parent);
    links.insert(j.parent);
    links.insert(j.child);
  }
  std::string base = base_link;
  std::string tip = tip_link;
  if (base.empty()) {
    std::vector<std::string> roots;
    for (const auto& l : links) {
      if (!by_child.count(l)) roots.push_back(l);
    }
    if (roots.size() != 1) throw Error(ErrorKind::PathNotFound, "cannot infer the base link; give it explicitly");
    base = roots.front();
  }
  if (tip.empty()) {
    std::vector<std::string> leaves;
    for (const auto& l : links) {
      if (!parents.count(l) && l != base) leaves.push_back(l);
    }
    if (leaves.size() != 1) throw Error(ErrorKind::PathNotFound, "cannot infer the tip link; give it explicitly");
    tip = leaves.front();
  }
  if (!links.count(base)) throw Error(ErrorKind::PathNotFound, "unknown link \"" + base + "\"");
  if (!links.count(tip)) throw Error(ErrorKind::PathNotFound, "unknown link \"" + tip + "\"");

  std::vector<const UrdfJoint*> path;
  for (std::string cur = tip; cur != base;) {
    const auto it = by_child.find(cur);
    if (it == by_child.end() || path.size() > all.size()) {
      throw Error(ErrorKind::PathNotFound, "no joint path from \"" + base + "\" to \"" + tip + "\"");
    }
    path.push_back(it->second);
    cur = it->second->parent;
  }
  std::reverse(path.begin(), path.end());

  Pose frame = Pose::identity();
  std::vector<JointAxis> joints;
  for (const UrdfJoint* j : path) {
    frame = frame * j->origin;
    if (j->type == "fixed") continue;
    if (j->type != "revolute" && j->type != "continuous") {
      throw Error(ErrorKind::UnsupportedJointType, "joint \"" + j->name + "\" has type \"" + j->type + "\"");
    }
    if (!j->axis.allFinite() || j->axis.norm() <= 1e-9) {
      throw Error(ErrorKind::ValidationError, "joint \"" + j->name + "\" has a zero axis");
    }
    joints.push_back({UnitVec3(Vec3(frame.rotation * j->axis)), frame.translation});
  }
  if (joints.empty()) throw Error(ErrorKind::ValidationError, "no revolute joints between base and tip");
  const Vec3 last = joints.back().p;
  return KinematicChain(std::move(joints), Pose{frame.rotation, frame.translation - last});
}

// ---------------------------------------------------------------------------
// Poses

/// Parses "px py pz qw qx qy qz" or 12 reals (rotation rows, then translation).
/// A quaternion off unit length is normalized and `*renormalized` set when the
/// norm deviates by more than 1e-6.
inline Pose parse_pose(const std::string& text, bool* renormalized = nullptr) {
  std::istringstream in(text);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, "pose value \"" + tok + "\" is not a number");
    }
  }
  if (renormalized) *renormalized = false;
  Pose p;
  if (v.size() == 7) {
    p.translation = Vec3(v[0], v[1], v[2]);
    Eigen::Quaterniond q(v[3], v[4], v[5], v[6]);
    const double n = q.norm();
    if (!std::isfinite(n) || n < 1e-9) throw Error(ErrorKind::ValidationError, "quaternion has zero length");
    if (renormalized) *renormalized = std::abs(n - 1.0) > 1e-6;
    p.rotation = q.normalized().toRotationMatrix();
  } else if (v.size() == 12) {
    Rot3 m;
    m << v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8];
    p.rotation = detail::checked_rotation(m, "pose rotation");
    p.translation = Vec3(v[9], v[10], v[11]);
  } else {
    throw Error(ErrorKind::ParseError, "pose needs 7 or 12 numbers, got " + std::to_string(v.size()));
  }
  if (!p.translation.allFinite()) throw Error(ErrorKind::ValidationError, "pose translation is not finite");
  return p;
}

// ---------------------------------------------------------------------------
// Output

enum class OutputFormat { Csv, Json };

/// Columns: index, theta1..thetan, exact, pos_err, rot_err.
inline std::string serialize_solutions(const IKSolutionSet& set, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out = "index";
    for (std::size_t i = 1; i <= set.dof; ++i) out += ",theta" + std::to_string(i);
    out += ",exact,pos_err,rot_err\n";
    for (std::size_t k = 0; k < set.solutions.size(); ++k) {
      const IKSolution& s = set.solutions[k];
      out += std::to_string(k);
      for (double x : s.q) out += "," + detail::format17(x);
      out += std::string(",") + (s.exact ? "true" : "false") + "," + detail::format17(s.pos_err) + "," +
             detail::format17(s.rot_err) + "\n";
    }
    return out;
  }
  detail::ordered_json doc;
  doc["class"] = to_string(set.class_used.tag);
  doc["inverted"] = set.class_used.inverted;
  doc["dof"] = set.dof;
  doc["solutions"] = detail::ordered_json::array();
  for (std::size_t k = 0; k < set.solutions.size(); ++k) {
    const IKSolution& s = set.solutions[k];
    doc["solutions"].push_back(
        {{"index", k}, {"q", s.q}, {"exact", s.exact}, {"pos_err", s.pos_err}, {"rot_err", s.rot_err}});
  }
  return doc.dump(2) + "\n";
}

/// Reads back the JSON produced by `serialize_solutions`.
inline IKSolutionSet parse_solutions_json(const std::string& text) {
  IKSolutionSet set;
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto tag = class_tag_from_string(doc.at("class").get<std::string>());
    if (!tag) throw Error(ErrorKind::ValidationError, "unknown class name");
    set.class_used = {*tag, doc.at("inverted").get<bool>()};
    set.dof = doc.at("dof").get<std::size_t>();
    for (const auto& s : doc.at("solutions")) {
      set.solutions.push_back(
          {s.at("q").get<JointConfig>(), s.at("exact").get<bool>(), s.at("pos_err").get<double>(), s.at("rot_err").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return set;
}

/// Report columns; timing columns come last so they are easy to strip.
inline std::string serialize_report(const BenchReport& report, OutputFormat format, bool with_timing = true) {
  const std::vector<std::string> header = {"name",         "dof",          "class",        "inverted",
                                           "n_poses",      "recovered",    "recovery_rate", "pos_err_mean",
                                           "pos_err_max",  "rot_err_mean", "rot_err_max",   "length"};
  const std::vector<std::string> timing = {"derive_us", "solve_p50_us", "solve_p95_us", "solve_p99_us", "solve_max_us"};
  if (format == OutputFormat::Csv) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    if (with_timing) {
      for (const auto& t : timing) out += "," + t;
    }
    out += "\n";
    for (const BenchRow& r : report.rows) {
      out += r.name + "," + std::to_string(r.dof) + "," + to_string(r.cls.tag) + "," + (r.cls.inverted ? "true" : "false") +
             "," + std::to_string(r.n_poses) + "," + std::to_string(r.recovered) + "," + detail::format17(r.recovery_rate) +
             "," + detail::format17(r.pos_err_mean) + "," + detail::format17(r.pos_err_max) + "," +
             detail::format17(r.rot_err_mean) + "," + detail::format17(r.rot_err_max) + "," + detail::format17(r.length);
      if (with_timing) {
        for (double t : {r.derive_us, r.solve_p50_us, r.solve_p95_us, r.solve_p99_us, r.solve_max_us}) {
          out += "," + detail::format17(t);
        }
      }
      out += "\n";
    }
    return out;
  }
  detail::ordered_json doc = detail::ordered_json::array();
  for (const BenchRow& r : report.rows) {
    detail::ordered_json row = {{"name", r.name},
                                {"dof", r.dof},
                                {"class", to_string(r.cls.tag)},
                                {"inverted", r.cls.inverted},
                                {"n_poses", r.n_poses},
                                {"recovered", r.recovered},
                                {"recovery_rate", r.recovery_rate},
                                {"pos_err_mean", r.pos_err_mean},
                                {"pos_err_max", r.pos_err_max},
                                {"rot_err_mean", r.rot_err_mean},
                                {"rot_err_max", r.rot_err_max},
                                {"length", r.length}};
    if (with_timing) {
      row["derive_us"] = r.derive_us;
      row["solve_p50_us"] = r.solve_p50_us;
      row["solve_p95_us"] = r.solve_p95_us;
      row["solve_p99_us"] = r.solve_p99_us;
      row["solve_max_us"] = r.solve_max_us;
    }
    doc.push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

}  // namespace geoik
