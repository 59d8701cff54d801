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

// Reference implementations used by the tests. Nothing here calls into the
// library's geometry or subproblem code: rotations come from
// Eigen::AngleAxisd, minimizers from grid search plus local refinement.

#pragma once

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "geoik/chain.hpp"

namespace oracle {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Iso3 = Eigen::Isometry3d;
constexpr double kPi = 3.14159265358979323846;

inline Mat3 rot(const Vec3& axis, double t) { return Eigen::AngleAxisd(t, axis.normalized()).toRotationMatrix(); }

inline double wrap(double t) {
  t = std::fmod(t, 2 * kPi);
  if (t <= -kPi) t += 2 * kPi;
  if (t > kPi) t -= 2 * kPi;
  return t;
}

inline double angdist(double a, double b) { return std::abs(wrap(a - b)); }

// ---------------------------------------------------------------------------
// Forward kinematics as a product of screw motions about fixed base-frame
// lines applied to the home pose of the end effector.

inline Iso3 screw(const Vec3& h, const Vec3& p, double t) {
  Iso3 m = Iso3::Identity();
  m.linear() = rot(h, t);
  m.translation() = p - m.linear() * p;
  return m;
}

inline Iso3 fk(const geoik::KinematicChain& c, const std::vector<double>& q) {
  Iso3 home = Iso3::Identity();
  home.linear() = c.ee_offset().rotation;
  home.translation() = c.joints().back().p + c.ee_offset().translation;
  Iso3 m = Iso3::Identity();
  for (std::size_t i = 0; i < c.dof(); ++i) m = m * screw(c.joint(i).h.vec(), c.joint(i).p, q[i]);
  return m * home;
}

inline double rot_angle(const Mat3& a, const Mat3& b) { return Eigen::AngleAxisd(a.transpose() * b).angle(); }

// ---------------------------------------------------------------------------
// 1D minimization: dense grid, then golden-section refinement of every grid
// local minimum.

inline double golden(const std::function<double(double)>& f, double lo, double hi) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct Min1 {
  double t;
  double value;
};

// Global minimizers (value within `slack` of the best) of a 2 pi-periodic f.
inline std::vector<Min1> minimize_1d(const std::function<double(double)>& f, double step = 1e-3,
                                     double slack = 1e-9) {
  const int n = static_cast<int>(std::ceil(2 * kPi / step));
  const double h = 2 * kPi / n;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = f(-kPi + i * h);
  std::vector<Min1> loc;
  for (int i = 0; i < n; ++i) {
    const double l = v[static_cast<std::size_t>((i + n - 1) % n)];
    const double r = v[static_cast<std::size_t>((i + 1) % n)];
    const double c = v[static_cast<std::size_t>(i)];
    if (c <= l && c <= r) {
      const double t0 = -kPi + i * h;
      const double t = golden(f, t0 - h, t0 + h);
      loc.push_back({wrap(t), f(t)});
    }
  }
  double best = 1e300;
  for (const auto& m : loc) best = std::min(best, m.value);
  std::vector<Min1> out;
  for (const auto& m : loc) {
    if (m.value > best + slack) continue;
    bool dup = false;
    for (const auto& o : out) dup = dup || angdist(o.t, m.t) < 1e-7;
    if (!dup) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 2D: grid local minima of |r|^2, refined by Levenberg-Marquardt on r.

using Res2 = std::function<Eigen::VectorXd(double, double)>;

struct Min2 {
  double t1;
  double t2;
  double value;  // |r|
};

inline Min2 refine_2d(const Res2& r, double t1, double t2, int iters = 100) {
  double lambda = 1e-6;
  Eigen::VectorXd cur = r(t1, t2);
  for (int it = 0; it < iters; ++it) {
    const double e = 1e-7;
    Eigen::MatrixXd j(cur.size(), 2);
    j.col(0) = (r(t1 + e, t2) - r(t1 - e, t2)) / (2 * e);
    j.col(1) = (r(t1, t2 + e) - r(t1, t2 - e)) / (2 * e);
    const Eigen::Matrix2d a = j.transpose() * j + lambda * Eigen::Matrix2d::Identity();
    const Eigen::Vector2d step = a.ldlt().solve(-j.transpose() * cur);
    const Eigen::VectorXd next = r(t1 + step[0], t2 + step[1]);
    if (next.norm() < cur.norm()) {
      t1 += step[0];
      t2 += step[1];
      cur = next;
      lambda = std::max(1e-12, lambda * 0.3);
      if (step.norm() < 1e-15) break;
    } else {
      lambda *= 10.0;
      if (lambda > 1e8) break;
    }
  }
  // Newton on |r|^2 with finite-difference derivatives; Gauss-Newton alone
  // converges slowly when the minimum residual is not zero.
  auto grad = [&](double a, double b) {
    const double e = 1e-7;
    Eigen::MatrixXd j(cur.size(), 2);
    j.col(0) = (r(a + e, b) - r(a - e, b)) / (2 * e);
    j.col(1) = (r(a, b + e) - r(a, b - e)) / (2 * e);
    return Eigen::Vector2d(2.0 * j.transpose() * r(a, b));
  };
  for (int it = 0; it < 20; ++it) {
    const double e = 1e-5;
    const Eigen::Vector2d g0 = grad(t1, t2);
    Eigen::Matrix2d hess;
    hess.col(0) = (grad(t1 + e, t2) - grad(t1 - e, t2)) / (2 * e);
    hess.col(1) = (grad(t1, t2 + e) - grad(t1, t2 - e)) / (2 * e);
    hess = 0.5 * (hess + hess.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(hess);
    if (es.eigenvalues().minCoeff() <= 1e-12) break;
    const Eigen::Vector2d step = -hess.ldlt().solve(g0);
    const Eigen::VectorXd next = r(t1 + step[0], t2 + step[1]);
    if (next.norm() > cur.norm() + 1e-15) break;
    t1 += step[0];
    t2 += step[1];
    cur = next;
    if (step.norm() < 1e-13) break;
  }
  return {wrap(t1), wrap(t2), cur.norm()};
}

// `grid` evaluates |r|^2 on the n x n grid (may be a fast separable version).
inline std::vector<Min2> minimize_2d(const Res2& r, int n, const std::function<double(int, int)>& grid,
                                     double slack, std::size_t max_starts = 64) {
  const double h = 2 * kPi / n;
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(i) * n + j] = grid(i, j);
  auto at = [&](int i, int j) { return v[static_cast<std::size_t>((i + n) % n) * n + (j + n) % n]; };
  std::vector<std::pair<double, std::pair<int, int>>> starts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double c = at(i, j);
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          if ((di || dj) && at(i + di, j + dj) < c) {
            is_min = false;
            break;
          }
      if (is_min) starts.push_back({c, {i, j}});
    }
  std::sort(starts.begin(), starts.end());
  if (starts.size() > max_starts) starts.resize(max_starts);
  std::vector<Min2> loc;
  for (const auto& [val, ij] : starts) loc.push_back(refine_2d(r, -kPi + ij.first * h, -kPi + ij.second * h));
  double best = 1e300;
  for (const auto& m : loc) best = std::min(best, m.value);
  std::vector<Min2> out;
  for (const auto& m : loc) {
    if (m.value > best + slack) continue;
    bool dup = false;
    for (const auto& o : out) dup = dup || (angdist(o.t1, m.t1) < 1e-6 && angdist(o.t2, m.t2) < 1e-6);
    if (!dup) out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subproblem oracles. Each returns the global minimizers of the subproblem's
// objective.

inline std::vector<Min1> sp1(const Vec3& x1, const Vec3& x2, const Vec3& k) {
  return minimize_1d([&](double t) { return (rot(k, t) * x1 - x2).norm(); });
}

inline std::vector<Min1> sp3(const Vec3& x1, const Vec3& x2, const Vec3& k, double d) {
  return minimize_1d([&](double t) { return std::abs((rot(k, t) * x1 - x2).norm() - d); });
}

inline std::vector<Min1> sp4(const Vec3& h, const Vec3& x, const Vec3& k, double d) {
  return minimize_1d([&](double t) { return std::abs(h.dot(rot(k, t) * x) - d); });
}

inline std::vector<Min2> sp2(const Vec3& x1, const Vec3& x2, const Vec3& k1, const Vec3& k2, int n = 629) {
  const double h = 2 * kPi / n;
  std::vector<Vec3> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i)] = rot(k1, -kPi + i * h) * x1;
    b[static_cast<std::size_t>(i)] = rot(k2, -kPi + i * h) * x2;
  }
  const Res2 r = [&](double t1, double t2) -> Eigen::VectorXd { return rot(k1, t1) * x1 - rot(k2, t2) * x2; };
  auto grid = [&](int i, int j) { return (a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)]).squaredNorm(); };
  return minimize_2d(r, n, grid, 1e-9);
}

inline std::vector<Min2> sp6(const Vec3& h, const Vec3& k1, const Vec3& k2, const Vec3& x1, const Vec3& x2,
                             const Vec3& x3, const Vec3& x4, double d1, double d2, int n = 629) {
  const double s = 2 * kPi / n;
  std::vector<double> a1(static_cast<std::size_t>(n)), a3(static_cast<std::size_t>(n)), b2(static_cast<std::size_t>(n)),
      b4(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Mat3 r1 = rot(k1, -kPi + i * s), r2 = rot(k2, -kPi + i * s);
    a1[static_cast<std::size_t>(i)] = h.dot(r1 * x1);
    a3[static_cast<std::size_t>(i)] = h.dot(r1 * x3);
    b2[static_cast<std::size_t>(i)] = h.dot(r2 * x2);
    b4[static_cast<std::size_t>(i)] = h.dot(r2 * x4);
  }
  const Res2 r = [&](double t1, double t2) -> Eigen::VectorXd {
    const Mat3 r1 = rot(k1, t1), r2 = rot(k2, t2);
    return Eigen::Vector2d(h.dot(r1 * x1) + h.dot(r2 * x2) - d1, h.dot(r1 * x3) + h.dot(r2 * x4) - d2);
  };
  auto grid = [&](int i, int j) {
    const double e1 = a1[static_cast<std::size_t>(i)] + b2[static_cast<std::size_t>(j)] - d1;
    const double e2 = a3[static_cast<std::size_t>(i)] + b4[static_cast<std::size_t>(j)] - d2;
    return e1 * e1 + e2 * e2;
  };
  return minimize_2d(r, n, grid, 1e-9);
}

struct Min3 {
  double t1, t2, t3, value;
};

// SP5 zeros. For fixed (t1, t3), some t2 closes the loop iff u = p0 + R1 p1
// and v = p2 + R3 p3 have equal height and equal radius about k2; those two
// conditions are searched on a 2D grid, t2 then by 1D search.
inline std::vector<Min3> sp5(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3, const Vec3& k1,
                             const Vec3& k2, const Vec3& k3, int n = 315) {
  auto cyl = [&](const Vec3& w) {
    const double z = k2.dot(w);
    return Eigen::Vector2d(z, (w - z * k2).norm());
  };
  const Res2 r = [&](double t1, double t3) -> Eigen::VectorXd {
    return cyl(p0 + rot(k1, t1) * p1) - cyl(p2 + rot(k3, t3) * p3);
  };
  const double s = 2 * kPi / n;
  std::vector<Eigen::Vector2d> cu(static_cast<std::size_t>(n)), cv(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cu[static_cast<std::size_t>(i)] = cyl(p0 + rot(k1, -kPi + i * s) * p1);
    cv[static_cast<std::size_t>(i)] = cyl(p2 + rot(k3, -kPi + i * s) * p3);
  }
  auto grid = [&](int i, int j) { return (cu[static_cast<std::size_t>(i)] - cv[static_cast<std::size_t>(j)]).squaredNorm(); };
  std::vector<Min3> out;
  for (const Min2& m : minimize_2d(r, n, grid, 1e-9)) {
    const Vec3 u = p0 + rot(k1, m.t1) * p1;
    const Vec3 v = p2 + rot(k3, m.t2) * p3;
    const auto t2 = minimize_1d([&](double t) { return (u - rot(k2, t) * v).norm(); }, 1e-2);
    const double val = (u - rot(k2, t2.front().t) * v).norm();
    out.push_back({m.t1, t2.front().t, m.t2, val});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random helpers.

inline Vec3 rand_dir(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  Vec3 v;
  do {
    const double x = n(g), y = n(g), z = n(g);
    v = Vec3(x, y, z);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

inline Vec3 rand_vec(std::mt19937_64& g, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const double x = u(g), y = u(g), z = u(g);
  return Vec3(x, y, z);
}

inline double rand_angle(std::mt19937_64& g) { return std::uniform_real_distribution<double>(-kPi, kPi)(g); }

}  // namespace oracle
