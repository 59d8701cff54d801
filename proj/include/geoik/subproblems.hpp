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

// Closed-form geometric subproblems.
//
//   SP1  min ||R(k,t) x1 - x2||
//   SP2  min ||R(k1,t1) x1 - R(k2,t2) x2||
//   SP3  min | ||R(k,t) x1 - x2|| - d |
//   SP4  min | h^T R(k,t) x - d |
//   SP5  p0 + R(k1,t1) p1 = R(k2,t2) (p2 + R(k3,t3) p3)
//   SP6  h^T R(k1,t1) x1 + h^T R(k2,t2) x2 = d1
//        h^T R(k1,t1) x3 + h^T R(k2,t2) x4 = d2
//
// SP1-SP4 always return at least one solution; when no exact solution exists
// they return the least-squares minimizer. SP5 and SP6 may return nothing.

#pragma once

#include <Eigen/Eigenvalues>
#include <boost/container/static_vector.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "geoik/geom.hpp"

namespace geoik {

/// Exactness threshold for SP1-SP4, relative to max(1, input magnitude).
inline constexpr double kSubproblemTol = 1e-10;
/// Exactness threshold for SP5/SP6 after root polishing.
inline constexpr double kQuarticTol = 1e-8;

template <std::size_t N>
struct SPSolution {
  std::array<double, N> angles{};
  bool exact = false;
  double residual = 0.0;
};

template <std::size_t N, std::size_t Cap>
using SPResult = boost::container::static_vector<SPSolution<N>, Cap>;

using SP1Result = SPResult<1, 1>;
using SP2Result = SPResult<2, 2>;
using SP3Result = SPResult<1, 2>;
using SP4Result = SPResult<1, 2>;
using SP5Result = SPResult<3, 4>;
using SP6Result = SPResult<2, 4>;

namespace detail {

// h^T R(k, t) x = c0 + a cos t + b sin t
struct Sinusoid {
  double c0;
  double a;
  double b;
};

inline Sinusoid project_rotation(const Vec3& h, const Vec3& k, const Vec3& x) {
  const double kx = k.dot(x);
  return {h.dot(k) * kx, h.dot(x - k * kx), h.dot(k.cross(x))};
}

// Angle maximizing a cos t + b sin t; 0 when the expression is flat.
inline double argmax_sinusoid(double a, double b, double scale) {
  if (std::hypot(a, b) <= 1e-14 * scale) return 0.0;
  return std::atan2(b, a);
}

// All t with c0 + a cos t + b sin t = value; the closest t when unreachable.
inline boost::container::static_vector<double, 2> solve_sinusoid(const Sinusoid& s, double value,
                                                                 double scale) {
  boost::container::static_vector<double, 2> out;
  const double rho = std::hypot(s.a, s.b);
  if (rho <= 1e-14 * scale) {
    out.push_back(0.0);
    return out;
  }
  const double phi = std::atan2(s.b, s.a);
  const double g = (value - s.c0) / rho;
  if (g >= 1.0) {
    out.push_back(normalize_angle(phi));
  } else if (g <= -1.0) {
    out.push_back(normalize_angle(phi + kPi));
  } else {
    const double delta = std::acos(g);
    out.push_back(normalize_angle(phi + delta));
    // Tangency (delta at 0 or pi) yields a single solution.
    if (delta > 1e-12 && kPi - delta > 1e-12) out.push_back(normalize_angle(phi - delta));
  }
  return out;
}

template <std::size_t N, std::size_t Cap>
void sort_by_first_angle(SPResult<N, Cap>& r) {
  std::sort(r.begin(), r.end(), [](const SPSolution<N>& a, const SPSolution<N>& b) {
    return a.angles[0] < b.angles[0];
  });
}

// One angle pair (t1, t2) of the two-circle linear problem.
struct CirclePair {
  double t1;
  double t2;
  double residual;
};

using CirclePairs = boost::container::static_vector<CirclePair, 4>;

// Real roots t of the trigonometric polynomial
//   k0 + k1c cos t + k1s sin t + k2c cos 2t + k2s sin 2t,
// via the companion matrix of z^2 f with z = e^{it}. Unit-modulus roots are
// the real solutions; near-unit roots are kept as near misses.
inline boost::container::static_vector<double, 4> trig_quadratic_roots(double k0, double k1c,
                                                                     double k1s, double k2c,
                                                                     double k2s, bool& constant) {
  using C = std::complex<double>;
  boost::container::static_vector<double, 4> roots;
  const std::array<C, 5> coeff = {C(k2c, k2s) * 0.5, C(k1c, k1s) * 0.5, C(k0, 0.0),
                                  C(k1c, -k1s) * 0.5, C(k2c, -k2s) * 0.5};  // z^0 .. z^4
  const double mag = std::max({std::abs(k0), std::abs(k1c), std::abs(k1s), std::abs(k2c),
                               std::abs(k2s), 1e-300});
  int lo = 0;
  int hi = 4;
  if (std::abs(coeff[4]) <= 1e-13 * mag) {
    lo = 1;
    hi = 3;
    if (std::abs(coeff[3]) <= 1e-13 * mag) {
      constant = true;
      return roots;
    }
  }
  constant = false;
  const int deg = hi - lo;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) comp(0, i) = -coeff[hi - 1 - i] / coeff[hi];
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  const auto& ev = es.eigenvalues();
  for (int i = 0; i < deg; ++i) {
    const C z = ev[i];
    const double r = std::abs(z);
    if (!std::isfinite(r) || r == 0.0) continue;
    if (std::abs(std::log(r)) > 1e-3) continue;
    roots.push_back(std::arg(z));
  }
  return roots;
}

// Solves M [cos t1, sin t1, cos t2, sin t2]^T = d for (t1, t2).
inline CirclePairs solve_circle_pair(Eigen::Matrix<double, 2, 4> m, Eigen::Vector2d d) {
  CirclePairs out;
  for (int r = 0; r < 2; ++r) {
    const double s = m.row(r).norm();
    if (s <= 1e-12 * std::max(1.0, std::abs(d[r]))) {
      if (std::abs(d[r]) <= 1e-12) {
        throw Error(ErrorKind::DegenerateInput, "constraint is independent of both angles");
      }
      return out;  // unsatisfiable constant constraint
    }
    m.row(r) /= s;
    d[r] /= s;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 2, 4>> svd_full(m);
  if (svd_full.singularValues()[1] <= 1e-10 * svd_full.singularValues()[0]) {
    throw Error(ErrorKind::DegenerateInput, "the two constraints are not independent");
  }
  const Eigen::Matrix2d m1 = m.leftCols<2>();
  const Eigen::Matrix2d m2 = m.rightCols<2>();

  auto unit = [](double t) { return Eigen::Vector2d(std::cos(t), std::sin(t)); };
  auto residual = [&](double t1, double t2) {
    return (m1 * unit(t1) + m2 * unit(t2) - d).norm();
  };

  boost::container::static_vector<std::pair<double, double>, 8> cand;

  const double r1 = std::abs(m1.determinant());
  const double r2 = std::abs(m2.determinant());
  if (std::max(r1, r2) > 1e-9) {
    // Parametrize by the angle whose partner block is invertible.
    const bool param_first = r2 >= r1;
    const Eigen::Matrix2d& mp = param_first ? m1 : m2;
    const Eigen::Matrix2d& mo = param_first ? m2 : m1;
    const Eigen::Matrix2d inv = mo.inverse();
    const Eigen::Vector2d a = inv * d;
    const Eigen::Matrix2d b = -inv * mp;
    const Eigen::Matrix2d g = b.transpose() * b;
    const Eigen::Vector2d ba = b.transpose() * a;
    const double k0 = a.squaredNorm() - 1.0 + 0.5 * (g(0, 0) + g(1, 1));
    const double k1c = 2.0 * ba[0];
    const double k1s = 2.0 * ba[1];
    const double k2c = 0.5 * (g(0, 0) - g(1, 1));
    const double k2s = g(0, 1);
    auto f = [&](double t) {
      return k0 + k1c * std::cos(t) + k1s * std::sin(t) + k2c * std::cos(2 * t) +
             k2s * std::sin(2 * t);
    };
    auto df = [&](double t) {
      return -k1c * std::sin(t) + k1s * std::cos(t) - 2 * k2c * std::sin(2 * t) +
             2 * k2s * std::cos(2 * t);
    };
    bool constant = false;
    auto roots = trig_quadratic_roots(k0, k1c, k1s, k2c, k2s, constant);
    if (constant) {
      if (std::abs(k0) <= 1e-10) roots.push_back(0.0);
    }
    for (double t : roots) {
      for (int it = 0; it < 2; ++it) {
        const double slope = df(t);
        if (std::abs(slope) <= 1e-14) break;
        const double step = f(t) / slope;
        if (!std::isfinite(step) || std::abs(step) > 0.5) break;
        t -= step;
      }
      const Eigen::Vector2d other = a + b * unit(t);
      const double to = std::atan2(other[1], other[0]);
      cand.push_back(param_first ? std::make_pair(t, to) : std::make_pair(to, t));
    }
  } else {
    // Both blocks rank one: eliminate the first angle with a left null vector of m1.
    Eigen::JacobiSVD<Eigen::Matrix2d> svd1(m1, Eigen::ComputeFullU);
    const Eigen::Vector2d w = svd1.matrixU().col(1);
    const Eigen::Vector2d u = svd1.matrixU().col(0);
    const Eigen::Vector2d aw = m2.transpose() * w;
    const double ew = w.dot(d);
    const Sinusoid s2{0.0, aw[0], aw[1]};
    const double rho2 = aw.norm();
    if (rho2 <= 1e-12) throw Error(ErrorKind::DegenerateInput, "constraints not independent");
    if (std::abs(ew) / rho2 > 1.0 + 1e-6) return out;
    for (double t2 : solve_sinusoid(s2, ew, 1.0)) {
      const Eigen::Vector2d au = m1.transpose() * u;
      const double eu = u.dot(d - m2 * unit(t2));
      for (double t1 : solve_sinusoid({0.0, au[0], au[1]}, eu, 1.0)) cand.emplace_back(t1, t2);
    }
  }

  for (auto [t1, t2] : cand) {
    double res = residual(t1, t2);
    for (int it = 0; it < 2 && res > 1e-15; ++it) {
      Eigen::Matrix2d jac;
      jac.col(0) = m1 * Eigen::Vector2d(-std::sin(t1), std::cos(t1));
      jac.col(1) = m2 * Eigen::Vector2d(-std::sin(t2), std::cos(t2));
      const Eigen::Vector2d fval = m1 * unit(t1) + m2 * unit(t2) - d;
      if (std::abs(jac.determinant()) <= 1e-14) break;
      const Eigen::Vector2d step = jac.partialPivLu().solve(fval);
      const double n1 = t1 - step[0];
      const double n2 = t2 - step[1];
      const double nres = residual(n1, n2);
      if (!(nres < res)) break;
      t1 = n1;
      t2 = n2;
      res = nres;
    }
    if (res > 1e-6) continue;
    t1 = normalize_angle(t1);
    t2 = normalize_angle(t2);
    bool dup = false;
    for (const auto& o : out) {
      if (angle_distance(o.t1, t1) < 1e-9 && angle_distance(o.t2, t2) < 1e-9) dup = true;
    }
    if (!dup && out.size() < out.capacity()) out.push_back({t1, t2, res});
  }
  return out;
}

inline double magnitude(std::initializer_list<double> values) {
  double m = 1.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace detail

/// SP1: rotation about k bringing x1 closest to x2.
inline SP1Result sp1(const Vec3& x1, const Vec3& x2, const UnitVec3& k) {
  const detail::Sinusoid s = detail::project_rotation(x2, k, x1);
  const double theta =
      normalize_angle(detail::argmax_sinusoid(s.a, s.b, std::max(1e-300, x1.norm() * x2.norm())));
  const double res = (rodrigues(k, theta) * x1 - x2).norm();
  const double tol = kSubproblemTol * detail::magnitude({x1.norm(), x2.norm()});
  return {SPSolution<1>{{theta}, res <= tol, res}};
}

/// SP2: pair of rotations about k1 and k2 that bring x1 and x2 together.
inline SP2Result sp2(const Vec3& x1, const Vec3& x2, const UnitVec3& k1, const UnitVec3& k2) {
  if (directions_parallel(k1, k2)) {
    throw Error(ErrorKind::DegenerateAxes, "SP2 needs non-parallel rotation axes");
  }
  const double n1 = x1.norm();
  const double n2 = x2.norm();
  const double tol = kSubproblemTol * detail::magnitude({n1, n2});
  SP2Result out;
  auto emit = [&](double t1, double t2) {
    t1 = normalize_angle(t1);
    t2 = normalize_angle(t2);
    const double res = (rodrigues(k1, t1) * x1 - rodrigues(k2, t2) * x2).norm();
    out.push_back({{t1, t2}, res <= tol, res});
  };
  if (n1 <= 1e-300 || n2 <= 1e-300) {
    emit(0.0, 0.0);
    return out;
  }
  const Vec3 u1 = x1 / n1;
  const Vec3 u2 = x2 / n2;
  const double a1 = k1.dot(u1);
  const double a2 = k2.dot(u2);
  const double c = k1.dot(k2);
  const double s2 = 1.0 - c * c;
  const Vec3 base = ((a1 - c * a2) / s2) * k1.vec() + ((a2 - c * a1) / s2) * k2.vec();
  const double g2 = (1.0 - base.squaredNorm()) / s2;
  auto angle_to = [](const Vec3& from, const Vec3& to, const UnitVec3& axis) {
    const detail::Sinusoid s = detail::project_rotation(to, axis, from);
    return detail::argmax_sinusoid(s.a, s.b, 1.0);
  };
  if (g2 >= 0.0) {
    const double gamma = std::sqrt(g2);
    const Vec3 kk = k1.cross(k2);
    const Vec3 va = base + gamma * kk;
    emit(angle_to(u1, va, k1), angle_to(u2, va, k2));
    if (gamma > 1e-12) {
      const Vec3 vb = base - gamma * kk;
      emit(angle_to(u1, vb, k1), angle_to(u2, vb, k2));
    }
  } else {
    // No intersection: closest points of the two circles lie on the great
    // circle through k1 and k2.
    const double s = std::sqrt(s2);
    const Vec3 u = (k2.vec() - c * k1.vec()) / s;
    const double phi = std::atan2(s, c);
    const double rho1 = std::acos(std::clamp(a1, -1.0, 1.0));
    const double rho2 = std::acos(std::clamp(a2, -1.0, 1.0));
    double best = 1e300;
    double b1 = 0.0;
    double b2 = 0.0;
    for (double s1 : {rho1, -rho1}) {
      for (double s2v : {phi + rho2, phi - rho2}) {
        const double dist = angle_distance(s1, s2v);
        if (dist < best - 1e-15) {
          best = dist;
          b1 = s1;
          b2 = s2v;
        }
      }
    }
    const Vec3 v1 = std::cos(b1) * k1.vec() + std::sin(b1) * u;
    const Vec3 v2 = std::cos(b2) * k1.vec() + std::sin(b2) * u;
    emit(angle_to(u1, v1, k1), angle_to(u2, v2, k2));
  }
  // Without an exact solution the least-squares minimizer is reported once.
  if (out.size() == 2 && !out[0].exact && !out[1].exact) {
    if (out[1].residual < out[0].residual) out[0] = out[1];
    out.pop_back();
  }
  detail::sort_by_first_angle(out);
  return out;
}

/// SP3: rotation about k placing R x1 at distance d from x2.
inline SP3Result sp3(const Vec3& x1, const Vec3& x2, const UnitVec3& k, double d) {
  if (d < 0.0) throw Error(ErrorKind::InvalidArgument, "SP3 distance must be non-negative");
  const detail::Sinusoid s = detail::project_rotation(x2, k, x1);
  // ||R x1 - x2||^2 = |x1|^2 + |x2|^2 - 2 (c0 + a cos + b sin)
  const double value = 0.5 * (x1.squaredNorm() + x2.squaredNorm() - d * d);
  const double tol = kSubproblemTol * detail::magnitude({x1.norm(), x2.norm(), d});
  SP3Result out;
  for (double t : detail::solve_sinusoid(s, value, std::max(1e-300, x1.norm() * x2.norm()))) {
    const double res = std::abs((rodrigues(k, t) * x1 - x2).norm() - d);
    out.push_back({{t}, res <= tol, res});
  }
  detail::sort_by_first_angle(out);
  return out;
}

/// SP4: rotation about k such that h^T R x = d.
inline SP4Result sp4(const UnitVec3& h, const Vec3& x, const UnitVec3& k, double d) {
  const detail::Sinusoid s = detail::project_rotation(h, k, x);
  const double tol = kSubproblemTol * detail::magnitude({x.norm(), d});
  SP4Result out;
  for (double t : detail::solve_sinusoid(s, d, std::max(1e-300, x.norm()))) {
    const double res = std::abs(h.dot(rodrigues(k, t) * x) - d);
    out.push_back({{t}, res <= tol, res});
  }
  detail::sort_by_first_angle(out);
  return out;
}

/// SP6: two angles satisfying two projected rotation constraints along h.
inline SP6Result sp6(const UnitVec3& h, const UnitVec3& k1, const UnitVec3& k2, const Vec3& x1,
                     const Vec3& x2, const Vec3& x3, const Vec3& x4, double d1, double d2) {
  const detail::Sinusoid s1 = detail::project_rotation(h, k1, x1);
  const detail::Sinusoid s2 = detail::project_rotation(h, k2, x2);
  const detail::Sinusoid s3 = detail::project_rotation(h, k1, x3);
  const detail::Sinusoid s4 = detail::project_rotation(h, k2, x4);
  Eigen::Matrix<double, 2, 4> m;
  m << s1.a, s1.b, s2.a, s2.b, s3.a, s3.b, s4.a, s4.b;
  const Eigen::Vector2d rhs(d1 - s1.c0 - s2.c0, d2 - s3.c0 - s4.c0);
  const double tol = kQuarticTol * detail::magnitude({x1.norm(), x2.norm(), x3.norm(), x4.norm(),
                                                      d1, d2});
  SP6Result out;
  for (const auto& p : detail::solve_circle_pair(m, rhs)) {
    const Rot3 r1 = rodrigues(k1, p.t1);
    const Rot3 r2 = rodrigues(k2, p.t2);
    const double e1 = h.dot(r1 * x1) + h.dot(r2 * x2) - d1;
    const double e2 = h.dot(r1 * x3) + h.dot(r2 * x4) - d2;
    const double res = std::hypot(e1, e2);
    out.push_back({{p.t1, p.t2}, res <= tol, res});
  }
  detail::sort_by_first_angle(out);
  return out;
}

/// SP5: three angles closing p0 + R(k1,t1) p1 = R(k2,t2)(p2 + R(k3,t3) p3).
///
/// Projecting onto k2 and comparing norms removes t2 and leaves two equations
/// that are linear in (cos t1, sin t1, cos t3, sin t3); t2 then follows from SP1.
inline SP5Result sp5(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3,
                     const UnitVec3& k1, const UnitVec3& k2, const UnitVec3& k3) {
  if (p1.norm() <= 1e-12 || p3.norm() <= 1e-12) {
    throw Error(ErrorKind::DegenerateInput, "SP5 needs non-zero p1 and p3");
  }
  // u(t1) = u0 + U c1, v(t3) = v0 + V c3
  const Vec3 u0 = p0 + k1.vec() * k1.dot(p1);
  const Vec3 ua = p1 - k1.vec() * k1.dot(p1);
  const Vec3 ub = k1.cross(p1);
  const Vec3 v0 = p2 + k3.vec() * k3.dot(p3);
  const Vec3 va = p3 - k3.vec() * k3.dot(p3);
  const Vec3 vb = k3.cross(p3);
  Eigen::Matrix<double, 2, 4> m;
  m << k2.dot(ua), k2.dot(ub), -k2.dot(va), -k2.dot(vb),  //
      2.0 * u0.dot(ua), 2.0 * u0.dot(ub), -2.0 * v0.dot(va), -2.0 * v0.dot(vb);
  const Eigen::Vector2d rhs(k2.dot(v0 - u0), v0.squaredNorm() + va.squaredNorm() -
                                                 u0.squaredNorm() - ua.squaredNorm());
  const double tol =
      kQuarticTol * detail::magnitude({p0.norm(), p1.norm(), p2.norm(), p3.norm()});
  SP5Result out;
  for (const auto& p : detail::solve_circle_pair(m, rhs)) {
    const Vec3 u = p0 + rodrigues(k1, p.t1) * p1;
    const Vec3 v = p2 + rodrigues(k3, p.t2) * p3;
    const double t2 = sp1(v, u, k2)[0].angles[0];
    const double res = (u - rodrigues(k2, t2) * v).norm();
    out.push_back({{p.t1, t2, p.t2}, res <= tol, res});
  }
  detail::sort_by_first_angle(out);
  return out;
}

}  // namespace geoik
