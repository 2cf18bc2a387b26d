#pragma once

// Independent reference computations used by the tests. None of them share
// code with the library's integrators or elimination.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lienard/field.hpp"
#include "lienard/poly.hpp"

namespace lienard::testing {

/// Periodic orbit through the positive y-axis by Newton shooting on (s, T),
/// fixed-step classical RK4 with the variational equations.
struct ShootingOrbit {
  double s = 0.0;
  double period = 0.0;
  /// trace(monodromy) - 1: the nontrivial multiplier, independent of the
  /// divergence integral.
  double multiplier = 0.0;
  bool converged = false;
};

namespace detail {

using State6 = std::array<double, 6>;  // x, y, then the 2x2 monodromy row-major

inline State6 variational_rhs(const UniPoly& F, const UniPoly& dF, const State6& u) {
  const double x = u[0];
  const double y = u[1];
  const double a = -dF.eval(x);  // d(y - F)/dx
  // Jacobian [[a, 1], [-1, 0]] times Phi.
  return {y - F.eval(x), -x, a * u[2] + u[4], a * u[3] + u[5], -u[2], -u[3]};
}

inline State6 rk4_flow(const UniPoly& F, const UniPoly& dF, State6 u, double t, int steps) {
  const double h = t / steps;
  auto axpy = [](const State6& a, double s, const State6& b) {
    State6 r;
    for (int i = 0; i < 6; ++i) r[i] = a[i] + s * b[i];
    return r;
  };
  for (int k = 0; k < steps; ++k) {
    const State6 k1 = variational_rhs(F, dF, u);
    const State6 k2 = variational_rhs(F, dF, axpy(u, h / 2, k1));
    const State6 k3 = variational_rhs(F, dF, axpy(u, h / 2, k2));
    const State6 k4 = variational_rhs(F, dF, axpy(u, h, k3));
    for (int i = 0; i < 6; ++i) u[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return u;
}

}  // namespace detail

inline ShootingOrbit shooting_orbit(const LienardField& field, double s0, double T0, int steps = 400000) {
  const UniPoly& F = field.F();
  const UniPoly dF = F.derivative();
  ShootingOrbit out{s0, T0, 0.0, false};
  for (int it = 0; it < 30; ++it) {
    const detail::State6 u = detail::rk4_flow(F, dF, {0.0, out.s, 1, 0, 0, 1}, out.period, steps);
    const double gx = u[0];
    const double gy = u[1] - out.s;
    const double vx = u[1] - F.eval(u[0]);
    const double vy = -u[0];
    // d/ds column: Phi * (0, 1) - (0, 1); d/dT column: field at the end.
    Eigen::Matrix2d J;
    J << u[3], vx, u[5] - 1.0, vy;
    const Eigen::Vector2d step = J.fullPivLu().solve(Eigen::Vector2d(-gx, -gy));
    out.s += step[0];
    out.period += step[1];
    out.multiplier = u[2] + u[5] - 1.0;
    if (std::abs(step[0]) < 1e-14 * out.s && std::abs(step[1]) < 1e-14 * out.period) {
      out.converged = true;
      break;
    }
  }
  const detail::State6 u = detail::rk4_flow(F, dF, {0.0, out.s, 1, 0, 0, 1}, out.period, steps);
  out.multiplier = u[2] + u[5] - 1.0;
  return out;
}

/// Numerical rank by SVD with threshold rel * sigma_max.
inline std::size_t svd_rank(const Eigen::MatrixXd& m, double rel = 1e-8) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > rel * sv[0]) ++r;
  }
  return r;
}

inline Eigen::MatrixXd to_eigen(const std::vector<std::vector<Rational>>& m, std::size_t cols) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m[r][c].to_double();
  }
  return out;
}

/// Random polynomial of total degree <= degree with small integer
/// coefficients and no constant term.
inline BiPoly random_bipoly(std::mt19937_64& rng, int degree, int bound = 3) {
  std::uniform_int_distribution<int> coeff(-bound, bound);
  BiPoly out;
  for (const Monomial& m : monomials_up_to(degree)) {
    if (m.degree() == 0) continue;
    const int c = coeff(rng);
    if (c != 0) out += BiPoly::monomial(m.i, m.j, c);
  }
  if (out.is_zero()) out = BiPoly::x();
  return out;
}

/// Spearman rank correlation (no ties expected).
inline double rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&v](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> r(v.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r[idx[k]] = static_cast<double>(k);
    return r;
  };
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double d2 = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d2 += (ra[k] - rb[k]) * (ra[k] - rb[k]);
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

}  // namespace lienard::testing
