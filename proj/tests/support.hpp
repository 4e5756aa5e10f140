#pragma once

// Test-only generators and independent oracles. Nothing here calls into the
// code path it is used to check.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mgarch/model.hpp"
#include "mgarch/solver.hpp"

namespace mgarch::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = u(rng);
  return m;
}

inline Matrix random_symmetric(std::mt19937_64& rng, Index n) {
  const Matrix m = random_matrix(rng, n, n);
  return (m + m.transpose()) / 2;
}

inline Matrix random_spd(std::mt19937_64& rng, Index n, double floor = 0.5) {
  const Matrix w = random_matrix(rng, n, n);
  return w * w.transpose() / static_cast<double>(n) + floor * Matrix::Identity(n, n);
}

/// Diagonal-dominant B with rho(B) <= 0.9, small A (entries <= 0.1 / dbar) and
/// c chosen so that unvech(h) is the identity.
// d=2 reference spec: unconditional covariance [[1, 0.3], [0.3, 1]], light enough tails for sampling studies
inline GarchSpec reference_spec() {
  GarchSpec s;
  s.d = 2;
  s.A = (Matrix(3, 3) << 0.10, 0.01, 0.00,
                         0.01, 0.09, 0.01,
                         0.00, 0.01, 0.10).finished();
  s.B = 0.6 * Matrix::Identity(3, 3);
  s.c = (Matrix::Identity(3, 3) - s.A - s.B) * (Vector(3) << 1.0, 0.3, 1.0).finished();
  return s;
}

inline GarchSpec random_spec(std::mt19937_64& rng, Index d) {
  const Index n = vech_size(d);
  std::uniform_real_distribution<double> diag_b(0.3, 0.85), off_b(-0.05 / n, 0.05 / n);
  std::uniform_real_distribution<double> diag_a(0.5, 1.0), off_a(0.0, 0.3);
  const double amax = 0.1 / static_cast<double>(n);
  for (;;) {
    GarchSpec s;
    s.d = d;
    s.B.resize(n, n);
    s.A.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        s.B(i, j) = i == j ? diag_b(rng) : off_b(rng);
        s.A(i, j) = amax * (i == j ? diag_a(rng) : off_a(rng));
      }
    }
    const double rho_b = Eigen::EigenSolver<Matrix>(s.B, false).eigenvalues().cwiseAbs().maxCoeff();
    if (rho_b > 0.9) s.B *= 0.9 / rho_b;
    const Matrix phi = s.A + s.B;
    if (Eigen::EigenSolver<Matrix>(phi, false).eigenvalues().cwiseAbs().maxCoeff() >= 0.97) continue;
    Vector h_id(n);
    Index k = 0;
    for (Index j = 0; j < d; ++j)
      for (Index i = j; i < d; ++i) h_id(k++) = i == j ? 1.0 : 0.0;
    s.c = (Matrix::Identity(n, n) - phi) * h_id;
    return s;
  }
}

/// Root of g1 b^2 + g0 b + g1 = 0 inside the unit circle, by the quadratic formula
/// in its cancellation-free form.
inline double scalar_stable_root(double g0, double g1) {
  const double disc = g0 * g0 - 4 * g1 * g1;
  const double q = -0.5 * (g0 + std::copysign(std::sqrt(disc), g0));
  const double r1 = q / g1;
  const double r2 = g1 / q;
  return std::abs(r1) < 1 ? r1 : r2;
}

/// X = sum_k B^k Q (B^T)^k, truncated once the terms vanish.
inline Matrix dlyap_series(const Matrix& b, const Matrix& q) {
  Matrix x = q;
  Matrix term = q;
  for (int k = 0; k < 100000; ++k) {
    term = b * term * b.transpose();
    x += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18 * (1 + x.cwiseAbs().maxCoeff())) break;
  }
  return x;
}

/// Sigma = E[xi_t xi_t^T] of a Gaussian vech-GARCH(1,1). Conditionally on H,
/// Cov(y_i y_j, y_p y_q) = H_ip H_jq + H_iq H_jp, so Sigma is linear in
/// S = E[vech(H) vech(H)^T] = Cov(h) + h h^T, and Cov(h) = Phi Cov(h) Phi^T + A Sigma A^T.
/// Solved by fixed-point iteration, which converges when fourth moments exist.
inline Matrix gaussian_sigma(const GarchSpec& spec) {
  const Index d = spec.d, n = spec.dbar();
  std::vector<Index> idx(static_cast<std::size_t>(d * d));
  Index k = 0;
  for (Index j = 0; j < d; ++j)
    for (Index i = j; i < d; ++i) {
      idx[static_cast<std::size_t>(i + j * d)] = k;
      idx[static_cast<std::size_t>(j + i * d)] = k;
      ++k;
    }
  const auto at = [&](Index i, Index j) { return idx[static_cast<std::size_t>(i + j * d)]; };
  std::vector<std::pair<Index, Index>> pairs;
  for (Index j = 0; j < d; ++j)
    for (Index i = j; i < d; ++i) pairs.emplace_back(i, j);

  const Matrix phi = spec.A + spec.B;
  const Vector mu = (Matrix::Identity(n, n) - phi).lu().solve(spec.c);
  Matrix cov_h = Matrix::Zero(n, n);
  Matrix sigma = Matrix::Zero(n, n);
  for (int iter = 0; iter < 100000; ++iter) {
    const Matrix s = cov_h + mu * mu.transpose();
    Matrix next(n, n);
    for (Index a = 0; a < n; ++a) {
      const auto [i, j] = pairs[static_cast<std::size_t>(a)];
      for (Index b = 0; b < n; ++b) {
        const auto [p, q] = pairs[static_cast<std::size_t>(b)];
        next(a, b) = s(at(i, p), at(j, q)) + s(at(i, q), at(j, p));
      }
    }
    const double change = (next - sigma).cwiseAbs().maxCoeff();
    sigma = next;
    cov_h = dlyap_series(phi, spec.A * sigma * spec.A.transpose());
    if (change < 1e-15 * (1 + sigma.cwiseAbs().maxCoeff())) break;
  }
  return sigma;
}

/// Autocovariance with an explicit double loop and divisor n - lag.
inline Matrix brute_autocov(const Matrix& x, Index lag) {
  const Index n = x.rows(), p = x.cols();
  Vector mean = Vector::Zero(p);
  for (Index t = 0; t < n; ++t) mean += x.row(t).transpose();
  mean /= static_cast<double>(n);
  Matrix acc = Matrix::Zero(p, p);
  for (Index t = 0; t + lag < n; ++t) {
    for (Index i = 0; i < p; ++i)
      for (Index j = 0; j < p; ++j) acc(i, j) += (x(t + lag, i) - mean(i)) * (x(t, j) - mean(j));
  }
  return acc / static_cast<double>(n - lag);
}

/// The estimator as a black box from the stacked moment vector to (c, vec A, vec B).
inline Vector estimator_map(const Vector& m, Index dbar) {
  const Index sq = dbar * dbar;
  MomentSet ms;
  ms.h = m.head(dbar);
  ms.M0 = Eigen::Map<const Matrix>(m.data() + dbar, dbar, dbar);
  ms.M1 = Eigen::Map<const Matrix>(m.data() + dbar + sq, dbar, dbar);
  ms.M2 = Eigen::Map<const Matrix>(m.data() + dbar + 2 * sq, dbar, dbar);
  const EstimateReport rep = estimate(ms);
  Vector out(dbar + 2 * sq);
  out.head(dbar) = rep.spec.c;
  out.segment(dbar, sq) = Eigen::Map<const Vector>(rep.spec.A.data(), sq);
  out.segment(dbar + sq, sq) = Eigen::Map<const Vector>(rep.spec.B.data(), sq);
  return out;
}

inline Vector stack_moments(const MomentSet& ms) {
  const Index n = ms.dbar(), sq = n * n;
  Vector v(n + 3 * sq);
  v.head(n) = ms.h;
  v.segment(n, sq) = Eigen::Map<const Vector>(ms.M0.data(), sq);
  v.segment(n + sq, sq) = Eigen::Map<const Vector>(ms.M1.data(), sq);
  v.segment(n + 2 * sq, sq) = Eigen::Map<const Vector>(ms.M2.data(), sq);
  return v;
}

/// Central differences with step 1e-6 (1 + |entry|).
template <typename F>
Matrix fd_jacobian(F&& f, const Vector& at) {
  const Vector f0 = f(at);
  Matrix jac(f0.size(), at.size());
  for (Index k = 0; k < at.size(); ++k) {
    const double step = 1e-6 * (1 + std::abs(at(k)));
    Vector up = at, dn = at;
    up(k) += step;
    dn(k) -= step;
    jac.col(k) = (f(up) - f(dn)) / (2 * step);
  }
  return jac;
}

inline double max_rel_error(const Matrix& approx, const Matrix& exact) {
  return (approx - exact).cwiseAbs().maxCoeff() / std::max(1e-300, exact.cwiseAbs().maxCoeff());
}

/// Scalar closed-form Jacobian of (c, a, b) with respect to (h, M0, M1, M2),
/// by hand differentiation of phi = M2/M1, the scalar Gammas and the implicit
/// root of g1 b^2 + g0 b + g1 = 0.
inline Matrix scalar_symbolic_jacobian(double h, double m0, double m1, double m2) {
  const double phi = m2 / m1;
  const double g0 = m0 - 2 * m1 * phi + phi * phi * m0;
  const double g1 = m1 - phi * m0;
  const double b = scalar_stable_root(g0, g1);

  // d phi / d(h, m0, m1, m2)
  const double dphi[4] = {0, 0, -m2 / (m1 * m1), 1 / m1};
  // partials of g0, g1 holding phi fixed, then add the phi channel
  const double g0_m0 = 1 + phi * phi, g0_m1 = -2 * phi, g0_phi = -2 * m1 + 2 * phi * m0;
  const double g1_m0 = -phi, g1_m1 = 1, g1_phi = -m0;
  double dg0[4], dg1[4];
  for (int k = 0; k < 4; ++k) {
    dg0[k] = g0_phi * dphi[k];
    dg1[k] = g1_phi * dphi[k];
  }
  dg0[1] += g0_m0;
  dg0[2] += g0_m1;
  dg1[1] += g1_m0;
  dg1[2] += g1_m1;
  // F(b, g0, g1) = g1 b^2 + g0 b + g1
  const double fb = 2 * g1 * b + g0;
  Matrix jac(3, 4);
  for (int k = 0; k < 4; ++k) {
    const double db = -(b * dg0[k] + (b * b + 1) * dg1[k]) / fb;
    const double dc = -dphi[k] * h + (k == 0 ? (1 - phi) : 0.0);
    jac(0, k) = dc;
    jac(1, k) = dphi[k] - db;
    jac(2, k) = db;
  }
  return jac;
}

}  // namespace mgarch::testing
