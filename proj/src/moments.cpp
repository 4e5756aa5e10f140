#include "mgarch/moments.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace mgarch {

std::string_view to_string(PsiMethod m) {
  switch (m) {
    case PsiMethod::HacBartlett: return "hac-bartlett";
    case PsiMethod::SphericalBlock: return "spherical-block";
  }
  return "unknown";
}

namespace {

Matrix lagged_cross(const Matrix& xc, Index lag) {
  const Index n = xc.rows();
  // sum_t (x_{t+lag} - h)(x_t - h)^T
  return xc.bottomRows(n - lag).transpose() * xc.topRows(n - lag);
}

}  // namespace

std::vector<Matrix> sample_autocovariances(const Matrix& x, int max_lag) {
  const Index n = x.rows();
  if (max_lag < 0) throw Error(ErrorCode::InvalidInput, "sample_autocovariances: negative lag");
  if (n < max_lag + 2) {
    throw Error(ErrorCode::InsufficientData, "sample_autocovariances: need at least max_lag + 2 observations");
  }
  const Vector h = x.colwise().mean();
  const Matrix xc = x.rowwise() - h.transpose();
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(max_lag) + 1);
  for (Index k = 0; k <= max_lag; ++k) {
    out.push_back(lagged_cross(xc, k) / static_cast<double>(n - k));
  }
  out[0] = symmetrize(out[0]);
  return out;
}

MomentSet sample_moments(const Matrix& x) {
  if (x.rows() < 4) {
    throw Error(ErrorCode::InsufficientData, "sample_moments: need at least 4 observations, got " +
                                                 std::to_string(x.rows()));
  }
  if (dim_from_vech_size(x.cols()) < 0) {
    throw Error(ErrorCode::InvalidInput, "sample_moments: column count must be a triangular number");
  }
  if (!x.allFinite()) throw Error(ErrorCode::InvalidInput, "sample_moments: non-finite data");
  const auto m = sample_autocovariances(x, 2);
  return MomentSet{x.colwise().mean(), m[0], m[1], m[2]};
}

Index default_bandwidth(Index n) {
  return static_cast<Index>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

bool clip_psd(Matrix& m, double* min_eig) {
  m = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Vector& ev = es.eigenvalues();
  if (min_eig) *min_eig = ev.size() ? ev.minCoeff() : 0.0;
  if (ev.size() == 0 || ev.minCoeff() >= 0) return false;
  m = es.eigenvectors() * ev.cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
  m = symmetrize(m);
  // Rounding-level negatives are clipped silently.
  return ev.minCoeff() < -1e-10 * ev.cwiseAbs().maxCoeff();
}

PsiEstimate hac_psi(const Matrix& x, std::optional<Index> bandwidth) {
  const Index n = x.rows();
  const Index dbar = x.cols();
  if (dim_from_vech_size(dbar) < 0) {
    throw Error(ErrorCode::InvalidInput, "hac_psi: column count must be a triangular number");
  }
  const Index bw = bandwidth.value_or(default_bandwidth(n));
  if (bw < 0) throw Error(ErrorCode::InvalidInput, "hac_psi: bandwidth must be non-negative");
  if (n < 4 || n <= 10 * bw) {
    throw Error(ErrorCode::InsufficientData,
                "hac_psi: need n > 10 * bandwidth (n=" + std::to_string(n) + ", bandwidth=" + std::to_string(bw) + ")");
  }

  const Vector h = x.colwise().mean();
  const Matrix xc = x.rowwise() - h.transpose();
  const Index rows = n - 2;
  const Index dim = dbar + 3 * dbar * dbar;
  Matrix g(rows, dim);
  g.leftCols(dbar) = x.topRows(rows);
  for (Index lag = 0; lag < 3; ++lag) {
    const Index off = dbar + lag * dbar * dbar;
    // column i + j*dbar of block `lag` holds (x_{t+lag} - h)_i (x_t - h)_j
    for (Index j = 0; j < dbar; ++j) {
      for (Index i = 0; i < dbar; ++i) {
        g.col(off + i + j * dbar) =
            xc.col(i).segment(lag, rows).cwiseProduct(xc.col(j).head(rows));
      }
    }
  }
  g.rowwise() -= g.colwise().mean();

  const double denom = static_cast<double>(rows);
  Matrix psi = g.transpose() * g / denom;
  for (Index k = 1; k <= bw; ++k) {
    const double w = 1.0 - static_cast<double>(k) / static_cast<double>(bw + 1);
    const Matrix gk = g.bottomRows(rows - k).transpose() * g.topRows(rows - k) / denom;
    psi += w * (gk + gk.transpose());
  }

  PsiEstimate out;
  out.bandwidth = bw;
  out.method = PsiMethod::HacBartlett;
  out.clipped = clip_psd(psi, &out.min_eigenvalue);
  out.matrix = std::move(psi);
  return out;
}

Matrix spherical_cov_h(const MomentSet& ms, const Matrix& phi) {
  ms.validate();
  if (phi.rows() != ms.dbar() || phi.cols() != ms.dbar()) {
    throw Error(ErrorCode::InvalidInput, "spherical_cov_h: Phi must be dbar x dbar");
  }
  const double rho = spectral_radius(phi);
  if (rho >= 1.0) {
    throw Error(ErrorCode::NonStationary, "spherical_cov_h: spectral radius of Phi is " + std::to_string(rho));
  }
  const Matrix tail = solve(Matrix::Identity(phi.rows(), phi.cols()) - phi, ms.M1);
  return ms.M0 + tail + tail.transpose();
}

PsiEstimate spherical_psi(const Matrix& x, const MomentSet& ms, const Matrix& phi, std::optional<Index> bandwidth) {
  PsiEstimate out = hac_psi(x, bandwidth);
  const Index dbar = ms.dbar();
  const Index rest = out.matrix.rows() - dbar;
  out.matrix.topLeftCorner(dbar, dbar) = symmetrize(spherical_cov_h(ms, phi));
  out.matrix.topRightCorner(dbar, rest).setZero();
  out.matrix.bottomLeftCorner(rest, dbar).setZero();
  out.method = PsiMethod::SphericalBlock;
  double min_eig = 0;
  out.clipped = clip_psd(out.matrix, &min_eig) || out.clipped;
  out.min_eigenvalue = std::min(out.min_eigenvalue, min_eig);
  return out;
}

}  // namespace mgarch
