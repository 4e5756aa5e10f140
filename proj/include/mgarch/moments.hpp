#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mgarch/model.hpp"

namespace mgarch {

enum class PsiMethod { HacBartlett, SphericalBlock };

std::string_view to_string(PsiMethod m);

/// Long-run covariance of the stacked moment process
///   g_t = (x_t; vec (x_t-h)(x_t-h)^T; vec (x_{t+1}-h)(x_t-h)^T; vec (x_{t+2}-h)(x_t-h)^T),
/// of size (dbar + 3 dbar^2) square.
struct PsiEstimate {
  Matrix matrix;
  Index bandwidth = 0;
  PsiMethod method = PsiMethod::HacBartlett;
  bool clipped = false;          // negative eigenvalues were set to zero
  double min_eigenvalue = 0;     // before clipping
};

/// Sample mean and lag-0/1/2 autocovariances with divisors n, n-1, n-2.
MomentSet sample_moments(const Matrix& x);

/// Sample autocovariances M_0 .. M_maxlag, lag k using divisor n-k, all
/// centered at the full-sample mean.
std::vector<Matrix> sample_autocovariances(const Matrix& x, int max_lag);

/// floor(4 (n/100)^(2/9)).
Index default_bandwidth(Index n);

/// Bartlett-kernel HAC estimate of the long-run covariance of g_t.
PsiEstimate hac_psi(const Matrix& x, std::optional<Index> bandwidth = std::nullopt);

/// Block-diagonal alternative valid under spherical noise: the h block is
/// spherical_cov_h, the moment block comes from HAC, the cross block is zero.
PsiEstimate spherical_psi(const Matrix& x, const MomentSet& ms, const Matrix& phi,
                          std::optional<Index> bandwidth = std::nullopt);

/// Cov[h] = M0 + sum_k M_k + sum_k M_k^T with M_k = Phi^{k-1} M1, in closed form
/// M0 + (I - Phi)^{-1} M1 + M1^T (I - Phi^T)^{-1}.
Matrix spherical_cov_h(const MomentSet& ms, const Matrix& phi);

/// Symmetrizes and clips negative eigenvalues at zero. Returns true if an
/// eigenvalue below -1e-10 * max|eig| was clipped; `min_eig` receives the
/// smallest eigenvalue before clipping.
bool clip_psd(Matrix& m, double* min_eig = nullptr);

}  // namespace mgarch
