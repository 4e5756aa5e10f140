#pragma once

#include <string>
#include <vector>

#include "mgarch/algebra.hpp"

namespace mgarch {

/// Unrestricted vech-GARCH(1,1):
///   vech(H_t) = c + A vech(y_{t-1} y_{t-1}^T) + B vech(H_{t-1}).
struct GarchSpec {
  Index d = 1;
  Vector c;
  Matrix A;
  Matrix B;

  Index dbar() const { return vech_size(d); }

  /// Throws InvalidInput when shapes disagree with d.
  void validate() const;

  static GarchSpec scalar(double c, double a, double b);
};

/// Sufficient statistics of the closed-form estimator: the mean of
/// x_t = vech(y_t y_t^T) and its autocovariances at lags 0, 1, 2.
struct MomentSet {
  Vector h;
  Matrix M0;
  Matrix M1;
  Matrix M2;

  Index dbar() const { return h.size(); }
  void validate() const;
};

struct Warning {
  std::string code;
  std::string message;
};

struct Diagnostics {
  bool stationary = false;
  double phi_spectral_radius = 0;
  bool invertible = false;
  double b_spectral_radius = 0;
  bool h_positive = false;
  std::vector<Warning> warnings;

  void warn(std::string code, std::string message) {
    warnings.push_back({std::move(code), std::move(message)});
  }
};

/// A + B, the autoregressive matrix of the VARMA(1,1) form of x_t.
Matrix phi(const GarchSpec& spec);

/// h = (I - Phi)^{-1} c. NonStationary when rho(Phi) >= 1.
Vector uncond_h(const GarchSpec& spec, const ToleranceConfig& tol = default_tolerances());

/// Autocovariances of x_t implied by the model for a given innovation
/// covariance Sigma = E[xi_t xi_t^T].
MomentSet population_moments(const GarchSpec& spec, const Matrix& sigma,
                             const ToleranceConfig& tol = default_tolerances());

/// Population autocovariances M_0 .. M_maxlag, using M_{k+1} = Phi M_k for k >= 1.
std::vector<Matrix> population_autocovariances(const GarchSpec& spec, const Matrix& sigma, int max_lag,
                                               const ToleranceConfig& tol = default_tolerances());

/// Stationarity, invertibility and positivity of unvech(h). Never throws
/// on numerical trouble; problems land in `warnings`.
Diagnostics diagnostics(const GarchSpec& spec, const ToleranceConfig& tol = default_tolerances());

}  // namespace mgarch
