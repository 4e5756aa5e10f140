#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mgarch/model.hpp"

namespace mgarch {

/// Autocovariances of the moving-average part j_t = x_t - Phi x_{t-1}.
struct GammaState {
  Matrix phi;
  Matrix gamma0;             // symmetrized on construction
  Matrix gamma1;
  double gamma0_asymmetry = 0;  // |G0 - G0^T|_max / max(1, |G0|_max) before symmetrization

  Index dbar() const { return phi.rows(); }
};

enum class PhiMethod { Lag1, Weighted, Lstsq };

std::string_view to_string(PhiMethod m);
PhiMethod phi_method_from_string(std::string_view s);

struct EstimateOptions {
  PhiMethod phi_method = PhiMethod::Lag1;
  int lags = 1;                        // number of ratios M_{k+1} M_k^{-1} used by weighted / lstsq
  std::vector<double> weights;         // empty: equal weights
  bool project_stationary = false;
  double projection_delta = 1e-3;
  ToleranceConfig tol{};
};

struct EstimateReport {
  GarchSpec spec;
  Matrix sigma;
  Matrix phi;
  MomentSet moments;
  GammaState gammas;
  ComplexVector p_eigenvalues;
  ComplexVector b_eigenvalues;
  double residual_pme = 0;
  double residual_nme = 0;
  double sigma_symmetry_gap = 0;
  bool sigma_positive = false;
  Diagnostics warnings;
};

struct SolventResult {
  Matrix B;
  ComplexVector selected_eigenvalues;
  ComplexMatrix selected_eigenvectors;  // top halves u_i, one per column
  ComplexVector p_eigenvalues;          // all 2 dbar eigenvalues of P
  double imag_residue = 0;              // |Im B|_F / max(1, |B|_F) before it was dropped
};

/// Gamma0 and Gamma1 from the moments for a given Phi.
GammaState gammas(const MomentSet& ms, const Matrix& phi, const ToleranceConfig& tol = default_tolerances());

/// Lag-1 route: Phi = M2 M1^{-1}.
GammaState gammas(const MomentSet& ms, const ToleranceConfig& tol = default_tolerances());

/// Companion matrix [[0, I], [-G1^{-1} G1^T, -G1^{-1} G0]].
Matrix build_p(const GammaState& gs, const ToleranceConfig& tol = default_tolerances());

/// Builds B = U^{-T} D U^T from the given eigenpairs of P (top halves u_i in the
/// columns of `u`). Any dbar eigenpairs with invertible U give a solvent.
Matrix solvent_from_eigenpairs(const ComplexVector& lambda, const ComplexMatrix& u,
                               const ToleranceConfig& tol = default_tolerances(), double* imag_residue = nullptr,
                               bool require_real = true);

/// The stable solvent: the dbar eigenvalues of P inside the unit circle.
SolventResult solve_b(const GammaState& gs, const ToleranceConfig& tol = default_tolerances());

/// Convenience overload with an explicit unimodular tolerance.
SolventResult solve_b(const GammaState& gs, double tol_unimodular);

struct SigmaResult {
  Matrix sigma;
  double symmetry_gap = 0;
  double residual_nme = 0;
  bool from_gamma0 = false;  // B was numerically zero
};

/// Sigma = -B^{-1} Gamma1, symmetrized.
SigmaResult recover_sigma(const Matrix& b, const GammaState& gs, const ToleranceConfig& tol = default_tolerances());

/// |G1^T + G0 B^T + G1 (B^T)^2|_F
double pme_residual(const Matrix& b, const GammaState& gs);

/// |G0 - Sigma - G1 Sigma^{-1} G1^T|_F
double nme_residual(const Matrix& sigma, const GammaState& gs);

/// Least-squares Phi over lags 1..K: minimizes
/// |Phi [w_1 M_1 ... w_K M_K] - [w_1 M_2 ... w_K M_{K+1}]|_F.
/// `autocov` holds M_1 .. M_{K+1} (at least two entries).
Matrix phi_lstsq(const std::vector<Matrix>& autocov, const std::vector<double>& weights,
                 const ToleranceConfig& tol = default_tolerances());

/// Convex combination sum_k w_k M_{k+1} M_k^{-1} / sum_k w_k over the same input.
Matrix phi_weighted(const std::vector<Matrix>& autocov, const std::vector<double>& weights,
                    const ToleranceConfig& tol = default_tolerances());

struct ProjectionResult {
  Matrix phi;
  bool changed = false;
  bool fallback_scaling = false;
};

/// Pulls eigenvalues with |lambda| >= 1 to modulus 1 - delta, keeping phase and
/// eigenvectors. Falls back to uniform scaling when the eigenvectors are ill conditioned.
ProjectionResult project_stationary(const Matrix& phi, double delta = 1e-3,
                                    const ToleranceConfig& tol = default_tolerances());

/// Full closed-form estimator from a moment set.
EstimateReport estimate(const MomentSet& ms, const EstimateOptions& options = {});

/// Full closed-form estimator from data rows x_t = vech(y_t y_t^T).
EstimateReport estimate(const Matrix& x, const EstimateOptions& options = {});

/// Estimator from a moment set with extra autocovariances M_3.. for
/// the weighted / lstsq Phi routes; `autocov` holds M_0 .. M_{K+1}.
EstimateReport estimate(const Vector& h, const std::vector<Matrix>& autocov, const EstimateOptions& options);

}  // namespace mgarch
