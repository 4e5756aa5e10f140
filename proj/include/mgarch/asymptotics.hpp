#pragma once

#include <string>
#include <vector>

#include "mgarch/moments.hpp"
#include "mgarch/solver.hpp"

namespace mgarch {

/// Everything the derivative formulas reuse, computed in one pass from a
/// single moment set with the lag-1 Phi route.
struct JacobianState {
  Vector h;
  Matrix M0, M1, M2;
  Matrix phi, gamma0, gamma1;
  Matrix B, sigma;

  Index dbar() const { return h.size(); }
};

JacobianState jacobian_state(const MomentSet& ms, const ToleranceConfig& tol = default_tolerances());

/// First-order perturbation of the moments.
struct MomentPerturbation {
  Vector dh;
  Matrix dM0, dM1, dM2;
};

/// Intermediate derivatives; the last three are the parameter perturbation.
struct ParameterPerturbation {
  Matrix dPhi, dGamma0, dGamma1, dSigma;
  Vector dc;
  Matrix dA, dB;
};

/// Directional derivative of the estimator map (h, M0, M1, M2) -> (c, A, B):
///   dPhi   = dM2 M1^{-1} - Phi dM1 M1^{-1}
///   dG1    = dM1 - dPhi M0 - Phi dM0
///   dG0    = derivative of M0 - M1 Phi^T - Phi M1^T + Phi M0 Phi^T (symmetrized)
///   dSigma - B dSigma B^T = dG0 + dG1 B^T + B dG1^T
///   dB     = -(dG1 + B dSigma) Sigma^{-1}
///   dA     = dPhi - dB,  dc = -dPhi h + (I - Phi) dh
ParameterPerturbation jacobian_action(const JacobianState& js, const MomentPerturbation& dm,
                                      const ToleranceConfig& tol = default_tolerances());

/// Full Jacobian, (dbar + 2 dbar^2) x (dbar + 3 dbar^2). Columns follow the
/// moment vector (h, vec M0, vec M1, vec M2), rows the parameter vector
/// (c, vec A, vec B); vec is column-major.
Matrix jacobian_matrix(const JacobianState& js, const ToleranceConfig& tol = default_tolerances());

/// Stacks (c, vec A, vec B).
Vector parameter_vector(const GarchSpec& spec);

/// Names matching parameter_vector: "c[i]", "A[i][j]", "B[i][j]".
std::vector<std::string> parameter_names(Index dbar);

/// Unpacks a stacked moment vector (h, vec M0, vec M1, vec M2).
MomentPerturbation unpack_moments(const Vector& v, Index dbar);

struct AsymptoticReport {
  Matrix jacobian;
  Matrix xi;
  Vector std_errors;
  PsiMethod psi_method = PsiMethod::HacBartlett;
  Index n = 0;
  bool xi_clipped = false;
  bool psi_clipped = false;
  // Xi relies on eighth moments of y_t, which are assumed, not checked.
  bool moment_assumption_unverified = true;
};

/// Xi = J Psi J^T and standard errors sqrt(diag(Xi) / n).
AsymptoticReport xi(const Matrix& jacobian, const PsiEstimate& psi, Index n);

}  // namespace mgarch
