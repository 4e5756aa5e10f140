#include "mgarch/solver.hpp"

#include "mgarch/moments.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mgarch {

std::string_view to_string(PhiMethod m) {
  switch (m) {
    case PhiMethod::Lag1: return "lag1";
    case PhiMethod::Weighted: return "weighted";
    case PhiMethod::Lstsq: return "lstsq";
  }
  return "unknown";
}

PhiMethod phi_method_from_string(std::string_view s) {
  if (s == "lag1") return PhiMethod::Lag1;
  if (s == "weighted") return PhiMethod::Weighted;
  if (s == "lstsq") return PhiMethod::Lstsq;
  throw Error(ErrorCode::InvalidInput, "unknown phi method '" + std::string(s) + "'");
}

namespace {

double condition_number(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double smin = s(s.size() - 1);
  return smin > 0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

template <typename F>
auto staged(std::string_view stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    rethrow_with_stage(e, stage);
  }
}

Matrix phi_lag1(const MomentSet& ms, const ToleranceConfig& tol) {
  try {
    // Phi = M2 M1^{-1}  <=>  M1^T Phi^T = M2^T
    return solve(ms.M1.transpose(), ms.M2.transpose(), tol).transpose();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularMatrix,
                "M1 is numerically singular, Phi = M2 M1^{-1} is undefined (try the lstsq phi method)");
  }
}

std::vector<double> resolve_weights(std::size_t k, const std::vector<double>& weights) {
  if (weights.empty()) return std::vector<double>(k, 1.0);
  if (weights.size() != k) {
    throw Error(ErrorCode::InvalidInput, "phi weights: expected " + std::to_string(k) + " weights, got " +
                                             std::to_string(weights.size()));
  }
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidInput, "phi weights must be non-negative");
    total += w;
  }
  if (total <= 0) throw Error(ErrorCode::InvalidInput, "phi weights must not all be zero");
  return weights;
}

}  // namespace

GammaState gammas(const MomentSet& ms, const Matrix& phi, const ToleranceConfig& /*tol*/) {
  ms.validate();
  if (phi.rows() != ms.dbar() || phi.cols() != ms.dbar()) {
    throw Error(ErrorCode::InvalidInput, "gammas: Phi must be dbar x dbar");
  }
  GammaState gs;
  gs.phi = phi;
  const Matrix g0 = ms.M0 - ms.M1 * phi.transpose() - phi * ms.M1.transpose() + phi * ms.M0 * phi.transpose();
  const double scale = std::max(1.0, g0.cwiseAbs().maxCoeff());
  gs.gamma0_asymmetry = (g0 - g0.transpose()).cwiseAbs().maxCoeff() / scale;
  gs.gamma0 = symmetrize(g0);
  gs.gamma1 = ms.M1 - phi * ms.M0;
  return gs;
}

GammaState gammas(const MomentSet& ms, const ToleranceConfig& tol) {
  ms.validate();
  return gammas(ms, phi_lag1(ms, tol), tol);
}

Matrix build_p(const GammaState& gs, const ToleranceConfig& tol) {
  const Index n = gs.dbar();
  if (gs.gamma0.rows() != n || gs.gamma0.cols() != n || gs.gamma1.rows() != n || gs.gamma1.cols() != n) {
    throw Error(ErrorCode::InvalidInput, "build_p: Gamma0 and Gamma1 must be dbar x dbar");
  }
  Matrix rhs(n, 2 * n);
  rhs << gs.gamma1.transpose(), gs.gamma0;
  Matrix lower;
  try {
    lower = -solve(gs.gamma1, rhs, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularMatrix,
                "Gamma1 is singular; the companion matrix P does not exist (a generalized pencil "
                "formulation M v = lambda N v would be needed, which is not implemented)");
  }
  Matrix p = Matrix::Zero(2 * n, 2 * n);
  p.topRightCorner(n, n).setIdentity();
  p.bottomRows(n) = lower;
  return p;
}

Matrix solvent_from_eigenpairs(const ComplexVector& lambda, const ComplexMatrix& u, const ToleranceConfig& tol,
                               double* imag_residue, bool require_real) {
  const Index n = u.rows();
  if (u.cols() != n || lambda.size() != n) {
    throw Error(ErrorCode::InvalidInput, "solvent_from_eigenpairs: need dbar eigenpairs with length-dbar vectors");
  }
  const double cond = condition_number(u);
  if (!(cond < tol.eigvec_condition)) {
    std::ostringstream os;
    os << "eigenvector matrix U is ill conditioned (condition number " << cond << ")";
    throw Error(ErrorCode::IllConditionedEigenvectors, os.str());
  }
  const ComplexMatrix ut = u.transpose();
  const ComplexMatrix b = ut.fullPivLu().solve(lambda.asDiagonal() * ut);
  const double re_norm = b.real().norm();
  const double residue = b.imag().norm() / std::max(re_norm, 1e-300);
  if (imag_residue) *imag_residue = residue;
  if (require_real && b.imag().norm() > tol.realify * std::max(re_norm, std::numeric_limits<double>::min())) {
    std::ostringstream os;
    os << "solvent has imaginary residue " << residue << " relative to its real part";
    throw Error(ErrorCode::NumericalFailure, os.str());
  }
  return b.real();
}

SolventResult solve_b(const GammaState& gs, const ToleranceConfig& tol) {
  const Index n = gs.dbar();
  const Matrix p = build_p(gs, tol);
  const ComplexEigenDecomposition ed = eig(p);

  std::vector<Index> order(static_cast<std::size_t>(2 * n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(ed.eigenvalues(a)) < std::abs(ed.eigenvalues(b)); });

  SolventResult out;
  out.p_eigenvalues = ed.eigenvalues;

  Index inside = 0;
  for (Index i = 0; i < 2 * n; ++i) {
    const double r = std::abs(ed.eigenvalues(i));
    if (std::abs(r - 1.0) <= tol.unimodular) {
      std::ostringstream os;
      os << "P has an eigenvalue of modulus " << r << " on the unit circle; "
         << "the invertibility condition does not hold and the stable solvent is not defined";
      throw Error(ErrorCode::UnimodularEigenvalues, os.str());
    }
    if (r < 1.0 - tol.unimodular) ++inside;
  }
  if (inside != n) {
    throw Error(ErrorCode::SelectionCountMismatch, "expected " + std::to_string(n) +
                                                       " eigenvalues of P inside the unit circle, found " +
                                                       std::to_string(inside));
  }

  out.selected_eigenvalues.resize(n);
  out.selected_eigenvectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index idx = order[static_cast<std::size_t>(k)];
    out.selected_eigenvalues(k) = ed.eigenvalues(idx);
    out.selected_eigenvectors.col(k) = ed.eigenvectors.col(idx).head(n);
  }
  out.B = solvent_from_eigenpairs(out.selected_eigenvalues, out.selected_eigenvectors, tol, &out.imag_residue);
  return out;
}

SolventResult solve_b(const GammaState& gs, double tol_unimodular) {
  ToleranceConfig tol{};
  tol.unimodular = tol_unimodular;
  return solve_b(gs, tol);
}

double pme_residual(const Matrix& b, const GammaState& gs) {
  const Matrix bt = b.transpose();
  return (gs.gamma1.transpose() + gs.gamma0 * bt + gs.gamma1 * bt * bt).norm();
}

double nme_residual(const Matrix& sigma, const GammaState& gs) {
  Eigen::FullPivLU<Matrix> lu(sigma);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  return (gs.gamma0 - sigma - gs.gamma1 * lu.solve(gs.gamma1.transpose())).norm();
}

SigmaResult recover_sigma(const Matrix& b, const GammaState& gs, const ToleranceConfig& tol) {
  const Index n = gs.dbar();
  if (b.rows() != n || b.cols() != n) throw Error(ErrorCode::InvalidInput, "recover_sigma: B must be dbar x dbar");
  SigmaResult out;
  if (b.norm() <= tol.b_zero) {
    // B = 0 reduces Gamma0 = Sigma + B Sigma B^T to Sigma = Gamma0.
    out.sigma = gs.gamma0;
    out.from_gamma0 = true;
  } else {
    Matrix sigma;
    try {
      sigma = -solve(b, gs.gamma1, tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMatrix) throw;
      throw Error(ErrorCode::SingularMatrix, "B is singular, Sigma = -B^{-1} Gamma1 is not available");
    }
    const double nrm = sigma.norm();
    out.symmetry_gap = nrm > 0 ? (sigma - sigma.transpose()).norm() / nrm : 0.0;
    out.sigma = symmetrize(sigma);
  }
  out.residual_nme = nme_residual(out.sigma, gs);
  return out;
}

Matrix phi_lstsq(const std::vector<Matrix>& autocov, const std::vector<double>& weights, const ToleranceConfig& tol) {
  if (autocov.size() < 2) throw Error(ErrorCode::InvalidInput, "phi_lstsq: need at least two autocovariances");
  const std::size_t k = autocov.size() - 1;
  const auto w = resolve_weights(k, weights);
  const Index n = autocov.front().rows();
  Matrix lhs(n, n * static_cast<Index>(k)), rhs(n, n * static_cast<Index>(k));
  for (std::size_t i = 0; i < k; ++i) {
    lhs.middleCols(static_cast<Index>(i) * n, n) = w[i] * autocov[i];
    rhs.middleCols(static_cast<Index>(i) * n, n) = w[i] * autocov[i + 1];
  }
  return lstsq(lhs, rhs, tol);
}

Matrix phi_weighted(const std::vector<Matrix>& autocov, const std::vector<double>& weights,
                    const ToleranceConfig& tol) {
  if (autocov.size() < 2) throw Error(ErrorCode::InvalidInput, "phi_weighted: need at least two autocovariances");
  const std::size_t k = autocov.size() - 1;
  const auto w = resolve_weights(k, weights);
  const Index n = autocov.front().rows();
  Matrix acc = Matrix::Zero(n, n);
  double total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (w[i] == 0) continue;
    acc += w[i] * solve(autocov[i].transpose(), autocov[i + 1].transpose(), tol).transpose();
    total += w[i];
  }
  return acc / total;
}

ProjectionResult project_stationary(const Matrix& phi, double delta, const ToleranceConfig& tol) {
  if (!(delta > 0 && delta < 1)) throw Error(ErrorCode::InvalidInput, "project_stationary: delta must be in (0, 1)");
  ProjectionResult out{phi, false, false};
  const ComplexEigenDecomposition ed = eig(phi);
  const double rho = ed.eigenvalues.cwiseAbs().maxCoeff();
  if (rho < 1.0) return out;
  out.changed = true;

  const double target = 1.0 - delta;
  ComplexVector lambda = ed.eigenvalues;
  for (Index i = 0; i < lambda.size(); ++i) {
    const double r = std::abs(lambda(i));
    if (r >= 1.0) lambda(i) *= target / r;
  }
  try {
    if (!(condition_number(ed.eigenvectors) < tol.eigvec_condition)) {
      throw Error(ErrorCode::IllConditionedEigenvectors, "eigenvectors of Phi are ill conditioned");
    }
    const ComplexMatrix& v = ed.eigenvectors;
    // Phi' = V D' V^{-1}  <=>  V^T Phi'^T = D' V^T
    const ComplexMatrix recon = v.transpose().fullPivLu().solve(lambda.asDiagonal() * v.transpose()).transpose();
    if (recon.imag().norm() > tol.realify * std::max(recon.real().norm(), 1e-300)) {
      throw Error(ErrorCode::NumericalFailure, "projected Phi is not real");
    }
    out.phi = recon.real();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::IllConditionedEigenvectors && e.code() != ErrorCode::NumericalFailure) throw;
    out.phi = phi * (target / rho);
    out.fallback_scaling = true;
  }
  return out;
}

EstimateReport estimate(const Vector& h, const std::vector<Matrix>& autocov, const EstimateOptions& options) {
  const ToleranceConfig& tol = options.tol;
  if (autocov.size() < 3) throw Error(ErrorCode::InvalidInput, "estimate: need M0, M1 and M2");
  EstimateReport rep;
  rep.moments = MomentSet{h, autocov[0], autocov[1], autocov[2]};
  staged("moments", [&] { rep.moments.validate(); });
  const Index n = rep.moments.dbar();

  Matrix phi = staged("phi", [&]() -> Matrix {
    if (options.phi_method == PhiMethod::Lag1) return phi_lag1(rep.moments, tol);
    const auto lags = static_cast<std::size_t>(std::max(options.lags, 1));
    if (autocov.size() < lags + 2) {
      throw Error(ErrorCode::InvalidInput, "phi: " + std::to_string(lags) + " lags need autocovariances up to M_" +
                                               std::to_string(lags + 1));
    }
    const std::vector<Matrix> used(autocov.begin() + 1, autocov.begin() + static_cast<std::ptrdiff_t>(lags) + 2);
    return options.phi_method == PhiMethod::Lstsq ? phi_lstsq(used, options.weights, tol)
                                                  : phi_weighted(used, options.weights, tol);
  });

  if (options.project_stationary) {
    const ProjectionResult pr = staged("projection", [&] { return project_stationary(phi, options.projection_delta, tol); });
    if (pr.changed) {
      rep.warnings.warn("phi_projected", pr.fallback_scaling
                                             ? "Phi had eigenvalues on/outside the unit circle; scaled uniformly"
                                             : "Phi had eigenvalues on/outside the unit circle; moved inside");
      phi = pr.phi;
    }
  }
  rep.phi = phi;

  rep.gammas = staged("gammas", [&] { return gammas(rep.moments, phi, tol); });
  if (rep.gammas.gamma0_asymmetry > tol.gamma0_symmetry) {
    std::ostringstream os;
    os << "Gamma0 symmetrized (relative asymmetry " << rep.gammas.gamma0_asymmetry << ")";
    rep.warnings.warn("gamma0_symmetrized", os.str());
  }

  const SolventResult sb = staged("solve_b", [&] { return solve_b(rep.gammas, tol); });
  rep.p_eigenvalues = sb.p_eigenvalues;
  rep.b_eigenvalues = sb.selected_eigenvalues;
  rep.residual_pme = pme_residual(sb.B, rep.gammas);

  const SigmaResult sr = staged("recover_sigma", [&] { return recover_sigma(sb.B, rep.gammas, tol); });
  rep.sigma = sr.sigma;
  rep.residual_nme = sr.residual_nme;
  rep.sigma_symmetry_gap = sr.symmetry_gap;
  rep.sigma_positive = is_positive_definite(rep.sigma);
  if (sr.from_gamma0) rep.warnings.warn("sigma_from_gamma0", "B is numerically zero; Sigma taken as Gamma0");

  rep.spec.d = dim_from_vech_size(n);
  rep.spec.B = sb.B;
  rep.spec.A = phi - sb.B;
  rep.spec.c = (Matrix::Identity(n, n) - phi) * h;

  Diagnostics diag = diagnostics(rep.spec, tol);
  for (auto& w : rep.warnings.warnings) diag.warnings.push_back(std::move(w));
  rep.warnings = std::move(diag);
  if (!rep.sigma_positive) rep.warnings.warn("sigma_not_positive", "estimated Sigma is not positive definite");
  if (rep.sigma_symmetry_gap > 1e-6) {
    std::ostringstream os;
    os << "Sigma symmetrized (relative gap " << rep.sigma_symmetry_gap << ")";
    rep.warnings.warn("sigma_symmetrized", os.str());
  }
  return rep;
}

EstimateReport estimate(const MomentSet& ms, const EstimateOptions& options) {
  return estimate(ms.h, {ms.M0, ms.M1, ms.M2}, options);
}

EstimateReport estimate(const Matrix& x, const EstimateOptions& options) {
  if (x.rows() < 4) {
    throw Error(ErrorCode::InsufficientData, "moments: need at least 4 observations");
  }
  const int max_lag = options.phi_method == PhiMethod::Lag1 ? 2 : std::max(options.lags, 1) + 1;
  const auto autocov = staged("moments", [&] {
    if (dim_from_vech_size(x.cols()) < 0) {
      throw Error(ErrorCode::InvalidInput, "column count must be a triangular number");
    }
    return sample_autocovariances(x, max_lag);
  });
  return estimate(Vector(x.colwise().mean()), autocov, options);
}

}  // namespace mgarch
