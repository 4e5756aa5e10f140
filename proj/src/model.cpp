#include "mgarch/model.hpp"

#include <sstream>

namespace mgarch {

void GarchSpec::validate() const {
  if (d < 1) throw Error(ErrorCode::InvalidInput, "GarchSpec: d must be positive");
  const Index n = dbar();
  if (c.size() != n || A.rows() != n || A.cols() != n || B.rows() != n || B.cols() != n) {
    std::ostringstream os;
    os << "GarchSpec: expected c of length " << n << " and " << n << "x" << n << " A, B for d=" << d;
    throw Error(ErrorCode::InvalidInput, os.str());
  }
  if (!c.allFinite() || !A.allFinite() || !B.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "GarchSpec: non-finite parameters");
  }
}

GarchSpec GarchSpec::scalar(double c, double a, double b) {
  GarchSpec s;
  s.d = 1;
  s.c = Vector::Constant(1, c);
  s.A = Matrix::Constant(1, 1, a);
  s.B = Matrix::Constant(1, 1, b);
  return s;
}

void MomentSet::validate() const {
  const Index n = h.size();
  if (n == 0 || dim_from_vech_size(n) < 0) {
    throw Error(ErrorCode::InvalidInput, "MomentSet: length of h must be a triangular number");
  }
  for (const Matrix* m : {&M0, &M1, &M2}) {
    if (m->rows() != n || m->cols() != n) {
      throw Error(ErrorCode::InvalidInput, "MomentSet: autocovariances must be square of size len(h)");
    }
    if (!m->allFinite()) throw Error(ErrorCode::InvalidInput, "MomentSet: non-finite entries");
  }
  if (!h.allFinite()) throw Error(ErrorCode::InvalidInput, "MomentSet: non-finite entries");
}

Matrix phi(const GarchSpec& spec) { return spec.A + spec.B; }

Vector uncond_h(const GarchSpec& spec, const ToleranceConfig& tol) {
  spec.validate();
  const Matrix p = phi(spec);
  const double rho = spectral_radius(p);
  if (rho >= 1.0) {
    throw Error(ErrorCode::NonStationary, "uncond_h: spectral radius of A+B is " + std::to_string(rho));
  }
  return solve(Matrix::Identity(p.rows(), p.cols()) - p, spec.c, tol);
}

MomentSet population_moments(const GarchSpec& spec, const Matrix& sigma, const ToleranceConfig& tol) {
  spec.validate();
  const Index n = spec.dbar();
  if (sigma.rows() != n || sigma.cols() != n) {
    throw Error(ErrorCode::InvalidInput, "population_moments: Sigma must be dbar x dbar");
  }
  if (!is_positive_definite(sigma) ||
      (sigma - sigma.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::NotPositiveDefinite, "population_moments: Sigma must be symmetric positive definite");
  }
  const Matrix p = phi(spec);
  const double rho = spectral_radius(p);
  if (rho >= 1.0) {
    throw Error(ErrorCode::NonStationary, "population_moments: spectral radius of A+B is " + std::to_string(rho));
  }
  const Matrix& b = spec.B;
  const Matrix gamma0 = sigma + b * sigma * b.transpose();
  const Matrix gamma1 = -b * sigma;

  MomentSet ms;
  ms.h = uncond_h(spec, tol);
  // Gamma0 = M0 - M1 Phi^T - Phi M1^T + Phi M0 Phi^T with M1 = Gamma1 + Phi M0
  // collapses to M0 - Phi M0 Phi^T = Gamma0 + Gamma1 Phi^T + Phi Gamma1^T.
  const Matrix rhs = gamma0 + gamma1 * p.transpose() + p * gamma1.transpose();
  ms.M0 = dlyap(p, symmetrize(rhs), tol);
  ms.M1 = gamma1 + p * ms.M0;
  ms.M2 = p * ms.M1;
  return ms;
}

std::vector<Matrix> population_autocovariances(const GarchSpec& spec, const Matrix& sigma, int max_lag,
                                               const ToleranceConfig& tol) {
  const MomentSet ms = population_moments(spec, sigma, tol);
  const Matrix p = phi(spec);
  std::vector<Matrix> out{ms.M0};
  if (max_lag >= 1) out.push_back(ms.M1);
  for (int k = 2; k <= max_lag; ++k) out.push_back(p * out.back());
  return out;
}

Diagnostics diagnostics(const GarchSpec& spec, const ToleranceConfig& tol) {
  Diagnostics diag;
  try {
    spec.validate();
  } catch (const Error& e) {
    diag.warn("invalid_spec", e.what());
    return diag;
  }
  try {
    diag.phi_spectral_radius = spectral_radius(phi(spec));
    diag.stationary = diag.phi_spectral_radius < 1.0;
    if (!diag.stationary) {
      diag.warn("non_stationary", "spectral radius of A+B is " + std::to_string(diag.phi_spectral_radius));
    }
  } catch (const Error& e) {
    diag.warn("eig_failure", std::string("A+B: ") + e.what());
  }
  try {
    diag.b_spectral_radius = spectral_radius(spec.B);
    diag.invertible = diag.b_spectral_radius < 1.0;
    if (!diag.invertible) {
      diag.warn("non_invertible", "spectral radius of B is " + std::to_string(diag.b_spectral_radius));
    }
  } catch (const Error& e) {
    diag.warn("eig_failure", std::string("B: ") + e.what());
  }
  if (diag.stationary) {
    try {
      diag.h_positive = is_positive_definite(unvech(uncond_h(spec, tol)));
      if (!diag.h_positive) diag.warn("h_not_positive", "unvech(h) is not positive definite");
    } catch (const Error& e) {
      diag.warn("h_failure", e.what());
    }
  } else {
    diag.warn("h_undefined", "unconditional covariance undefined for a non-stationary spec");
  }
  return diag;
}

}  // namespace mgarch
