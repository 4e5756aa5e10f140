#pragma once

namespace mgarch {

// Every numerical threshold used by the library lives here.
struct ToleranceConfig {
  double symmetry = 1e-12;          // relative asymmetry accepted by vech / cholesky
  double singular = 1e-13;          // relative pivot threshold for solve / lstsq
  double lyapunov_margin = 1e-10;   // dlyap rejects rho(B) >= 1 - margin
  double unimodular = 1e-8;         // distance from the unit circle treated as "on" it
  double realify = 1e-8;            // max imaginary residue relative to |B|
  double eigvec_condition = 1e12;   // reciprocal condition bound for eigenvector matrices
  double gamma0_symmetry = 1e-10;   // asymmetry of Gamma0 recorded as a warning above this
  double b_zero = 1e-14;            // |B| below this is treated as B = 0 in recover_sigma
};

inline const ToleranceConfig& default_tolerances() {
  static const ToleranceConfig tol{};
  return tol;
}

}  // namespace mgarch
