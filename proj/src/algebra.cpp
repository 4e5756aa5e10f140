#include "mgarch/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>

namespace mgarch {

namespace {

void require_square(const Matrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::InvalidInput, std::string(who) + ": matrix must be square and non-empty");
  }
}

void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) {
    throw Error(ErrorCode::InvalidInput, std::string(who) + ": non-finite entries");
  }
}

}  // namespace

ComplexEigenDecomposition eig(const Matrix& a) {
  require_square(a, "eig");
  require_finite(a, "eig");
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "eig: QR iteration did not converge");
  }
  ComplexEigenDecomposition out{es.eigenvalues(), es.eigenvectors()};
  for (Index j = 0; j < out.eigenvectors.cols(); ++j) {
    const double nrm = out.eigenvectors.col(j).norm();
    if (nrm > 0) out.eigenvectors.col(j) /= nrm;
  }
  return out;
}

ComplexVector eigenvalues(const Matrix& a) {
  require_square(a, "eigenvalues");
  require_finite(a, "eigenvalues");
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NumericalFailure, "eigenvalues: QR iteration did not converge");
  }
  return es.eigenvalues();
}

double spectral_radius(const Matrix& a) { return eigenvalues(a).cwiseAbs().maxCoeff(); }

Matrix dlyap(const Matrix& b, const Matrix& q, const ToleranceConfig& tol) {
  require_square(b, "dlyap");
  if (q.rows() != b.rows() || q.cols() != b.cols()) {
    throw Error(ErrorCode::InvalidInput, "dlyap: B and Q must have equal square shape");
  }
  const double rho = spectral_radius(b);
  if (rho >= 1.0 - tol.lyapunov_margin) {
    throw Error(ErrorCode::SingularLyapunov,
                "dlyap: spectral radius of B is " + std::to_string(rho) + ", equation not uniquely solvable");
  }
  const Index n = b.rows();
  const Matrix k = Matrix::Identity(n * n, n * n) - Eigen::kroneckerProduct(b, b).eval();
  const Eigen::PartialPivLU<Matrix> lu(k);
  const Vector rhs = vec(q);
  Vector x = lu.solve(rhs);
  // One step of iterative refinement.
  x += lu.solve(rhs - k * x);
  Matrix out = unvec(x, n, n);
  if ((q - q.transpose()).cwiseAbs().maxCoeff() <= tol.symmetry * std::max(1.0, q.cwiseAbs().maxCoeff())) {
    out = symmetrize(out);
  }
  return out;
}

Matrix cholesky(const Matrix& s, const ToleranceConfig& tol) {
  require_square(s, "cholesky");
  require_finite(s, "cholesky");
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * std::max(1.0, s.cwiseAbs().maxCoeff())) {
    throw Error(ErrorCode::InvalidInput, "cholesky: matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "cholesky: matrix is not positive definite");
  }
  return llt.matrixL();
}

bool is_positive_definite(const Matrix& s) {
  if (s.rows() != s.cols() || !s.allFinite()) return false;
  Eigen::LLT<Matrix> llt(symmetrize(s));
  return llt.info() == Eigen::Success;
}

Matrix solve(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
  require_square(a, "solve");
  if (b.rows() != a.rows()) {
    throw Error(ErrorCode::InvalidInput, "solve: row count of B does not match A");
  }
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(tol.singular);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::SingularMatrix, "solve: matrix is singular to working precision");
  }
  Matrix x = lu.solve(b);
  x += lu.solve(b - a * x);
  return x;
}

Matrix inverse(const Matrix& a, const ToleranceConfig& tol) {
  return solve(a, Matrix::Identity(a.rows(), a.cols()), tol);
}

Matrix lstsq(const Matrix& a, const Matrix& b, const ToleranceConfig& tol) {
  if (a.cols() != b.cols()) {
    throw Error(ErrorCode::InvalidInput, "lstsq: A and B must have the same number of columns");
  }
  if (a.rows() > a.cols()) {
    throw Error(ErrorCode::SingularMatrix, "lstsq: system is underdetermined (A has more rows than columns)");
  }
  // X A = B  <=>  A^T X^T = B^T, solved in the least-squares sense.
  Eigen::ColPivHouseholderQR<Matrix> qr(a.transpose());
  qr.setThreshold(tol.singular);
  if (qr.rank() < a.rows()) {
    throw Error(ErrorCode::SingularMatrix, "lstsq: stacked autocovariance matrix is rank deficient");
  }
  const Matrix bt = b.transpose();
  Matrix xt = qr.solve(bt);
  return xt.transpose();
}

}  // namespace mgarch
