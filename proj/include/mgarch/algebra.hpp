#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "mgarch/errors.hpp"
#include "mgarch/tolerance.hpp"

namespace mgarch {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Number of free elements of a symmetric d x d matrix, d(d+1)/2.
constexpr Index vech_size(Index d) { return d * (d + 1) / 2; }

/// Inverse of vech_size; returns -1 when n is not a triangular number.
inline Index dim_from_vech_size(Index n) {
  if (n < 1) return -1;
  const auto d = static_cast<Index>(std::llround((std::sqrt(8.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0));
  return vech_size(d) == n ? d : -1;
}

/// Half-vectorization. Stacks the lower triangle column by column:
/// (0,0), (1,0), ..., (d-1,0), (1,1), (2,1), ..., (d-1,d-1).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vech(
    const Eigen::MatrixBase<Derived>& m, const ToleranceConfig& tol = default_tolerances()) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::InvalidInput, "vech: matrix must be square and non-empty");
  }
  const Index d = m.rows();
  const auto scale = std::max<typename Eigen::NumTraits<Scalar>::Real>(1, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * scale) {
    throw Error(ErrorCode::InvalidInput, "vech: matrix is not symmetric");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(vech_size(d));
  Index k = 0;
  for (Index j = 0; j < d; ++j)
    for (Index i = j; i < d; ++i) v(k++) = m(i, j);
  return v;
}

/// Inverse of vech: rebuilds the symmetric matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> unvech(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Index d = dim_from_vech_size(v.size());
  if (d < 0) {
    throw Error(ErrorCode::InvalidInput,
                "unvech: length " + std::to_string(v.size()) + " is not a triangular number");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(d, d);
  Index k = 0;
  for (Index j = 0; j < d; ++j) {
    for (Index i = j; i < d; ++i) {
      m(i, j) = v(k);
      m(j, i) = v(k);
      ++k;
    }
  }
  return m;
}

/// Column-major vec of a matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vec(const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> tmp = m;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>(tmp.data(), tmp.size());
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> unvec(
    const Eigen::MatrixBase<Derived>& v, Index rows, Index cols) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> tmp = v;
  return Eigen::Map<const Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>>(
      tmp.data(), rows, cols);
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> symmetrize(
    const Eigen::MatrixBase<Derived>& m) {
  return (m + m.transpose()) / typename Derived::Scalar(2);
}

/// Eigenpairs of a real square matrix. Eigenvectors have unit 2-norm; complex
/// conjugate eigenvalues carry conjugate eigenvectors.
struct ComplexEigenDecomposition {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;  // column i pairs with eigenvalues(i)
};

ComplexEigenDecomposition eig(const Matrix& a);

/// Eigenvalues only; cheaper than eig().
ComplexVector eigenvalues(const Matrix& a);

double spectral_radius(const Matrix& a);

/// Solves X - B X B^T = Q through the Kronecker system (I - B (x) B) vec X = vec Q.
Matrix dlyap(const Matrix& b, const Matrix& q, const ToleranceConfig& tol = default_tolerances());

/// Lower Cholesky factor L with L L^T = S.
Matrix cholesky(const Matrix& s, const ToleranceConfig& tol = default_tolerances());

/// X with A X = B.
Matrix solve(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = default_tolerances());

/// X minimizing |X A - B|_F. A must have full row rank.
Matrix lstsq(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = default_tolerances());

/// Inverse of a square matrix, SingularMatrix when numerically rank deficient.
Matrix inverse(const Matrix& a, const ToleranceConfig& tol = default_tolerances());

bool is_positive_definite(const Matrix& s);

}  // namespace mgarch
