#include <gtest/gtest.h>

#include "mgarch/algebra.hpp"
#include "support.hpp"

namespace mgarch {
namespace {

using testing::random_matrix;
using testing::random_symmetric;

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

TEST(Vech, StacksLowerTriangleColumnMajor) {
  EXPECT_EQ(vech(mat({{1, 2}, {2, 3}})), Vector((Vector(3) << 1, 2, 3).finished()));
  EXPECT_EQ(vech(mat({{5}})), Vector::Constant(1, 5.0));
  const Matrix m3 = mat({{1, 2, 3}, {2, 4, 5}, {3, 5, 6}});
  EXPECT_EQ(vech(m3), Vector((Vector(6) << 1, 2, 3, 4, 5, 6).finished()));
}

TEST(Vech, RejectsBadInput) {
  EXPECT_THROW(vech(Matrix(2, 3)), Error);
  try {
    vech(mat({{1, 2}, {3, 4}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(Vech, UnvechExamples) {
  EXPECT_EQ(unvech(Vector((Vector(3) << 1, 2, 3).finished())), mat({{1, 2}, {2, 3}}));
  EXPECT_EQ(unvech(Vector::Constant(1, 7.0)), mat({{7}}));
  try {
    unvech(Vector::Zero(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(Vech, MutualInversesOnSymmetricMatrices) {
  std::mt19937_64 rng(11);
  for (Index d = 1; d <= 8; ++d) {
    for (int rep = 0; rep < 25; ++rep) {
      const Matrix m = random_symmetric(rng, d);
      EXPECT_EQ(unvech(vech(m)), m);
      const Vector v = random_matrix(rng, vech_size(d), 1);
      EXPECT_EQ(vech(unvech(v)), v);
    }
  }
  // Every position of the triangle lands in a distinct slot for d <= 4.
  for (Index d = 1; d <= 4; ++d) {
    for (Index k = 0; k < vech_size(d); ++k) {
      Vector e = Vector::Zero(vech_size(d));
      e(k) = 1;
      const Matrix m = unvech(e);
      EXPECT_EQ(m, m.transpose().eval());
      EXPECT_LE(m.sum(), 2.0);
      EXPECT_EQ(vech(m), e);
    }
  }
  EXPECT_EQ(dim_from_vech_size(6), 3);
  EXPECT_EQ(dim_from_vech_size(5), -1);
}

TEST(Eig, Examples) {
  const auto id = eig(Matrix::Identity(3, 3));
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(id.eigenvalues(i) - 1.0), 0.0, 1e-14);

  // lambda^2 - 2.5 lambda + 1 = (lambda - 0.5)(lambda - 2)
  const auto e = eig(mat({{0, 1}, {-1, 2.5}}));
  std::vector<double> re{e.eigenvalues(0).real(), e.eigenvalues(1).real()};
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], 0.5, 1e-14);
  EXPECT_NEAR(re[1], 2.0, 1e-14);
  for (double l : re) EXPECT_NEAR(l * l - 2.5 * l + 1, 0.0, 1e-13);

  const auto dg = eig(mat({{0.3, 0}, {0, -0.8}}));
  EXPECT_NEAR(std::min(dg.eigenvalues(0).real(), dg.eigenvalues(1).real()), -0.8, 1e-15);
  EXPECT_NEAR(std::max(dg.eigenvalues(0).real(), dg.eigenvalues(1).real()), 0.3, 1e-15);
}

TEST(Eig, ResidualBoundAndConjugatePairsOnRandomMatrices) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 1 + rep % 12;
    const Matrix a = random_matrix(rng, n, n);
    const auto ed = eig(a);
    const double bound = 1e-10 * (1 + a.norm());
    for (Index i = 0; i < n; ++i) {
      const ComplexVector v = ed.eigenvectors.col(i);
      EXPECT_NEAR(v.norm(), 1.0, 1e-12);
      EXPECT_LE((a.cast<std::complex<double>>() * v - ed.eigenvalues(i) * v).norm(), bound);
      if (std::abs(ed.eigenvalues(i).imag()) > 0) {
        // the conjugate eigenvalue is present with the conjugate eigenvector
        bool found = false;
        for (Index j = 0; j < n && !found; ++j) {
          found = std::abs(ed.eigenvalues(j) - std::conj(ed.eigenvalues(i))) < 1e-12 &&
                  (ed.eigenvectors.col(j) - v.conjugate()).norm() < 1e-10;
        }
        EXPECT_TRUE(found);
      }
    }
  }
}

TEST(Eig, RejectsNonFinite) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(eig(a), Error);
}

TEST(SpectralRadius, Examples) {
  EXPECT_NEAR(spectral_radius(mat({{0.2, 0}, {0, -0.9}})), 0.9, 1e-15);
  EXPECT_NEAR(spectral_radius(mat({{0, -1}, {1, 0}})), 1.0, 1e-15);
  EXPECT_NEAR(spectral_radius(mat({{0, 1}, {-1, 2.5}})), 2.0, 1e-14);
}

TEST(Dlyap, Examples) {
  std::mt19937_64 rng(13);
  const Matrix q = random_symmetric(rng, 3);
  EXPECT_LE((dlyap(Matrix::Zero(3, 3), q) - q).norm(), 1e-15);
  EXPECT_NEAR(dlyap(mat({{0.5}}), mat({{0.75}}))(0, 0), 1.0, 1e-15);
}

TEST(Dlyap, ResidualBoundUpToRho099) {
  std::mt19937_64 rng(14);
  for (double rho : {0.3, 0.9, 0.99}) {
    for (int rep = 0; rep < 50; ++rep) {
      const Index n = 1 + rep % 4;
      Matrix b = random_matrix(rng, n, n);
      b *= rho / spectral_radius(b);
      const Matrix q = random_matrix(rng, n, n);
      const Matrix x = dlyap(b, q);
      EXPECT_LE((x - b * x * b.transpose() - q).norm(), 1e-12 * (1 + q.norm())) << "rho=" << rho;
      if (rho <= 0.9) {
        EXPECT_LE((x - testing::dlyap_series(b, q)).norm(), 1e-10 * (1 + x.norm()));
      }
    }
  }
}

TEST(Dlyap, SymmetricQGivesSymmetricX) {
  std::mt19937_64 rng(15);
  Matrix b = random_matrix(rng, 3, 3);
  b *= 0.9 / spectral_radius(b);
  const Matrix x = dlyap(b, random_symmetric(rng, 3));
  EXPECT_EQ(x, x.transpose().eval());
}

TEST(Dlyap, RejectsUnitSpectralRadius) {
  try {
    dlyap(mat({{0, -1}, {1, 0}}), Matrix::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularLyapunov);
  }
}

TEST(Cholesky, Examples) {
  EXPECT_EQ(cholesky(Matrix::Identity(3, 3)), Matrix::Identity(3, 3).eval());
  EXPECT_LE((cholesky(mat({{4, 2}, {2, 2}})) - mat({{2, 0}, {1, 1}})).norm(), 1e-15);
  try {
    cholesky(mat({{1, 2}, {2, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPositiveDefinite);
  }
}

TEST(Cholesky, RecoversRandomFactors) {
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> pos(0.5, 2.0);
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = 1 + rep % 6;
    Matrix l = random_matrix(rng, n, n).triangularView<Eigen::Lower>();
    for (Index i = 0; i < n; ++i) l(i, i) = pos(rng);
    const Matrix s = l * l.transpose();
    const Matrix got = cholesky(s);
    EXPECT_LE((got - l).norm(), 1e-12 * l.norm());
    EXPECT_LE((got * got.transpose() - s).norm(), 1e-12 * s.norm());
  }
}

TEST(Solve, Examples) {
  std::mt19937_64 rng(17);
  const Matrix b = random_matrix(rng, 3, 2);
  EXPECT_LE((solve(Matrix::Identity(3, 3), b) - b).norm(), 1e-15);
  try {
    solve(mat({{1, 2}, {2, 4}}), Matrix::Identity(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
  }
}

TEST(Lstsq, Examples) {
  // X [2, 4] = [4, 8]
  EXPECT_NEAR(lstsq(mat({{2, 4}}), mat({{4, 8}}))(0, 0), 2.0, 1e-14);

  std::mt19937_64 rng(18);
  const Matrix a = random_matrix(rng, 3, 3) + 3 * Matrix::Identity(3, 3);
  const Matrix b = random_matrix(rng, 3, 3);
  // square, invertible: X A = B  <=>  X = B A^{-1}
  const Matrix x = lstsq(a, b);
  EXPECT_LE((x * a - b).norm(), 1e-12);

  // normal equations (X A - B) A^T = 0 for an overdetermined system
  const Matrix a2 = random_matrix(rng, 3, 9);
  const Matrix b2 = random_matrix(rng, 3, 9);
  const Matrix x2 = lstsq(a2, b2);
  EXPECT_LE(((x2 * a2 - b2) * a2.transpose()).norm(), 1e-10);

  EXPECT_THROW(lstsq(Matrix::Zero(2, 4), Matrix::Zero(2, 4)), Error);
}

}  // namespace
}  // namespace mgarch
