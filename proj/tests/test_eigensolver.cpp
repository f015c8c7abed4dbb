#include "doctest.h"

#include "rainbow/eigensolver.hpp"
#include "rainbow/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace rainbow;

namespace {

Eigen::MatrixXd tridiagonal(const std::vector<double>& d, const std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = d[i];
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = e[i];
  return A;
}

}  // namespace

TEST_CASE("QL reproduces a 2x2 matrix") {
  const auto r = tridiagonal_ql({0.0, 0.0}, {0.5});
  std::vector<double> v = r.values;
  std::sort(v.begin(), v.end());
  CHECK(v[0] == doctest::Approx(-0.5));
  CHECK(v[1] == doctest::Approx(0.5));
}

TEST_CASE("QL matches a dense solver on random tridiagonal matrices") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {1, 2, 3, 7, 20, 41}) {
    std::vector<double> d(n), e(std::max(n - 1, 0));
    for (double& x : d) x = u(rng);
    for (double& x : e) x = u(rng);
    const Eigen::MatrixXd A = tridiagonal(d, e);
    const auto r = tridiagonal_ql(d, e);
    REQUIRE(static_cast<int>(r.values.size()) == n);
    const Eigen::Map<const Eigen::VectorXd> lam(r.values.data(), n);
    const double residual = (A * r.vectors - r.vectors * lam.asDiagonal()).cwiseAbs().maxCoeff();
    CHECK(residual < 1e-12);
    const double ortho =
        (r.vectors.transpose() * r.vectors - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    CHECK(ortho < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(A);
    std::vector<double> sorted = r.values;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 0; k < n; ++k) CHECK(sorted[k] == doctest::Approx(ref.eigenvalues()(k)).epsilon(1e-12));
  }
}

TEST_CASE("QL rejects mismatched sizes") {
  CHECK_THROWS_AS(tridiagonal_ql({0.0, 0.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("Jacobi SVD reconstructs random matrices") {
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int n : {1, 2, 5, 16}) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = g(rng);
    const JacobiSvd s = one_sided_jacobi_svd(A);
    const Eigen::MatrixXd back = s.U * s.singular_values.asDiagonal() * s.V.transpose();
    CHECK((back - A).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::JacobiSVD<Eigen::MatrixXd> ref(A);
    std::vector<double> mine(s.singular_values.data(), s.singular_values.data() + n);
    std::sort(mine.rbegin(), mine.rend());
    for (int k = 0; k < n; ++k) CHECK(mine[k] == doctest::Approx(ref.singularValues()(k)).epsilon(1e-12));
  }
}

TEST_CASE("Jacobi SVD keeps relative accuracy on a graded bidiagonal") {
  // Lower bidiagonal with entries spanning ~60 orders of magnitude. For a
  // bidiagonal whose product of diagonals is known, the product of the
  // singular values equals |det| exactly.
  const int n = 8;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  double log_det = 0.0;
  for (int j = 0; j < n; ++j) {
    B(j, j) = std::exp(-8.0 * j);
    log_det += -8.0 * j;
    if (j + 1 < n) B(j + 1, j) = std::exp(-8.0 * j - 4.0);
  }
  const JacobiSvd s = one_sided_jacobi_svd(B);
  double log_prod = 0.0;
  for (int k = 0; k < n; ++k) log_prod += std::log(s.singular_values(k));
  CHECK(log_prod == doctest::Approx(log_det).epsilon(1e-12));
  // The smallest singular value is far below eps * largest, yet resolved.
  CHECK(s.singular_values.minCoeff() < 1e-20);
  CHECK(s.singular_values.minCoeff() > 0.0);
}

TEST_CASE("Jacobi SVD requires a square matrix") {
  CHECK_THROWS_AS(one_sided_jacobi_svd(Eigen::MatrixXd::Zero(2, 3)), ConfigError);
}
