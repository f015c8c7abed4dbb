#include "rainbow/eigensolver.hpp"

#include "rainbow/error.hpp"

#include <cmath>
#include <limits>

namespace rainbow {

TridiagonalEigen tridiagonal_ql(std::vector<double> d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  if (n == 0 || static_cast<int>(e.size()) != n - 1)
    throw ConfigError("tridiagonal_ql: off-diagonal must have n-1 entries");
  e.push_back(0.0);
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxIterations = 60;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == kMaxIterations)
        throw ConvergenceError("tridiagonal_ql: no convergence", l,
                               std::abs(e[l]));

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (int k = 0; k < n; ++k) {
          f = z(k, i + 1);
          z(k, i + 1) = s * z(k, i) + c * f;
          z(k, i) = c * z(k, i) - s * f;
        }
      }
      if (r == 0.0 && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  return {std::move(d), std::move(z)};
}

JacobiSvd one_sided_jacobi_svd(Eigen::MatrixXd G) {
  const Eigen::Index n = G.cols();
  if (G.rows() != n) throw ConfigError("one_sided_jacobi_svd: matrix must be square");
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
  const double tol =
      std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<Eigen::Index>(n, 1));
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  double worst = 0.0;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    worst = 0.0;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double np = G.col(p).stableNorm();
        const double nq = G.col(q).stableNorm();
        if (np == 0.0 || nq == 0.0) continue;
        // Cosine of the angle between the columns, computed on normalized
        // data so that tiny columns do not underflow.
        double cosine = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) cosine += (G(k, p) / np) * (G(k, q) / nq);
        if (std::abs(cosine) <= tol) continue;
        worst = std::max(worst, std::abs(cosine));
        rotated = true;

        const double zeta = (nq / np - np / nq) / (2.0 * cosine);
        const double t = zeta == 0.0
                             ? 1.0
                             : std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double gp = G(k, p), gq = G(k, q);
          G(k, p) = c * gp - s * gq;
          G(k, q) = s * gp + c * gq;
          const double vp = V(k, p), vq = V(k, q);
          V(k, p) = c * vp - s * vq;
          V(k, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == kMaxSweeps)
    throw ConvergenceError("one_sided_jacobi_svd: columns not orthogonal", sweep, worst);

  JacobiSvd out;
  out.singular_values.resize(n);
  out.U.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm = G.col(j).stableNorm();
    out.singular_values(j) = norm;
    if (norm > 0.0)
      out.U.col(j) = G.col(j) / norm;
    else
      out.U.col(j).setZero();
  }
  out.V = std::move(V);
  out.sweeps = sweep + 1;
  return out;
}

}  // namespace rainbow
