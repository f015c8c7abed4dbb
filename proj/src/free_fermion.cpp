#include "rainbow/free_fermion.hpp"

#include "rainbow/eigensolver.hpp"
#include "rainbow/error.hpp"
#include "rainbow/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace rainbow {
namespace {

constexpr double kFermiTolerance = 1e-12;
constexpr double kResidualTolerance = 1e-10;

bool has_nonzero_even_links(std::span<const double> t, int n) {
  if (n % 2 != 0) return false;
  for (int j = 0; 2 * j < n - 1; ++j)
    if (t[2 * j] == 0.0) return false;
  return true;
}

void fix_signs(Eigen::MatrixXd& modes) {
  for (Eigen::Index k = 0; k < modes.cols(); ++k) {
    auto col = modes.col(k);
    const double cutoff = 1e-8 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > cutoff) {
        if (col(i) < 0.0) col = -col;
        break;
      }
    }
  }
}

// -T is [[0, -B], [-B^T, 0]] in (even sites, odd sites) order with B lower
// bidiagonal: B(j, j) = t[2j], B(j+1, j) = t[2j+1]. If B = U S V^T, the modes
// (u_i, v_i)/sqrt2 have energy -s_i and (u_i, -v_i)/sqrt2 have energy +s_i.
bool diagonalize_bipartite(std::span<const double> t, int n, SingleBodySpectrum& out) {
  const int m = n / 2;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    B(j, j) = t[2 * j];
    if (j + 1 < m) B(j + 1, j) = t[2 * j + 1];
  }
  const JacobiSvd svd = one_sided_jacobi_svd(std::move(B));
  for (int i = 0; i < m; ++i)
    if (!(svd.singular_values(i) >= std::numeric_limits<double>::min())) return false;

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return svd.singular_values(a) > svd.singular_values(b);
  });

  out.energies.assign(n, 0.0);
  out.modes = Eigen::MatrixXd::Zero(n, n);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < m; ++k) {
    const int i = order[k];
    const int lo = k;             // -s_i, largest s first
    const int hi = n - 1 - k;     // +s_i
    out.energies[lo] = -svd.singular_values(i);
    out.energies[hi] = svd.singular_values(i);
    for (int j = 0; j < m; ++j) {
      out.modes(2 * j, lo) = r * svd.U(j, i);
      out.modes(2 * j + 1, lo) = r * svd.V(j, i);
      out.modes(2 * j, hi) = r * svd.U(j, i);
      out.modes(2 * j + 1, hi) = -r * svd.V(j, i);
    }
  }
  out.relative_accuracy = true;
  return true;
}

void diagonalize_ql(std::span<const double> t, int n, SingleBodySpectrum& out) {
  std::vector<double> off(t.size());
  std::transform(t.begin(), t.end(), off.begin(), [](double x) { return -x; });
  TridiagonalEigen eig = tridiagonal_ql(std::vector<double>(n, 0.0), std::move(off));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return eig.values[a] < eig.values[b]; });
  out.energies.resize(n);
  out.modes.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.energies[k] = eig.values[order[k]];
    out.modes.col(k) = eig.vectors.col(order[k]);
  }
  out.relative_accuracy = false;
}

void check_residuals(std::span<const double> t, const SingleBodySpectrum& s) {
  const int n = s.dim();
  double norm = 0.0;
  for (double e : s.energies) norm = std::max(norm, std::abs(e));
  const double bound = kResidualTolerance * std::max(norm, std::numeric_limits<double>::min());
  for (int k = 0; k < n; ++k) {
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      double hv = 0.0;
      if (i > 0) hv -= t[i - 1] * s.modes(i - 1, k);
      if (i + 1 < n) hv -= t[i] * s.modes(i + 1, k);
      const double r = hv - s.energies[k] * s.modes(i, k);
      sq += r * r;
    }
    const double residual = std::sqrt(sq);
    if (!(residual <= bound))
      throw ConvergenceError("diagonalize: eigenpair residual too large", k, residual);
  }
}

double fermi_dirac(double beta, double energy) {
  const double x = beta * energy;
  if (x > 0.0) {
    const double w = std::exp(-x);
    return w / (1.0 + w);
  }
  return 1.0 / (1.0 + std::exp(x));
}

}  // namespace

SingleBodySpectrum diagonalize(const HoppingMatrix& T, EigenRoute route) {
  const int n = T.dim();
  const auto t = T.couplings();
  SingleBodySpectrum out;
  const bool bipartite_possible = has_nonzero_even_links(t, n);

  switch (route) {
    case EigenRoute::Bipartite:
      if (!bipartite_possible)
        throw ConfigError(
            "diagonalize: bipartite route needs an even chain with nonzero "
            "couplings on even links");
      if (!diagonalize_bipartite(t, n, out))
        throw NumericalError("diagonalize: bipartite route failed");
      break;
    case EigenRoute::ImplicitQL:
      diagonalize_ql(t, n, out);
      break;
    case EigenRoute::Auto:
      if (!bipartite_possible || !diagonalize_bipartite(t, n, out))
        diagonalize_ql(t, n, out);
      break;
  }
  fix_signs(out.modes);
  check_residuals(t, out);
  return out;
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXcd values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols())
    throw ConfigError("correlation matrix must be square");
}

CorrelationMatrix::CorrelationMatrix(const Eigen::MatrixXd& values)
    : CorrelationMatrix(Eigen::MatrixXcd(values.cast<std::complex<double>>())) {}

bool CorrelationMatrix::is_real() const {
  return values_.imag().cwiseAbs().maxCoeff() == 0.0;
}

double CorrelationMatrix::purity_defect() const {
  if (dim() == 0) return 0.0;
  return (values_ * values_ - values_).cwiseAbs().maxCoeff();
}

double CorrelationMatrix::hermiticity_defect() const {
  if (dim() == 0) return 0.0;
  return (values_ - values_.adjoint()).cwiseAbs().maxCoeff();
}

CorrelationMatrix ground_state_correlations(const SingleBodySpectrum& spectrum) {
  const int n = spectrum.dim();
  if (n % 2 != 0)
    throw ConfigError("ground_state_correlations: half filling needs an even number of sites");
  const int filled = n / 2;
  const double below = spectrum.energies[filled - 1];
  const double above = spectrum.energies[filled];
  // With relative accuracy every representable nonzero energy is resolved;
  // otherwise anything within kFermiTolerance of zero is ambiguous.
  const double floor =
      spectrum.relative_accuracy ? std::numeric_limits<double>::min() : kFermiTolerance;
  if (!(below < -floor) || !(above > floor))
    throw FillingAmbiguity("ground_state_correlations: filling ambiguity, zero mode at the "
                           "Fermi level (energies " + format_double(below) + ", " +
                           format_double(above) + ")");
  const auto filled_modes = spectrum.modes.leftCols(filled);
  return CorrelationMatrix(Eigen::MatrixXd(filled_modes * filled_modes.transpose()));
}

CorrelationMatrix thermal_correlations(const SingleBodySpectrum& spectrum, double beta) {
  if (std::isnan(beta) || beta < 0.0)
    throw ConfigError("thermal_correlations: beta must be >= 0");
  if (std::isinf(beta)) return ground_state_correlations(spectrum);
  const int n = spectrum.dim();
  Eigen::VectorXd occupation(n);
  for (int k = 0; k < n; ++k) occupation(k) = fermi_dirac(beta, spectrum.energies[k]);
  const Eigen::MatrixXd& v = spectrum.modes;
  return CorrelationMatrix(Eigen::MatrixXd(v * occupation.asDiagonal() * v.transpose()));
}

double exact_oracle_entropy(const HoppingMatrix& T, std::span<const int> block) {
  const int n = T.dim();
  if (n > 12) throw ConfigError("exact_oracle_entropy: N <= 12 required");
  if (n % 2 != 0) throw ConfigError("exact_oracle_entropy: N must be even");
  if (block.empty()) throw ConfigError("exact_oracle_entropy: empty block");

  std::vector<bool> in_block(n, false);
  for (int s : block) {
    if (s < 0 || s >= n) throw ConfigError("exact_oracle_entropy: block out of range");
    if (in_block[s]) throw ConfigError("exact_oracle_entropy: repeated site in block");
    in_block[s] = true;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(-T.dense());
  const int filled = n / 2;
  if (std::abs(eig.eigenvalues()(filled - 1)) < kFermiTolerance ||
      std::abs(eig.eigenvalues()(filled)) < kFermiTolerance)
    throw FillingAmbiguity("exact_oracle_entropy: filling ambiguity");
  const Eigen::MatrixXd modes = eig.eigenvectors().leftCols(filled);

  // Mode ordering for the tensor split: block sites first, then the rest.
  std::vector<int> order;
  for (int s = 0; s < n; ++s)
    if (in_block[s]) order.push_back(s);
  const int na = static_cast<int>(order.size());
  for (int s = 0; s < n; ++s)
    if (!in_block[s]) order.push_back(s);
  const int nb = n - na;

  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(Eigen::Index{1} << na, Eigen::Index{1} << nb);
  Eigen::MatrixXd slater(filled, filled);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != filled) continue;
    int row = 0;
    for (int r = 0; r < n; ++r)
      if (mask & (1u << r)) slater.row(row++) = modes.row(order[r]);
    const double amplitude = slater.partialPivLu().determinant();
    psi(mask & ((1u << na) - 1), mask >> na) = amplitude;
  }

  const Eigen::MatrixXd rho =
      na <= nb ? Eigen::MatrixXd(psi * psi.transpose()) : Eigen::MatrixXd(psi.transpose() * psi);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reduced(rho, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < reduced.eigenvalues().size(); ++i) {
    const double p = reduced.eigenvalues()(i);
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return entropy;
}

void write_correlation_csv(std::ostream& os, const CorrelationMatrix& C) {
  const int n = C.dim();
  const bool real = C.is_real();
  for (int j = 0; j < n; ++j) {
    if (j) os << ',';
    if (real)
      os << 'c' << j;
    else
      os << "re" << j << ",im" << j;
  }
  os << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) os << ',';
      os << format_double(C(i, j).real());
      if (!real) os << ',' << format_double(C(i, j).imag());
    }
    os << '\n';
  }
}

CorrelationMatrix read_correlation_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("correlation CSV: bad cell '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const int n = static_cast<int>(rows.size());
  if (n == 0) throw ConfigError("correlation CSV: no data rows");
  const int width = static_cast<int>(rows.front().size());
  const bool complex = width == 2 * n;
  if (width != n && !complex) throw ConfigError("correlation CSV: matrix is not square");
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != width)
      throw ConfigError("correlation CSV: ragged rows");
    for (int j = 0; j < n; ++j)
      m(i, j) = complex ? std::complex<double>(rows[i][2 * j], rows[i][2 * j + 1])
                        : std::complex<double>(rows[i][j], 0.0);
  }
  return CorrelationMatrix(std::move(m));
}

}  // namespace rainbow
