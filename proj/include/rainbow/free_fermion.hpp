#pragma once

#include "rainbow/chain.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

namespace rainbow {

/// Eigen-decomposition of -T.
struct SingleBodySpectrum {
  std::vector<double> energies;  // ascending
  Eigen::MatrixXd modes;         // column k is the mode of energies[k]
  // True when every energy is known to high relative accuracy (bipartite
  // Jacobi route); false for the absolute-accuracy QL route.
  bool relative_accuracy = false;

  int dim() const noexcept { return static_cast<int>(energies.size()); }
};

enum class EigenRoute {
  Auto,       // bipartite Jacobi when possible, QL otherwise
  Bipartite,  // even dimension with nonzero even-link couplings only
  ImplicitQL,
};

/// Full eigendecomposition of -T with ascending energies. Each mode is
/// normalized and signed so that its first component with magnitude above
/// 1e-8 of its largest entry is positive.
SingleBodySpectrum diagonalize(const HoppingMatrix& T, EigenRoute route = EigenRoute::Auto);

/// Hermitian matrix C_ij = <c_i^dagger c_j>. Static states are real; time
/// evolved states acquire an imaginary part.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  explicit CorrelationMatrix(Eigen::MatrixXcd values);
  explicit CorrelationMatrix(const Eigen::MatrixXd& values);

  int dim() const noexcept { return static_cast<int>(values_.rows()); }
  const Eigen::MatrixXcd& values() const noexcept { return values_; }
  std::complex<double> operator()(int i, int j) const { return values_(i, j); }

  bool is_real() const;
  Eigen::MatrixXd real() const { return values_.real(); }

  double trace() const { return values_.trace().real(); }
  /// max |(C^2 - C)_ij|; zero for pure Gaussian states.
  double purity_defect() const;
  /// max |C_ij - conj(C_ji)|
  double hermiticity_defect() const;

 private:
  Eigen::MatrixXcd values_;
};

/// Fermi sea of the N/2 lowest modes. Throws FillingAmbiguity when a zero
/// mode sits at the Fermi level, ConfigError for odd N.
CorrelationMatrix ground_state_correlations(const SingleBodySpectrum& spectrum);

/// Gibbs state with Fermi-Dirac occupations 1/(1 + exp(beta * e)).
/// beta = +infinity gives the ground state.
CorrelationMatrix thermal_correlations(const SingleBodySpectrum& spectrum, double beta);

/// Von Neumann entropy (natural log) of a block of the half-filled ground
/// state, computed by brute force: the 2^N Slater determinant is expanded
/// in the occupation basis and the block is traced out. Independent of the
/// correlation-matrix route; limited to N <= 12.
double exact_oracle_entropy(const HoppingMatrix& T, std::span<const int> block);

// Full N x N matrix, 17 significant digits. Complex matrices get 2N
// columns per row: re_0,im_0,re_1,im_1,...
void write_correlation_csv(std::ostream& os, const CorrelationMatrix& C);
CorrelationMatrix read_correlation_csv(std::istream& is);

}  // namespace rainbow
