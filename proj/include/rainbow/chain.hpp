#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace rainbow {

struct Rainbow {};
struct Homogeneous {};
struct CustomProfile {
  std::vector<double> couplings;  // n_sites - 1 entries
};

using ChainKind = std::variant<Rainbow, Homogeneous, CustomProfile>;

/// Lattice and coupling parameters of an open chain of N = 2L sites.
///
/// Sites carry 0-based indices i = 0..N-1. The physical coordinate used by
/// the field-theory formulas is x(i) = i - (N-1)/2, so sites sit at
/// half-integers in [-L + 1/2, L - 1/2] and the chain ends are x = -L, L.
class ChainSpec {
 public:
  explicit ChainSpec(int n_sites, double h, double J = 1.0, ChainKind kind = Rainbow{});

  static ChainSpec rainbow(int n_sites, double h, double J = 1.0) {
    return ChainSpec(n_sites, h, J, Rainbow{});
  }
  static ChainSpec homogeneous(int n_sites, double J = 1.0) {
    return ChainSpec(n_sites, 0.0, J, Homogeneous{});
  }
  static ChainSpec custom(std::vector<double> couplings);

  int n_sites() const noexcept { return n_sites_; }
  int half_length() const noexcept { return n_sites_ / 2; }
  double h() const noexcept { return h_; }
  double J() const noexcept { return J_; }
  double alpha() const noexcept { return std::exp(-h_ / 2.0); }
  const ChainKind& kind() const noexcept { return kind_; }

  double position(int site) const noexcept {
    return site - 0.5 * (n_sites_ - 1);
  }

 private:
  int n_sites_;
  double h_;
  double J_;
  ChainKind kind_;
};

/// Rainbow amplitudes in left-to-right order: J/2 on the central link and
/// (J/2) exp(-h (m - 1/2)) on the m-th link away from it.
std::vector<double> rainbow_couplings(const ChainSpec& spec);

/// All N-1 amplitudes equal to J/2 (the h -> 0 limit of the rainbow).
std::vector<double> homogeneous_couplings(const ChainSpec& spec);

/// Dispatches on spec.kind().
std::vector<double> couplings(const ChainSpec& spec);

/// Symmetric tridiagonal hopping matrix with zero diagonal. Single-body
/// energies are the eigenvalues of -T.
class HoppingMatrix {
 public:
  explicit HoppingMatrix(std::vector<double> couplings);

  int dim() const noexcept { return static_cast<int>(couplings_.size()) + 1; }
  std::span<const double> couplings() const noexcept { return couplings_; }
  double coupling(int link) const { return couplings_.at(link); }

  Eigen::MatrixXd dense() const;
  double max_abs() const noexcept;

 private:
  std::vector<double> couplings_;
};

HoppingMatrix build_hopping_matrix(std::vector<double> couplings);
inline HoppingMatrix build_hopping_matrix(const ChainSpec& spec) {
  return build_hopping_matrix(couplings(spec));
}

// One-column CSV with header "t".
void write_couplings_csv(std::ostream& os, std::span<const double> couplings);
std::vector<double> read_couplings_csv(std::istream& is);
std::vector<double> read_couplings_csv(const std::filesystem::path& path);

}  // namespace rainbow
