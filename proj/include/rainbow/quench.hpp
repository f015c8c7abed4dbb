#pragma once

#include "rainbow/chain.hpp"
#include "rainbow/entanglement.hpp"
#include "rainbow/free_fermion.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace rainbow {

/// Unitary evolution of a Gaussian state under a quadratic Hamiltonian,
/// C(t) = exp(iht) C0 exp(-iht) with h = -T. The Hamiltonian is diagonalized
/// once; every time sample is computed directly from t = 0, and t = 0
/// itself returns the initial matrix unchanged.
class QuenchEvolver {
 public:
  QuenchEvolver(const CorrelationMatrix& initial, const HoppingMatrix& final_hamiltonian);

  CorrelationMatrix at(double t) const;
  int dim() const noexcept { return static_cast<int>(energies_.size()); }

 private:
  CorrelationMatrix initial_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXd modes_;
  Eigen::MatrixXcd rotated_;  // modes^T C0 modes
};

CorrelationMatrix evolve(const CorrelationMatrix& initial, const HoppingMatrix& final_hamiltonian,
                         double t);

/// Nearest-neighbour bonding orbitals on (2m + offset, 2m + 1 + offset).
/// With offset 1 the two end sites 0 and N-1 form the remaining pair.
CorrelationMatrix build_dimer_state(int n_sites, int offset = 0);

struct FromHamiltonian {
  double h = 8.0;
};
/// One sign per bond (i, N-1-i), indexed by the left site i = 0..N/2-1.
using BondSigns = std::vector<int>;
using RainbowPhases = std::variant<FromHamiltonian, BondSigns>;

/// Sign pattern of the large-h rainbow ground state: (-1)^(k+1) for the
/// k-th bond counted from the centre (k = 1 innermost).
BondSigns rainbow_bond_signs(int n_sites);

/// Concentric valence-bond state. The default realization is the ground
/// state of the rainbow chain at h = 8, which carries the physical bond
/// phases; explicit signs build ideal bonds with C_{i,N-1-i} = sign / 2.
CorrelationMatrix build_rainbow_ideal(int n_sites, const RainbowPhases& phases = FromHamiltonian{});

struct GroundStateOf {
  ChainSpec spec;
};
struct RainbowInitial {
  RainbowPhases phases = FromHamiltonian{};
};
struct DimerInitial {
  int offset = 0;
};
using InitialState = std::variant<GroundStateOf, RainbowInitial, DimerInitial>;

CorrelationMatrix realize(const InitialState& initial, int n_sites);

/// 0, dt, 2 dt, ... up to and including tmax (within dt / 1e9).
std::vector<double> time_grid(double tmax, double dt);

struct QuenchSummary {
  double t_min = 0.0;  // first time of the minimal half-chain entropy
  double S_min = 0.0;
  double t_revival = 0.0;  // NaN when no sample follows t_min
  double revival_fidelity = 0.0;
  // First time each tracked block drops below S(0) - 0.1, if it does.
  std::vector<std::optional<double>> transient_delay;
};

struct QuenchTrajectory {
  std::vector<double> times;
  std::vector<int> block_lengths;               // tracked left blocks
  std::vector<std::vector<double>> entropy;     // [time][block]
  std::vector<double> half_chain;               // left block of N/2 sites
  std::vector<double> trace;                    // trace C(t)
  std::vector<double> purity_defect;            // max |C^2 - C|
  std::vector<CorrelationMatrix> snapshots;     // only when requested
  QuenchSummary summary;
};

struct QuenchOptions {
  double order = 1.0;  // Renyi order of the tracked entropies
  bool keep_snapshots = false;
};

QuenchTrajectory run_quench(const InitialState& initial, const ChainSpec& final_spec,
                            std::span<const double> times, std::span<const int> block_lengths,
                            const QuenchOptions& options = {});

/// Similarity of the tracked profile at sample k to the t = 0 profile:
/// 1 - sum_b |S_b(t) - S_b(0)| / sum_b min(l_b, N - l_b) ln 2.
double profile_similarity(const QuenchTrajectory& trajectory, std::size_t k, int n_sites);

// Long format: t,ell,S,trace,purity_defect (the last two repeat per time).
void write_trajectory_csv(std::ostream& os, const QuenchTrajectory& trajectory);
// {t_min, S_min, t_revival, revival_fidelity, transient_delay}
void write_revival_json(std::ostream& os, const QuenchSummary& summary);

}  // namespace rainbow
