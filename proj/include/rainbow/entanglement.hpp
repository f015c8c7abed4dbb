#pragma once

#include "rainbow/free_fermion.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rainbow {

/// A set of site indices. Left blocks and contiguous ranges are the common
/// cases; arbitrary sets are allowed.
struct Block {
  std::vector<int> sites;

  static Block left(int length);
  static Block range(int first, int length);
  int size() const noexcept { return static_cast<int>(sites.size()); }
};

struct EntanglementData {
  Block block;
  std::vector<double> nu;        // ascending eigenvalues of C_A
  std::vector<double> energies;  // ascending, ln((1 - nu)/nu) on clamped nu
  double f0 = 0.0;               // sum_p ln(1 + exp(-e_p))
  double vn_entropy = 0.0;
  std::map<double, double> renyi;  // order -> S_n; order 1 is the von Neumann entropy
};

double von_neumann_entropy(std::span<const double> nu);
double renyi_entropy(std::span<const double> nu, double order);

EntanglementData block_entanglement(const CorrelationMatrix& C, const Block& block,
                                    std::span<const double> orders = {});

enum class BlockFamily { Left, SlidingWindow };

struct EntropyProfile {
  double order = 1.0;
  BlockFamily family = BlockFamily::Left;
  int window = 0;  // sliding window width, unused for left blocks
  // (ell, S): for left blocks ell is the block length, for sliding windows
  // the first site of the window.
  std::vector<std::pair<int, double>> values;

  std::vector<double> entropies() const;
};

/// S(ell) for every left block ell = 1..N-1.
EntropyProfile entropy_profile(const CorrelationMatrix& C, double order = 1.0);
/// S for every window [first, first + width).
EntropyProfile window_profile(const CorrelationMatrix& C, int width, double order = 1.0);

void write_profile_csv(std::ostream& os, const EntropyProfile& profile);

enum class Ladder { HalfInteger, Integer };

struct SpacingFit {
  double delta = 0.0;     // fitted level spacing
  double goodness = 0.0;  // rms residual / delta
  Ladder ladder = Ladder::HalfInteger;
  int points = 0;         // energies used in the fit
  int first = 0;          // index of the first fitted energy
  double offset = 0.0;    // fitted energy i ~ delta * (i - first - offset)
  bool flagged = false;   // spacing undefined (no usable levels)
};

/// Least-squares fit of the ascending single-body entanglement energies to
/// delta * p on a centred ladder. Energies with |e| > 30 are dropped; both
/// integer and half-integer ladders are tried and the better one kept.
SpacingFit entanglement_spacing(const EntanglementData& data);

/// The `count` lowest eigenvalues of the entanglement Hamiltonian
/// sum_p e_p n_p + f0, ascending. Exact.
std::vector<double> many_body_entanglement_levels(const EntanglementData& data,
                                                  std::size_t count);

struct Arc {
  int i;
  int j;
  double weight;  // |C_ij|
};

struct ArcDiagram {
  int n_sites = 0;
  std::vector<Arc> arcs;  // i < j, ordered by (i, j)
};

ArcDiagram arc_diagram(const CorrelationMatrix& C, double threshold);

void write_arcs_csv(std::ostream& os, const ArcDiagram& diagram);
/// Unit circle, sites evenly spaced on the circumference starting at the
/// top and running clockwise, straight chords with opacity weight / 0.5.
void write_arcs_svg(std::ostream& os, const ArcDiagram& diagram, int pixels = 480);

}  // namespace rainbow
