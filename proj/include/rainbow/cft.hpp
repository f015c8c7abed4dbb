#pragma once

#include "rainbow/entanglement.hpp"

#include <map>
#include <span>
#include <vector>

namespace rainbow::cft {

// Below this inhomogeneity the h -> 0 limits are used.
inline constexpr double kSmallH = 1e-8;

struct CftParams {
  double c = 1.0;        // central charge
  double c_prime = 0.0;  // additive constant of the half-chain entropy
  std::map<int, double> E;  // Renyi order -> additive constant of block entropies
  double L = 0.0;
  double h = 0.0;

  double beta_eff() const;  // 2 pi / h
  double T_eff() const;     // h / (2 pi)
};

/// Coordinate map of the deformed chain, x in [-L, L] -> [-Lt, Lt].
class ConformalMap {
 public:
  ConformalMap(double L, double h);

  double operator()(double x) const;  // sign(x) (exp(h|x|) - 1) / h
  double L_tilde() const noexcept { return L_tilde_; }
  double sigma(double x) const;       // Weyl factor, exp(sigma) = exp(-h|x|)
  double L() const noexcept { return L_; }
  double h() const noexcept { return h_; }

 private:
  double L_;
  double h_;
  double L_tilde_;
};

double conformal_map(double x, double h, double L);

/// (c/6) ln((exp(hL) - 1)/h) + c'; reduces to (c/6) ln L + c' at h = 0.
double halfchain_entropy_prediction(double L, double h, const CftParams& params);

/// Smooth part of the Renyi entropy of the edge block [-L, x], without its
/// non-universal constant: ((n+1)/12n) ln Y(x).
double edge_block_prediction(double x, double n, double L, double h);

/// Renyi entropy of the interior block [x1, x2]:
/// ((n+1)/12n) ln(4 Y(x1, x2)) + E_n.
double bulk_block_prediction(double x1, double x2, double n, double L, double h, double E_n);

/// Spacing of the single-body entanglement energies of the half chain,
/// 2 pi^2 / (h L).
double thermofield_spacing_prediction(double L, double h);

/// Local hopping amplitude J(x) = (J/2) exp(-h|x|).
double local_coupling(double x, double h, double J);

/// Crossover position x0 with T = J(x0), clamped to [0, L].
double crossover_position(double T, double L, double h, double J);

/// Three-region entropy of the left block [-L, x] at physical temperature T.
double finite_T_profile(double x, double T, double L, double h, double J);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  double mean_abs = 0.0;  // mean absolute residual
  double r_squared = 0.0;
  int points = 0;
};

/// y ~ slope * g + intercept by ordinary least squares. Needs >= 4 points and
/// a non-constant g.
LinearFit fit_linear(std::span<const double> g, std::span<const double> y);
/// y ~ g + intercept (slope pinned to 1).
LinearFit fit_offset(std::span<const double> g, std::span<const double> y);

struct HalfChainSample {
  double L;
  double S;
};

struct CftFit {
  CftParams params;
  double rms = 0.0;
  double mean_abs = 0.0;
  int points = 0;
};

/// Calibrates c and c' (or only c' when fit_c is false) of the half-chain
/// prediction against measured entropies.
CftFit fit_halfchain(std::span<const HalfChainSample> samples, double h, bool fit_c = true);

/// Fits the additive constant of the edge-block prediction to a left-block
/// profile of a 2L-site chain over the cut positions |x| <= window * L.
/// The numerics are even/odd averaged first.
CftFit fit_edge_profile(const EntropyProfile& profile, double L, double h,
                        double window = 0.8);

/// q_i = p_i / 2 + (p_{i-1} + p_{i+1}) / 4 on interior points; end points
/// are copied. Removes the parity ripple of finite chains.
std::vector<double> even_odd_average(std::span<const double> values);

}  // namespace rainbow::cft
