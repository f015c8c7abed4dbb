#include "doctest.h"

#include "rainbow/cft.hpp"
#include "rainbow/error.hpp"
#include "rainbow/free_fermion.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace rainbow;
using namespace rainbow::cft;
using std::numbers::ln2;
using std::numbers::pi;

namespace {

CorrelationMatrix ground_state(int N, double h) {
  const ChainSpec spec = h > 0 ? ChainSpec::rainbow(N, h) : ChainSpec::homogeneous(N);
  return ground_state_correlations(diagonalize(build_hopping_matrix(spec)));
}

// Mean absolute deviation of interior-block numerics from the bulk formula
// after fitting E_n, over blocks with both ends inside |x| <= 0.8 L.
double bulk_deviation(int N, double h, double n) {
  const CorrelationMatrix C = ground_state(N, h);
  const double L = N / 2;
  std::vector<double> g, y;
  const std::vector<double> orders{n};
  for (int first = 1; first < N - 1; ++first) {
    for (int len = 2; first + len < N; ++len) {
      const double x1 = first - L, x2 = first + len - L;
      if (std::abs(x1) > 0.8 * L || std::abs(x2) > 0.8 * L) continue;
      g.push_back(bulk_block_prediction(x1, x2, n, L, h, 0.0));
      y.push_back(block_entanglement(C, Block::range(first, len), orders).renyi.at(n));
    }
  }
  return fit_offset(g, y).mean_abs;
}

}  // namespace

TEST_CASE("conformal map values") {
  CHECK(conformal_map(0.0, 1.0, 4.0) == 0.0);
  CHECK(conformal_map(1.0, 1.0, 4.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(conformal_map(-1.0, 1.0, 4.0) == doctest::Approx(1.0 - std::exp(1.0)).epsilon(1e-14));
  CHECK(conformal_map(0.7, 0.0, 4.0) == 0.7);
  CHECK(conformal_map(0.7, 1e-9, 4.0) == 0.7);
  CHECK(conformal_map(0.7, 1e-6, 4.0) == doctest::Approx(0.7).epsilon(1e-6));
  CHECK_THROWS_AS(conformal_map(4.5, 1.0, 4.0), ConfigError);
}

TEST_CASE("conformal map is odd, increasing and maps the ends to +-L~") {
  for (double h : {0.0, 0.3, 2.0}) {
    const ConformalMap f(10.0, h);
    CHECK(f(10.0) == doctest::Approx(f.L_tilde()).epsilon(1e-14));
    CHECK(f(-10.0) == doctest::Approx(-f.L_tilde()).epsilon(1e-14));
    double prev = f(-10.0);
    for (double x = -9.9; x <= 10.0; x += 0.1) {
      CHECK(f(x) > prev);
      CHECK(f(-x) == -f(x));
      prev = f(x);
    }
    CHECK(std::exp(f.sigma(3.0)) == doctest::Approx(std::exp(-3.0 * h)));
  }
}

TEST_CASE("effective temperature") {
  CftParams p;
  p.h = 0.8;
  CHECK(p.beta_eff() * p.T_eff() == doctest::Approx(1.0));
  CHECK(p.beta_eff() == doctest::Approx(2.0 * pi / 0.8));
  p.h = 0.0;
  CHECK_THROWS_AS(p.beta_eff(), ConfigError);
}

TEST_CASE("half-chain prediction") {
  CftParams p;
  p.c = 1.0;
  p.c_prime = 0.0;
  CHECK(halfchain_entropy_prediction(16.0, 1.0, p) ==
        doctest::Approx(std::log(std::exp(16.0) - 1.0) / 6.0).epsilon(1e-14));
  CHECK(halfchain_entropy_prediction(16.0, 1.0, p) == doctest::Approx(2.6666).epsilon(1e-4));
  p.c_prime = 0.3;
  for (double L : {1.0, 7.0, 100.0, 1000.0}) {
    CHECK(std::abs(halfchain_entropy_prediction(L, 0.0, p) - (std::log(L) / 6.0 + 0.3)) < 1e-15);
    CHECK(std::abs(halfchain_entropy_prediction(L, 1e-12, p) - (std::log(L) / 6.0 + 0.3)) < 1e-8);
  }
  // Volume law at large hL.
  const double h = 0.7;
  const double slope = halfchain_entropy_prediction(201.0, h, p) - halfchain_entropy_prediction(200.0, h, p);
  CHECK(slope == doctest::Approx(h / 6.0).epsilon(1e-12));
  CHECK(std::isfinite(halfchain_entropy_prediction(1e4, 1.0, p)));
}

TEST_CASE("edge-block prediction") {
  const double L = 20.0, h = 0.4;
  for (double x : {0.0, 3.0, 11.5, 19.0}) {
    CHECK(edge_block_prediction(x, 1.0, L, h) == edge_block_prediction(-x, 1.0, L, h));
  }
  const double y0 = 8.0 * std::expm1(h * L) / (pi * h);
  CHECK(edge_block_prediction(0.0, 1.0, L, h) == doctest::Approx(std::log(y0) / 6.0).epsilon(1e-14));
  CHECK(edge_block_prediction(0.0, 2.0, L, h) == doctest::Approx(std::log(y0) / 8.0).epsilon(1e-14));
  // h -> 0: (1/6) ln[4 (2L/pi) cos(pi x / 2L)].
  for (double x : {-15.0, 0.0, 7.0}) {
    const double homogeneous = std::log(4.0 * 2.0 * L / pi * std::cos(pi * x / (2.0 * L))) / 6.0;
    CHECK(edge_block_prediction(x, 1.0, L, 0.0) == doctest::Approx(homogeneous).epsilon(1e-14));
    CHECK(std::abs(edge_block_prediction(x, 1.0, L, 1e-9) - homogeneous) < 1e-7);
  }
  // Continuity in the Renyi order.
  CHECK(std::abs(edge_block_prediction(5.0, 1.0 + 1e-4, L, h) - edge_block_prediction(5.0, 1.0, L, h)) < 1e-3);
  CHECK_THROWS_AS(edge_block_prediction(L, 1.0, L, h), ConfigError);
  CHECK_THROWS_AS(edge_block_prediction(L + 1, 1.0, L, h), ConfigError);
}

TEST_CASE("edge-block prediction matches homogeneous numerics") {
  const int N = 64;
  const double L = N / 2;
  const EntropyProfile p = entropy_profile(ground_state(N, 0.0));
  const CftFit f = fit_edge_profile(p, L, 0.0);
  CHECK(f.mean_abs < 0.02);
}

TEST_CASE("bulk-block prediction") {
  const double L = 16.0, h = 0.5;
  // Mirror block: the first cosine is 1, so Y reduces to the remaining factors.
  const ConformalMap f(L, h);
  const double a = 5.0;
  const double Lt = f.L_tilde();
  const double xa = f(a);
  const double Y = std::exp(-2.0 * h * a) * 16.0 * Lt * Lt / (pi * pi) *
                   std::pow(std::sin(pi * xa / (2.0 * Lt)), 2) * std::pow(std::cos(pi * xa / (2.0 * Lt)), 2);
  CHECK(bulk_block_prediction(-a, a, 1.0, L, h, 0.25) ==
        doctest::Approx(std::log(4.0 * Y) / 6.0 + 0.25).epsilon(1e-13));
  CHECK_THROWS_AS(bulk_block_prediction(2.0, 2.0, 1.0, L, h, 0.0), ConfigError);
  CHECK_THROWS_AS(bulk_block_prediction(-L, 2.0, 1.0, L, h, 0.0), ConfigError);
}

TEST_CASE("bulk-block prediction tracks interior block numerics") {
  CHECK(bulk_deviation(64, 0.0, 2.0) < 0.1);
  CHECK(bulk_deviation(64, 0.5, 1.0) < 0.01);
}

TEST_CASE("thermofield spacing") {
  CHECK(thermofield_spacing_prediction(16.0, 1.0) == doctest::Approx(2.0 * pi * pi / 16.0));
  CHECK(thermofield_spacing_prediction(16.0, 1.0) == doctest::Approx(1.2337).epsilon(1e-4));
  CHECK(thermofield_spacing_prediction(16.0, 2.0) == doctest::Approx(0.5 * thermofield_spacing_prediction(16.0, 1.0)));
  CHECK_THROWS_AS(thermofield_spacing_prediction(16.0, 0.0), ConfigError);
}

TEST_CASE("crossover position") {
  CHECK(local_coupling(0.0, 0.5, 1.0) == 0.5);
  CHECK(local_coupling(-2.0, 0.5, 1.0) == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(crossover_position(local_coupling(7.0, 0.5, 1.0), 32.0, 0.5, 1.0) == doctest::Approx(7.0));
  CHECK(crossover_position(0.5, 32.0, 0.5, 1.0) == 0.0);
  CHECK(crossover_position(2.0, 32.0, 0.5, 1.0) == 0.0);
  CHECK(crossover_position(1e-30, 32.0, 0.5, 1.0) == 32.0);
  CHECK_THROWS_AS(crossover_position(0.1, 32.0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(crossover_position(0.0, 32.0, 0.5, 1.0), ConfigError);
}

TEST_CASE("finite-temperature profile") {
  const double L = 32.0, h = 0.5, J = 1.0;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> x0d(0.0, L);
  for (int trial = 0; trial < 20; ++trial) {
    const double T = local_coupling(x0d(rng), h, J);
    const double x0 = crossover_position(T, L, h, J);
    const double eps = 1e-9;
    for (double s : {-1.0, 1.0}) {
      const double edge = s * x0;
      if (std::abs(edge) + eps >= L) continue;
      CHECK(std::abs(finite_T_profile(edge - eps, T, L, h, J) - finite_T_profile(edge + eps, T, L, h, J)) < 1e-8);
    }
    double prev = finite_T_profile(-L, T, L, h, J);
    for (double x = -L + 0.25; x <= L; x += 0.25) {
      const double v = finite_T_profile(x, T, L, h, J);
      CHECK(std::abs(v - prev) < 0.25 * ln2 + 1e-12);
      prev = v;
    }
  }
  // Branch structure at x0 = L / 2.
  const double x0 = L / 2;
  const double T = local_coupling(x0, h, J);
  CHECK(finite_T_profile(-L, T, L, h, J) == 0.0);
  CHECK(finite_T_profile(-20.0, T, L, h, J) == doctest::Approx(12.0 * ln2));
  CHECK(finite_T_profile(0.0, T, L, h, J) == doctest::Approx((L - x0) * ln2 + x0 * h / 6.0));
  CHECK(finite_T_profile(20.0, T, L, h, J) == doctest::Approx((L - 2 * x0 + 20.0) * ln2));
  // Infinite-temperature clamp: x0 = 0, left branch (L - |x|) ln 2, right
  // branch (L + x) ln 2 as the formula reads.
  CHECK(finite_T_profile(-10.0, 1.0, L, h, J) == doctest::Approx(22.0 * ln2));
  CHECK(finite_T_profile(10.0, 1.0, L, h, J) == doctest::Approx(42.0 * ln2));
  CHECK_THROWS_AS(finite_T_profile(0.0, 0.1, L, 0.0, J), ConfigError);
}

TEST_CASE("linear fits") {
  const std::vector<double> g{1, 2, 3, 4, 5};
  const std::vector<double> flat{2, 2, 2, 2, 2};
  const LinearFit c = fit_offset(g, std::vector<double>{3, 4, 5, 6, 7});
  CHECK(c.intercept == doctest::Approx(2.0));
  CHECK(c.rms == doctest::Approx(0.0).epsilon(1e-15));
  const LinearFit lin = fit_linear(g, std::vector<double>{1, 3, 5, 7, 9});
  CHECK(lin.slope == doctest::Approx(2.0));
  CHECK(lin.intercept == doctest::Approx(-1.0));
  CHECK(lin.r_squared == doctest::Approx(1.0));
  const LinearFit k = fit_linear(g, flat);
  CHECK(k.slope == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(k.rms == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(fit_linear(flat, g), NumericalError);
  CHECK_THROWS_AS(fit_linear(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), ConfigError);
}

TEST_CASE("central charge from rainbow half-chain entropies") {
  std::vector<HalfChainSample> samples;
  const double h = 0.5;
  for (int L = 4; L <= 16; ++L) {
    const CorrelationMatrix C = ground_state(2 * L, h);
    samples.push_back({double(L), block_entanglement(C, Block::left(L)).vn_entropy});
  }
  const CftFit f = fit_halfchain(samples, h);
  CHECK(std::abs(f.params.c - 1.0) < 0.05);
  const CftFit pinned = fit_halfchain(samples, h, false);
  CHECK(pinned.params.c == 1.0);
  CHECK(pinned.rms < 0.05);
}

TEST_CASE("central charge of the uniform chain") {
  std::vector<HalfChainSample> samples;
  for (int N = 8; N <= 64; N += 2) {
    const CorrelationMatrix C = ground_state(N, 0.0);
    samples.push_back({N / 2.0, block_entanglement(C, Block::left(N / 2)).vn_entropy});
  }
  const CftFit f = fit_halfchain(samples, 0.0);
  CHECK(std::abs(f.params.c - 1.0) < 0.05);
}

TEST_CASE("even/odd average") {
  const std::vector<double> p{1, 3, 1, 3, 1};
  const auto q = even_odd_average(p);
  CHECK(q == std::vector<double>{1, 2, 2, 2, 1});
}
