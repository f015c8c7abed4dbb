#include "rainbow/cft.hpp"

#include "rainbow/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rainbow::cft {
namespace {

using std::numbers::pi;

// ln((exp(hL) - 1) / h), stable for large hL and exact at h -> 0.
double log_L_tilde(double L, double h) {
  if (h < kSmallH) return std::log(L);
  const double z = h * L;
  if (z > 30.0) return z + std::log1p(-std::exp(-z)) - std::log(h);
  return std::log(std::expm1(z) / h);
}

// x~ / L~ = sign(x) (exp(h|x|) - 1) / (exp(hL) - 1).
double map_ratio(double x, double L, double h) {
  const double a = std::abs(x);
  double r;
  if (h < kSmallH) {
    r = a / L;
  } else if (h * L > 30.0) {
    r = std::exp(h * (a - L)) * (-std::expm1(-h * a)) / (-std::expm1(-h * L));
  } else {
    r = std::expm1(h * a) / std::expm1(h * L);
  }
  return std::copysign(r, x);
}

void require_inside(double x, double L, const char* what) {
  if (!(L > 0.0)) throw ConfigError(std::string(what) + ": L must be > 0");
  if (!(std::abs(x) <= L * (1.0 + 1e-12)))
    throw ConfigError(std::string(what) + ": |x| must not exceed L");
}

double renyi_prefactor(double n) {
  if (!(n > 0.0)) throw ConfigError("Renyi order must be > 0");
  return (n + 1.0) / (12.0 * n);
}

}  // namespace

double CftParams::beta_eff() const {
  if (!(h > 0.0)) throw ConfigError("effective temperature needs h > 0");
  return 2.0 * pi / h;
}

double CftParams::T_eff() const { return h / (2.0 * pi); }

ConformalMap::ConformalMap(double L, double h) : L_(L), h_(h) {
  if (!(L > 0.0)) throw ConfigError("ConformalMap: L must be > 0");
  if (!(h >= 0.0)) throw ConfigError("ConformalMap: h must be >= 0");
  L_tilde_ = h < kSmallH ? L : std::expm1(h * L) / h;
}

double ConformalMap::operator()(double x) const {
  require_inside(x, L_, "conformal_map");
  if (h_ < kSmallH) return x;
  return std::copysign(std::expm1(h_ * std::abs(x)) / h_, x);
}

double ConformalMap::sigma(double x) const { return -h_ * std::abs(x); }

double conformal_map(double x, double h, double L) { return ConformalMap(L, h)(x); }

double halfchain_entropy_prediction(double L, double h, const CftParams& params) {
  if (!(L > 0.0)) throw ConfigError("halfchain_entropy_prediction: L must be > 0");
  if (!(h >= 0.0)) throw ConfigError("halfchain_entropy_prediction: h must be >= 0");
  return params.c / 6.0 * log_L_tilde(L, h) + params.c_prime;
}

double edge_block_prediction(double x, double n, double L, double h) {
  require_inside(x, L, "edge_block_prediction");
  if (!(h >= 0.0)) throw ConfigError("edge_block_prediction: h must be >= 0");
  const double cosine = std::cos(0.5 * pi * std::abs(map_ratio(x, L, h)));
  if (!(std::abs(x) < L) || !(cosine > 0.0))
    throw ConfigError("edge_block_prediction: cut at the chain end (|x| = L)");
  const double log_y = std::log(8.0 / pi) - h * std::abs(x) + log_L_tilde(L, h) +
                       std::log(cosine);
  return renyi_prefactor(n) * log_y;
}

double bulk_block_prediction(double x1, double x2, double n, double L, double h, double E_n) {
  require_inside(x1, L, "bulk_block_prediction");
  require_inside(x2, L, "bulk_block_prediction");
  if (!(x1 < x2)) throw ConfigError("bulk_block_prediction: need x1 < x2");
  if (!(h >= 0.0)) throw ConfigError("bulk_block_prediction: h must be >= 0");
  const double r1 = map_ratio(x1, L, h);
  const double r2 = map_ratio(x2, L, h);
  const double sum_cos = std::cos(0.25 * pi * (r1 + r2));
  const double diff_sin = std::sin(0.25 * pi * (r1 - r2));
  const double c1 = std::cos(0.5 * pi * r1);
  const double c2 = std::cos(0.5 * pi * r2);
  if (!(std::abs(x1) < L) || !(std::abs(x2) < L) || !(c1 > 0.0) || !(c2 > 0.0) || diff_sin == 0.0 || !(sum_cos > 0.0))
    throw ConfigError("bulk_block_prediction: block touches a chain end");
  const double log_y = -h * (std::abs(x1) + std::abs(x2)) + std::log(16.0) +
                       2.0 * log_L_tilde(L, h) - 2.0 * std::log(pi) - std::log(sum_cos) +
                       2.0 * std::log(std::abs(diff_sin)) + std::log(c1) + std::log(c2);
  return renyi_prefactor(n) * (std::log(4.0) + log_y) + E_n;
}

double thermofield_spacing_prediction(double L, double h) {
  if (!(h > 0.0)) throw ConfigError("thermofield_spacing_prediction: needs h > 0");
  if (!(L > 0.0)) throw ConfigError("thermofield_spacing_prediction: needs L > 0");
  return 2.0 * pi * pi / (h * L);
}

double local_coupling(double x, double h, double J) {
  return 0.5 * J * std::exp(-h * std::abs(x));
}

double crossover_position(double T, double L, double h, double J) {
  if (!(T > 0.0)) throw ConfigError("temperature must be > 0");
  if (!(h >= kSmallH)) throw ConfigError("crossover position undefined for h = 0");
  const double x0 = std::log(J / (2.0 * T)) / h;
  return std::clamp(x0, 0.0, L);
}

double finite_T_profile(double x, double T, double L, double h, double J) {
  require_inside(x, L, "finite_T_profile");
  const double x0 = crossover_position(T, L, h, J);
  const double ln2 = std::numbers::ln2;
  if (x <= -x0) return (L - std::abs(x)) * ln2;
  if (x >= x0) return (L - 2.0 * x0 + x) * ln2;
  return (L - x0) * ln2 + (x0 - std::abs(x)) * h / 6.0;
}

LinearFit fit_linear(std::span<const double> g, std::span<const double> y) {
  if (g.size() != y.size()) throw ConfigError("fit_linear: size mismatch");
  const int n = static_cast<int>(g.size());
  if (n < 4) throw ConfigError("fit_linear: need at least 4 points");
  double mg = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mg += g[i];
    my += y[i];
  }
  mg /= n;
  my /= n;
  double sgg = 0.0, sgy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sgg += (g[i] - mg) * (g[i] - mg);
    sgy += (g[i] - mg) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double scale = std::max(1.0, std::abs(mg));
  if (!(sgg > 1e-24 * scale * scale * n))
    throw NumericalError("fit_linear: rank-deficient fit (constant regressor)");
  LinearFit f;
  f.points = n;
  f.slope = sgy / sgg;
  f.intercept = my - f.slope * mg;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * g[i] + f.intercept);
    sq += r * r;
    f.mean_abs += std::abs(r) / n;
  }
  f.rms = std::sqrt(sq / n);
  f.r_squared = syy > 0.0 ? 1.0 - sq / syy : 1.0;
  return f;
}

LinearFit fit_offset(std::span<const double> g, std::span<const double> y) {
  if (g.size() != y.size()) throw ConfigError("fit_offset: size mismatch");
  const int n = static_cast<int>(g.size());
  if (n < 4) throw ConfigError("fit_offset: need at least 4 points");
  LinearFit f;
  f.points = n;
  f.slope = 1.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += y[i] - g[i];
  f.intercept = sum / n;
  double sq = 0.0, my = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) my += y[i];
  my /= n;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - g[i] - f.intercept;
    sq += r * r;
    f.mean_abs += std::abs(r) / n;
    syy += (y[i] - my) * (y[i] - my);
  }
  f.rms = std::sqrt(sq / n);
  f.r_squared = syy > 0.0 ? 1.0 - sq / syy : 1.0;
  return f;
}

CftFit fit_halfchain(std::span<const HalfChainSample> samples, double h, bool fit_c) {
  std::vector<double> g, y;
  for (const auto& s : samples) {
    g.push_back(log_L_tilde(s.L, h) / 6.0);
    y.push_back(s.S);
  }
  CftFit out;
  out.params.h = h;
  out.params.L = samples.empty() ? 0.0 : samples.back().L;
  const LinearFit f = fit_c ? fit_linear(g, y) : fit_offset(g, y);
  out.params.c = f.slope;
  out.params.c_prime = f.intercept;
  out.rms = f.rms;
  out.mean_abs = f.mean_abs;
  out.points = f.points;
  return out;
}

CftFit fit_edge_profile(const EntropyProfile& profile, double L, double h, double window) {
  if (profile.family != BlockFamily::Left)
    throw ConfigError("fit_edge_profile: needs a left-block profile");
  const auto raw = profile.entropies();
  const auto smooth = even_odd_average(raw);
  std::vector<double> g, y;
  for (std::size_t k = 0; k < profile.values.size(); ++k) {
    const double x = profile.values[k].first - L;
    if (std::abs(x) > window * L || std::abs(x) >= L) continue;
    g.push_back(edge_block_prediction(x, profile.order, L, h));
    y.push_back(smooth[k]);
  }
  const LinearFit f = fit_offset(g, y);
  CftFit out;
  out.params.L = L;
  out.params.h = h;
  out.params.E[static_cast<int>(std::lround(profile.order))] = f.intercept;
  out.rms = f.rms;
  out.mean_abs = f.mean_abs;
  out.points = f.points;
  return out;
}

std::vector<double> even_odd_average(std::span<const double> p) {
  std::vector<double> q(p.begin(), p.end());
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    q[i] = 0.5 * p[i] + 0.25 * (p[i - 1] + p[i + 1]);
  return q;
}

}  // namespace rainbow::cft
