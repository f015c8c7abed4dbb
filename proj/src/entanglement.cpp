#include "rainbow/entanglement.hpp"

#include "rainbow/error.hpp"
#include "rainbow/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <sstream>

namespace rainbow {
namespace {

constexpr double kClampNu = 1e-14;
constexpr double kSaturatedEnergy = 30.0;

// ln(1 + exp(-e)) without overflow.
double softplus_neg(double e) {
  return std::max(0.0, -e) + std::log1p(std::exp(-std::abs(e)));
}

std::vector<double> block_spectrum(const CorrelationMatrix& C, const Block& block) {
  const int n = C.dim();
  const int m = block.size();
  if (m == 0) throw ConfigError("block_entanglement: empty block");
  std::vector<bool> seen(n, false);
  for (int s : block.sites) {
    if (s < 0 || s >= n) throw ConfigError("block_entanglement: block out of range");
    if (seen[s]) throw ConfigError("block_entanglement: repeated site in block");
    seen[s] = true;
  }
  std::vector<double> nu(m);
  if (C.is_real()) {
    Eigen::MatrixXd sub(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) sub(a, b) = C(block.sites[a], block.sites[b]).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub, Eigen::EigenvaluesOnly);
    for (int a = 0; a < m; ++a) nu[a] = eig.eigenvalues()(a);
  } else {
    Eigen::MatrixXcd sub(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) sub(a, b) = C(block.sites[a], block.sites[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(sub, Eigen::EigenvaluesOnly);
    for (int a = 0; a < m; ++a) nu[a] = eig.eigenvalues()(a);
  }
  return nu;
}

}  // namespace

Block Block::left(int length) { return range(0, length); }

Block Block::range(int first, int length) {
  if (length < 1) throw ConfigError("block length must be >= 1");
  Block b;
  b.sites.resize(length);
  for (int k = 0; k < length; ++k) b.sites[k] = first + k;
  return b;
}

double von_neumann_entropy(std::span<const double> nu) {
  double s = 0.0;
  for (double p : nu)
    if (p > 0.0 && p < 1.0) s += -p * std::log(p) - (1.0 - p) * std::log1p(-p);
  return s;
}

double renyi_entropy(std::span<const double> nu, double order) {
  if (!(order > 0.0)) throw ConfigError("Renyi order must be > 0");
  if (order == 1.0) return von_neumann_entropy(nu);
  double s = 0.0;
  for (double p : nu) {
    const double q = std::clamp(p, 0.0, 1.0);
    s += std::log(std::pow(q, order) + std::pow(1.0 - q, order));
  }
  return s / (1.0 - order);
}

EntanglementData block_entanglement(const CorrelationMatrix& C, const Block& block,
                                    std::span<const double> orders) {
  EntanglementData d;
  d.block = block;
  d.nu = block_spectrum(C, block);
  d.vn_entropy = von_neumann_entropy(d.nu);
  d.renyi[1.0] = d.vn_entropy;
  for (double n : orders) d.renyi[n] = renyi_entropy(d.nu, n);

  d.energies.reserve(d.nu.size());
  for (double p : d.nu) {
    const double q = std::clamp(p, kClampNu, 1.0 - kClampNu);
    d.energies.push_back(std::log((1.0 - q) / q));
  }
  std::sort(d.energies.begin(), d.energies.end());
  for (double e : d.energies) d.f0 += softplus_neg(e);
  return d;
}

std::vector<double> EntropyProfile::entropies() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.second);
  return out;
}

EntropyProfile entropy_profile(const CorrelationMatrix& C, double order) {
  EntropyProfile p;
  p.order = order;
  p.family = BlockFamily::Left;
  for (int ell = 1; ell < C.dim(); ++ell) {
    const auto nu = block_spectrum(C, Block::left(ell));
    p.values.emplace_back(ell, renyi_entropy(nu, order));
  }
  return p;
}

EntropyProfile window_profile(const CorrelationMatrix& C, int width, double order) {
  if (width < 1 || width > C.dim()) throw ConfigError("window width out of range");
  EntropyProfile p;
  p.order = order;
  p.family = BlockFamily::SlidingWindow;
  p.window = width;
  for (int first = 0; first + width <= C.dim(); ++first) {
    const auto nu = block_spectrum(C, Block::range(first, width));
    p.values.emplace_back(first, renyi_entropy(nu, order));
  }
  return p;
}

void write_profile_csv(std::ostream& os, const EntropyProfile& profile) {
  os << "ell,S\n";
  for (const auto& [ell, s] : profile.values) os << ell << ',' << format_double(s) << '\n';
}

SpacingFit entanglement_spacing(const EntanglementData& data) {
  if (data.block.size() < 2)
    throw ConfigError("entanglement_spacing: block needs at least two sites");
  SpacingFit fit;
  const bool all_half = std::all_of(data.nu.begin(), data.nu.end(),
                                    [](double p) { return std::abs(p - 0.5) < 1e-12; });
  std::vector<double> e;
  for (std::size_t i = 0; i < data.energies.size(); ++i) {
    if (std::abs(data.energies[i]) > kSaturatedEnergy) continue;
    if (e.empty()) fit.first = static_cast<int>(i);
    e.push_back(data.energies[i]);
  }
  fit.points = static_cast<int>(e.size());
  if (all_half || e.size() < 2) {
    fit.flagged = true;
    fit.goodness = std::numeric_limits<double>::infinity();
    return fit;
  }

  const int m = static_cast<int>(e.size());
  const double centre = 0.5 * (m - 1);
  bool found = false;
  for (double offset : {centre, centre - 0.5, centre + 0.5}) {
    double pe = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
      const double p = i - offset;
      pe += p * e[i];
      pp += p * p;
    }
    if (pp == 0.0) continue;
    const double delta = pe / pp;
    if (!(delta > 0.0)) continue;
    double sq = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r = e[i] - delta * (i - offset);
      sq += r * r;
    }
    const double goodness = std::sqrt(sq / m) / delta;
    if (!found || goodness < fit.goodness) {
      found = true;
      fit.delta = delta;
      fit.goodness = goodness;
      fit.offset = offset;
      const double frac = offset - std::floor(offset);
      fit.ladder = frac == 0.0 ? Ladder::Integer : Ladder::HalfInteger;
    }
  }
  if (!found) {
    fit.flagged = true;
    fit.delta = 0.0;
    fit.goodness = std::numeric_limits<double>::infinity();
  }
  return fit;
}

std::vector<double> many_body_entanglement_levels(const EntanglementData& data,
                                                  std::size_t count) {
  const std::size_t modes = data.energies.size();
  if (count < 1) throw ConfigError("many_body_entanglement_levels: count must be >= 1");
  if (modes < 63 && count > (std::size_t{1} << modes))
    throw ConfigError("many_body_entanglement_levels: count exceeds 2^|block|");

  // Ground level: every negative single-body level occupied. Every other
  // level adds |e_p| for each flipped mode, so the problem becomes the k
  // smallest subset sums of non-negative costs.
  double base = data.f0;
  std::vector<double> cost;
  cost.reserve(modes);
  for (double e : data.energies) {
    if (e < 0.0) base += e;
    cost.push_back(std::abs(e));
  }
  std::sort(cost.begin(), cost.end());

  std::vector<double> levels{base};
  using Node = std::pair<double, std::size_t>;  // (extra cost, last index)
  std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
  if (!cost.empty()) heap.emplace(cost[0], 0);
  while (levels.size() < count && !heap.empty()) {
    const auto [s, i] = heap.top();
    heap.pop();
    levels.push_back(base + s);
    if (i + 1 < cost.size()) {
      heap.emplace(s + cost[i + 1], i + 1);
      heap.emplace(s - cost[i] + cost[i + 1], i + 1);
    }
  }
  return levels;
}

ArcDiagram arc_diagram(const CorrelationMatrix& C, double threshold) {
  if (!(threshold >= 0.0)) throw ConfigError("arc_diagram: threshold must be >= 0");
  ArcDiagram d;
  d.n_sites = C.dim();
  for (int i = 0; i < d.n_sites; ++i)
    for (int j = i + 1; j < d.n_sites; ++j) {
      const double w = std::abs(C(i, j));
      if (w > threshold) d.arcs.push_back({i, j, w});
    }
  return d;
}

void write_arcs_csv(std::ostream& os, const ArcDiagram& diagram) {
  os << "i,j,weight\n";
  for (const auto& a : diagram.arcs)
    os << a.i << ',' << a.j << ',' << format_double(a.weight) << '\n';
}

void write_arcs_svg(std::ostream& os, const ArcDiagram& diagram, int pixels) {
  const double c = 0.5 * pixels;
  const double radius = 0.45 * pixels;
  const int n = std::max(diagram.n_sites, 1);
  auto point = [&](int site) {
    const double theta = 2.0 * std::numbers::pi * site / n;
    return std::pair{c + radius * std::sin(theta), c - radius * std::cos(theta)};
  };
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\""
      << pixels << "\" viewBox=\"0 0 " << pixels << ' ' << pixels << "\">\n";
  out << "  <circle cx=\"" << c << "\" cy=\"" << c << "\" r=\"" << radius
      << "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
  for (const auto& a : diagram.arcs) {
    const auto [x1, y1] = point(a.i);
    const auto [x2, y2] = point(a.j);
    const double opacity = std::min(1.0, a.weight / 0.5);
    out << "  <line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
        << "\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" stroke-opacity=\"" << opacity
        << "\"/>\n";
  }
  for (int s = 0; s < diagram.n_sites; ++s) {
    const auto [x, y] = point(s);
    out << "  <circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"#000000\"/>\n";
  }
  out << "</svg>\n";
  os << out.str();
}

}  // namespace rainbow
