#include "rainbow/chain.hpp"

#include "rainbow/error.hpp"
#include "rainbow/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

namespace rainbow {

ChainSpec::ChainSpec(int n_sites, double h, double J, ChainKind kind)
    : n_sites_(n_sites), h_(h), J_(J), kind_(std::move(kind)) {
  if (n_sites_ < 2 || n_sites_ % 2 != 0)
    throw ConfigError("n_sites must be an even integer >= 2, got " +
                      std::to_string(n_sites_));
  if (!(h_ >= 0.0) || !std::isfinite(h_))
    throw ConfigError("inhomogeneity h must be finite and >= 0");
  if (!(J_ > 0.0) || !std::isfinite(J_))
    throw ConfigError("coupling scale J must be finite and > 0");
  if (const auto* custom = std::get_if<CustomProfile>(&kind_)) {
    if (static_cast<int>(custom->couplings.size()) != n_sites_ - 1)
      throw ConfigError("custom profile needs n_sites - 1 = " +
                        std::to_string(n_sites_ - 1) + " couplings, got " +
                        std::to_string(custom->couplings.size()));
    for (double t : custom->couplings)
      if (!std::isfinite(t)) throw ConfigError("custom coupling is not finite");
  }
}

ChainSpec ChainSpec::custom(std::vector<double> couplings) {
  const int n = static_cast<int>(couplings.size()) + 1;
  return ChainSpec(n, 0.0, 1.0, CustomProfile{std::move(couplings)});
}

std::vector<double> rainbow_couplings(const ChainSpec& spec) {
  if (!std::holds_alternative<Rainbow>(spec.kind()))
    throw ConfigError("rainbow_couplings requires a rainbow chain");
  const int n = spec.n_sites();
  const int center = spec.half_length() - 1;
  std::vector<double> t(n - 1);
  for (int link = 0; link < n - 1; ++link) {
    const int m = std::abs(link - center);
    t[link] = m == 0 ? 0.5 * spec.J()
                     : 0.5 * spec.J() * std::exp(-spec.h() * (m - 0.5));
  }
  return t;
}

std::vector<double> homogeneous_couplings(const ChainSpec& spec) {
  if (!std::holds_alternative<Homogeneous>(spec.kind()))
    throw ConfigError("homogeneous_couplings requires a homogeneous chain");
  return std::vector<double>(spec.n_sites() - 1, 0.5 * spec.J());
}

std::vector<double> couplings(const ChainSpec& spec) {
  if (std::holds_alternative<Rainbow>(spec.kind())) return rainbow_couplings(spec);
  if (std::holds_alternative<Homogeneous>(spec.kind()))
    return homogeneous_couplings(spec);
  return std::get<CustomProfile>(spec.kind()).couplings;
}

HoppingMatrix::HoppingMatrix(std::vector<double> couplings)
    : couplings_(std::move(couplings)) {
  if (couplings_.empty())
    throw ConfigError("hopping matrix needs at least one coupling");
  for (double t : couplings_)
    if (!std::isfinite(t)) throw ConfigError("coupling is not finite");
}

Eigen::MatrixXd HoppingMatrix::dense() const {
  const int n = dim();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    T(i, i + 1) = couplings_[i];
    T(i + 1, i) = couplings_[i];
  }
  return T;
}

double HoppingMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double t : couplings_) m = std::max(m, std::abs(t));
  return m;
}

HoppingMatrix build_hopping_matrix(std::vector<double> couplings) {
  return HoppingMatrix(std::move(couplings));
}

void write_couplings_csv(std::ostream& os, std::span<const double> couplings) {
  os << "t\n";
  for (double t : couplings) os << format_double(t) << '\n';
}

std::vector<double> read_couplings_csv(std::istream& is) {
  std::vector<double> out;
  std::string line;
  bool header_seen = false;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line.erase(0, line.find_first_not_of(" \t\r"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "t")
        throw ConfigError("coupling CSV must start with header 't'");
      header_seen = true;
      continue;
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != line.size())
      throw ConfigError("coupling CSV line " + std::to_string(line_no) +
                        ": not a number: '" + line + "'");
    out.push_back(value);
  }
  if (!header_seen) throw ConfigError("coupling CSV is empty");
  return out;
}

std::vector<double> read_couplings_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open coupling file " + path.string());
  return read_couplings_csv(in);
}

}  // namespace rainbow
