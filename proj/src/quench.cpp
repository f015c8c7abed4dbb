#include "rainbow/quench.hpp"

#include "rainbow/error.hpp"
#include "rainbow/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace rainbow {

namespace {

void require_even_sites(int n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw ConfigError("number of sites must be even and >= 2, got " + std::to_string(n_sites));
  }
}

}  // namespace

QuenchEvolver::QuenchEvolver(const CorrelationMatrix& initial,
                             const HoppingMatrix& final_hamiltonian)
    : initial_(initial) {
  if (initial.dim() != final_hamiltonian.dim()) {
    throw ConfigError("initial state and Hamiltonian have different sizes");
  }
  const SingleBodySpectrum spectrum = diagonalize(final_hamiltonian);
  energies_ = Eigen::Map<const Eigen::VectorXd>(spectrum.energies.data(), spectrum.dim());
  modes_ = spectrum.modes;
  rotated_ = modes_.transpose() * initial.values() * modes_;
}

CorrelationMatrix QuenchEvolver::at(double t) const {
  if (!std::isfinite(t)) throw ConfigError("time must be finite");
  if (t == 0.0) return initial_;
  const int n = dim();
  // <c_k^dag c_l>(t) = exp(i (e_k - e_l) t) <c_k^dag c_l>(0)
  Eigen::VectorXcd phase(n);
  for (int k = 0; k < n; ++k) phase(k) = std::polar(1.0, energies_(k) * t);
  Eigen::MatrixXcd D = phase.asDiagonal() * rotated_ * phase.conjugate().asDiagonal();
  Eigen::MatrixXcd C = modes_ * D * modes_.transpose();
  // Restore exact hermiticity lost to rounding.
  Eigen::MatrixXcd sym = 0.5 * (C + C.adjoint());
  return CorrelationMatrix(std::move(sym));
}

CorrelationMatrix evolve(const CorrelationMatrix& initial, const HoppingMatrix& final_hamiltonian,
                         double t) {
  return QuenchEvolver(initial, final_hamiltonian).at(t);
}

CorrelationMatrix build_dimer_state(int n_sites, int offset) {
  require_even_sites(n_sites);
  if (offset != 0 && offset != 1) throw ConfigError("dimer offset must be 0 or 1");
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n_sites, n_sites) * 0.5;
  for (int m = 0; m < n_sites / 2; ++m) {
    const int a = (2 * m + offset) % n_sites;
    const int b = (2 * m + 1 + offset) % n_sites;
    C(a, b) = C(b, a) = 0.5;
  }
  return CorrelationMatrix(C);
}

BondSigns rainbow_bond_signs(int n_sites) {
  require_even_sites(n_sites);
  const int L = n_sites / 2;
  BondSigns signs(L);
  for (int i = 0; i < L; ++i) {
    const int k = L - i;
    signs[i] = (k % 2 == 1) ? 1 : -1;
  }
  return signs;
}

CorrelationMatrix build_rainbow_ideal(int n_sites, const RainbowPhases& phases) {
  require_even_sites(n_sites);
  if (const auto* fh = std::get_if<FromHamiltonian>(&phases)) {
    const ChainSpec spec = ChainSpec::rainbow(n_sites, fh->h);
    return ground_state_correlations(diagonalize(build_hopping_matrix(spec)));
  }
  const auto& signs = std::get<BondSigns>(phases);
  const int L = n_sites / 2;
  if (static_cast<int>(signs.size()) != L) {
    throw ConfigError("expected " + std::to_string(L) + " bond signs, got " +
                      std::to_string(signs.size()));
  }
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n_sites, n_sites) * 0.5;
  for (int i = 0; i < L; ++i) {
    if (signs[i] != 1 && signs[i] != -1) throw ConfigError("bond signs must be +1 or -1");
    const int j = n_sites - 1 - i;
    C(i, j) = C(j, i) = 0.5 * signs[i];
  }
  return CorrelationMatrix(C);
}

CorrelationMatrix realize(const InitialState& initial, int n_sites) {
  return std::visit(
      [n_sites](const auto& s) -> CorrelationMatrix {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, GroundStateOf>) {
          if (s.spec.n_sites() != n_sites) {
            throw ConfigError("initial Hamiltonian has " + std::to_string(s.spec.n_sites()) +
                              " sites, expected " + std::to_string(n_sites));
          }
          return ground_state_correlations(diagonalize(build_hopping_matrix(s.spec)));
        } else if constexpr (std::is_same_v<S, RainbowInitial>) {
          return build_rainbow_ideal(n_sites, s.phases);
        } else {
          return build_dimer_state(n_sites, s.offset);
        }
      },
      initial);
}

std::vector<double> time_grid(double tmax, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
  if (!(tmax >= 0.0) || !std::isfinite(tmax)) throw ConfigError("tmax must be >= 0");
  std::vector<double> times;
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t > tmax + dt * 1e-9) break;
    times.push_back(t);
  }
  return times;
}

double profile_similarity(const QuenchTrajectory& trajectory, std::size_t k, int n_sites) {
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t b = 0; b < trajectory.block_lengths.size(); ++b) {
    const int ell = trajectory.block_lengths[b];
    diff += std::abs(trajectory.entropy[k][b] - trajectory.entropy[0][b]);
    scale += std::min(ell, n_sites - ell) * std::numbers::ln2;
  }
  if (scale <= 0.0) return 1.0;
  return 1.0 - diff / scale;
}

QuenchTrajectory run_quench(const InitialState& initial, const ChainSpec& final_spec,
                            std::span<const double> times, std::span<const int> block_lengths,
                            const QuenchOptions& options) {
  const int n = final_spec.n_sites();
  if (times.empty()) throw ConfigError("empty time grid");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0) throw ConfigError("times must be finite and >= 0");
    if (k > 0 && times[k] < times[k - 1]) throw ConfigError("times must be non-decreasing");
  }
  for (int ell : block_lengths) {
    if (ell < 1 || ell > n) {
      throw ConfigError("tracked block length " + std::to_string(ell) + " out of range");
    }
  }

  const CorrelationMatrix C0 = realize(initial, n);
  const QuenchEvolver evolver(C0, build_hopping_matrix(final_spec));
  const std::vector<double> orders{options.order};
  auto entropy_of = [&](const CorrelationMatrix& C, int ell) {
    const EntanglementData d = block_entanglement(C, Block::left(ell), orders);
    return options.order == 1.0 ? d.vn_entropy : d.renyi.at(options.order);
  };

  QuenchTrajectory out;
  out.times.assign(times.begin(), times.end());
  out.block_lengths.assign(block_lengths.begin(), block_lengths.end());
  for (double t : times) {
    const CorrelationMatrix C = evolver.at(t);
    std::vector<double> row;
    row.reserve(block_lengths.size());
    for (int ell : block_lengths) row.push_back(entropy_of(C, ell));
    out.entropy.push_back(std::move(row));
    out.half_chain.push_back(entropy_of(C, n / 2));
    out.trace.push_back(C.trace());
    out.purity_defect.push_back(C.purity_defect());
    if (options.keep_snapshots) out.snapshots.push_back(C);
  }

  QuenchSummary& s = out.summary;
  const auto it_min = std::min_element(out.half_chain.begin(), out.half_chain.end());
  const std::size_t k_min = static_cast<std::size_t>(it_min - out.half_chain.begin());
  s.t_min = out.times[k_min];
  s.S_min = *it_min;
  s.t_revival = std::numeric_limits<double>::quiet_NaN();
  s.revival_fidelity = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = k_min + 1; k < out.times.size(); ++k) {
    const double sim = profile_similarity(out, k, n);
    if (std::isnan(s.revival_fidelity) || sim > s.revival_fidelity) {
      s.revival_fidelity = sim;
      s.t_revival = out.times[k];
    }
  }
  s.transient_delay.assign(block_lengths.size(), std::nullopt);
  for (std::size_t b = 0; b < block_lengths.size(); ++b) {
    for (std::size_t k = 0; k < out.times.size(); ++k) {
      if (out.entropy[k][b] < out.entropy[0][b] - 0.1) {
        s.transient_delay[b] = out.times[k];
        break;
      }
    }
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const QuenchTrajectory& trajectory) {
  os << "t,ell,S,trace,purity_defect\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    for (std::size_t b = 0; b < trajectory.block_lengths.size(); ++b) {
      os << format_double(trajectory.times[k]) << ',' << trajectory.block_lengths[b] << ','
         << format_double(trajectory.entropy[k][b]) << ',' << format_double(trajectory.trace[k])
         << ',' << format_double(trajectory.purity_defect[k]) << '\n';
    }
  }
}

void write_revival_json(std::ostream& os, const QuenchSummary& summary) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["t_min"] = num(summary.t_min);
  j["S_min"] = num(summary.S_min);
  j["t_revival"] = num(summary.t_revival);
  j["revival_fidelity"] = num(summary.revival_fidelity);
  nlohmann::json delays = nlohmann::json::array();
  for (const auto& d : summary.transient_delay) delays.push_back(d ? nlohmann::json(*d) : nlohmann::json(nullptr));
  j["transient_delay"] = delays;
  os << j.dump(2) << '\n';
}

}  // namespace rainbow
