#include "commands.hpp"

#include "rainbow/cft.hpp"
#include "rainbow/chain.hpp"
#include "rainbow/entanglement.hpp"
#include "rainbow/error.hpp"
#include "rainbow/free_fermion.hpp"
#include "rainbow/io.hpp"
#include "rainbow/quench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string_view>

namespace rainbow::cli {

namespace {

using nlohmann::json;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Options {
  int sites = 32;
  double h = 1.0;
  double coupling = 1.0;
  std::string model = "rainbow";
  std::vector<double> renyi{1.0};
  std::string out;
  std::string format = "csv";
  bool overlay_cft = false;
  double threshold = 0.1;
  double beta = kUnset;
  double x0 = kUnset;
  double tmax = kUnset;
  double dt = 0.25;
  std::string initial = "rainbow";
  std::string svg;
  std::string summary;
  std::vector<std::string> blocks;
  bool h_given = false;
};

// Shortest round-trip representation, used in the config stamp.
std::string short_double(double v) {
  if (std::isnan(v)) return "unset";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + short_double(v[i]);
  return s;
}

std::string stamp(const std::string& command, const Options& o) {
  std::ostringstream s;
  s << "rainbow " << command << " sites=" << o.sites << " h=" << short_double(o.h)
    << " coupling=" << short_double(o.coupling) << " model=" << o.model
    << " renyi=" << join_doubles(o.renyi) << " format=" << o.format
    << " overlay_cft=" << (o.overlay_cft ? "true" : "false")
    << " threshold=" << short_double(o.threshold) << " beta=" << short_double(o.beta)
    << " x0=" << short_double(o.x0) << " tmax=" << short_double(o.tmax)
    << " dt=" << short_double(o.dt) << " initial=" << o.initial << " block=";
  for (std::size_t i = 0; i < o.blocks.size(); ++i) s << (i ? "," : "") << o.blocks[i];
  return s.str();
}

ChainSpec make_spec(const Options& o) {
  if (o.model == "rainbow") return ChainSpec::rainbow(o.sites, o.h, o.coupling);
  if (o.model == "homogeneous") return ChainSpec::homogeneous(o.sites, o.coupling);
  const std::string prefix = "custom:";
  if (o.model.rfind(prefix, 0) == 0) {
    const std::string path = o.model.substr(prefix.size());
    if (path.empty()) throw ConfigError("--model custom: needs a file name");
    return ChainSpec::custom(read_couplings_csv(std::filesystem::path(path)));
  }
  throw ConfigError("unknown model '" + o.model + "' (rainbow, homogeneous, custom:FILE)");
}

int parse_int(const std::string& s, const std::string& what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("malformed " + what + " '" + s + "'");
  }
  return v;
}

// "LEN" is the left block of LEN sites, "FIRST:LEN" a contiguous range.
Block parse_block(const std::string& text, int n_sites) {
  const auto colon = text.find(':');
  int first = 0;
  int len = 0;
  if (colon == std::string::npos) {
    len = parse_int(text, "block");
  } else {
    first = parse_int(text.substr(0, colon), "block");
    len = parse_int(text.substr(colon + 1), "block");
  }
  if (len < 1 || first < 0 || first + len > n_sites) {
    throw ConfigError("block '" + text + "' does not fit a chain of " + std::to_string(n_sites) +
                      " sites");
  }
  return Block::range(first, len);
}

void validate(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw ConfigError("--format must be csv or json");
  if (o.renyi.empty()) throw ConfigError("--renyi needs at least one order");
  for (double n : o.renyi) {
    if (!(n > 0.0) || !std::isfinite(n)) throw ConfigError("Renyi orders must be positive");
  }
  if (!(o.threshold >= 0.0)) throw ConfigError("--threshold must be >= 0");
  if (!std::isnan(o.beta) && !(o.beta >= 0.0)) throw ConfigError("--beta must be >= 0");
  if (!std::isnan(o.x0) && !(o.x0 >= 0.0)) throw ConfigError("--x0 must be >= 0");
  if (!(o.dt > 0.0) || !std::isfinite(o.dt)) throw ConfigError("--dt must be positive");
  if (!std::isnan(o.tmax) && !(o.tmax >= 0.0)) throw ConfigError("--tmax must be >= 0");
  if (o.initial != "rainbow" && o.initial != "dimer" && o.initial != "gs") {
    throw ConfigError("--initial must be rainbow, dimer or gs");
  }
}

std::string order_label(double n) { return short_double(n); }

void emit(std::ostream& fallback, const std::string& path, const std::string& text) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string cmd_spectrum(const Options& o, const std::string& st) {
  const ChainSpec spec = make_spec(o);
  const SingleBodySpectrum sp = diagonalize(build_hopping_matrix(spec));
  const int n = sp.dim();
  std::ostringstream os;
  if (o.format == "json") {
    json j;
    j["config"] = st;
    j["relative_accuracy"] = sp.relative_accuracy;
    j["energies"] = sp.energies;
    os << j.dump(2) << '\n';
    return os.str();
  }
  write_stamp(os, st);
  os << "k,energy,mirror_sum\n";
  for (int k = 0; k < n; ++k) {
    os << k << ',' << format_double(sp.energies[k]) << ','
       << format_double(sp.energies[k] + sp.energies[n - 1 - k]) << '\n';
  }
  return os.str();
}

std::string cmd_profile(const Options& o, const std::string& st) {
  const ChainSpec spec = make_spec(o);
  const CorrelationMatrix C = ground_state_correlations(diagonalize(build_hopping_matrix(spec)));
  const double L = spec.half_length();
  std::vector<EntropyProfile> profiles;
  std::vector<cft::CftFit> fits;
  for (double n : o.renyi) {
    profiles.push_back(entropy_profile(C, n));
    if (o.overlay_cft) fits.push_back(cft::fit_edge_profile(profiles.back(), L, spec.h()));
  }
  auto overlay = [&](std::size_t r, int ell) {
    const double E = fits[r].params.E.begin()->second;
    return cft::edge_block_prediction(ell - L, o.renyi[r], L, spec.h()) + E;
  };

  std::ostringstream os;
  const auto& rows = profiles.front().values;
  if (o.format == "json") {
    json j;
    j["config"] = st;
    json ell = json::array(), x = json::array();
    for (const auto& [l, s] : rows) {
      ell.push_back(l);
      x.push_back(l - L);
    }
    j["ell"] = ell;
    j["x"] = x;
    for (std::size_t r = 0; r < profiles.size(); ++r) {
      const std::string key = order_label(o.renyi[r]);
      j["S"][key] = profiles[r].entropies();
      if (o.overlay_cft) {
        json cj;
        cj["E"] = fits[r].params.E.begin()->second;
        cj["mean_abs"] = fits[r].mean_abs;
        cj["rms"] = fits[r].rms;
        cj["points"] = fits[r].points;
        json pred = json::array();
        for (const auto& row : rows) pred.push_back(overlay(r, row.first));
        cj["prediction"] = pred;
        j["cft"][key] = cj;
      }
    }
    os << j.dump(2) << '\n';
    return os.str();
  }
  write_stamp(os, st);
  os << "ell,x";
  for (double n : o.renyi) os << ",S_" << order_label(n);
  if (o.overlay_cft)
    for (double n : o.renyi) os << ",cft_" << order_label(n);
  os << '\n';
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int ell = rows[k].first;
    os << ell << ',' << format_double(ell - L);
    for (const auto& p : profiles) os << ',' << format_double(p.values[k].second);
    if (o.overlay_cft)
      for (std::size_t r = 0; r < profiles.size(); ++r) os << ',' << format_double(overlay(r, ell));
    os << '\n';
  }
  return os.str();
}

std::string cmd_entspectrum(const Options& o, const std::string& st) {
  const ChainSpec spec = make_spec(o);
  const CorrelationMatrix C = ground_state_correlations(diagonalize(build_hopping_matrix(spec)));
  if (o.blocks.size() > 1) throw ConfigError("entspectrum takes a single --block");
  const Block block = o.blocks.empty() ? Block::left(spec.half_length())
                                       : parse_block(o.blocks.front(), spec.n_sites());
  const EntanglementData d = block_entanglement(C, block, o.renyi);
  SpacingFit fit;
  fit.flagged = true;
  if (block.size() >= 2) fit = entanglement_spacing(d);
  const double delta_pred =
      spec.h() >= cft::kSmallH ? cft::thermofield_spacing_prediction(spec.half_length(), spec.h())
                               : kUnset;
  const int m = static_cast<int>(d.energies.size());
  auto ladder_at = [&](int i, double delta) {
    const double p = i - fit.first - fit.offset;
    if (fit.flagged || i < fit.first || i >= fit.first + fit.points) return kUnset;
    return delta * p;
  };

  std::ostringstream os;
  if (o.format == "json") {
    json j;
    j["config"] = st;
    j["nu"] = d.nu;
    json e = json::array();
    for (double v : d.energies) e.push_back(number(v));
    j["epsilon"] = e;
    j["delta"] = number(fit.delta);
    j["goodness"] = number(fit.goodness);
    j["ladder"] = fit.ladder == Ladder::Integer ? "integer" : "half-integer";
    j["flagged"] = fit.flagged;
    j["delta_pred"] = number(delta_pred);
    j["entropy"] = d.vn_entropy;
    for (const auto& [n, s] : d.renyi) j["renyi"][order_label(n)] = s;
    const std::size_t count = std::min<std::size_t>(
        32, m < 30 ? (std::size_t{1} << m) : std::size_t{32});
    j["many_body_levels"] = many_body_entanglement_levels(d, count);
    os << j.dump(2) << '\n';
    return os.str();
  }
  write_stamp(os, st);
  os << "p,nu,epsilon,epsilon_fit,epsilon_pred\n";
  for (int i = 0; i < m; ++i) {
    os << i << ',' << format_double(d.nu[i]) << ',' << format_double(d.energies[i]) << ','
       << format_double(ladder_at(i, fit.delta)) << ','
       << format_double(std::isnan(delta_pred) ? kUnset : ladder_at(i, delta_pred)) << '\n';
  }
  return os.str();
}

std::string cmd_arcs(const Options& o, const std::string& st) {
  const ChainSpec spec = make_spec(o);
  const CorrelationMatrix C = ground_state_correlations(diagonalize(build_hopping_matrix(spec)));
  const ArcDiagram d = arc_diagram(C, o.threshold);
  if (!o.svg.empty()) {
    std::ostringstream svg;
    write_arcs_svg(svg, d);
    emit(svg, o.svg, svg.str());
  }
  std::ostringstream os;
  if (o.format == "json") {
    json j;
    j["config"] = st;
    j["n_sites"] = d.n_sites;
    json arcs = json::array();
    for (const Arc& a : d.arcs) arcs.push_back({{"i", a.i}, {"j", a.j}, {"weight", a.weight}});
    j["arcs"] = arcs;
    os << j.dump(2) << '\n';
    return os.str();
  }
  write_stamp(os, st);
  write_arcs_csv(os, d);
  return os.str();
}

std::string cmd_quench(const Options& o, const std::string& st) {
  const int n = o.model.rfind("custom:", 0) == 0 ? make_spec(o).n_sites() : o.sites;
  const ChainSpec final_spec = ChainSpec::homogeneous(n, o.coupling);
  InitialState initial = DimerInitial{0};
  if (o.initial == "rainbow") {
    initial = RainbowInitial{o.h_given ? FromHamiltonian{o.h} : FromHamiltonian{}};
  } else if (o.initial == "gs") {
    initial = GroundStateOf{make_spec(o)};
  }
  std::vector<int> lengths;
  for (const std::string& b : o.blocks) {
    const Block blk = parse_block(b, n);
    if (blk.sites.front() != 0) throw ConfigError("quench tracks left blocks only: " + b);
    lengths.push_back(blk.size());
  }
  if (lengths.empty()) {
    // A dimer cut between pairs leaves the one-site block pinned at ln 2.
    for (int ell = o.initial == "dimer" ? 2 : 1; ell <= n / 2; ++ell) lengths.push_back(ell);
  }
  const std::vector<double> times = time_grid(std::isnan(o.tmax) ? 2.0 * n : o.tmax, o.dt);
  const QuenchTrajectory tr = run_quench(initial, final_spec, times, lengths);

  std::ostringstream summary;
  write_revival_json(summary, tr.summary);
  if (!o.summary.empty()) emit(summary, o.summary, summary.str());

  std::ostringstream os;
  if (o.format == "json") {
    json j = json::parse(summary.str());
    j["config"] = st;
    j["block_lengths"] = tr.block_lengths;
    os << j.dump(2) << '\n';
    return os.str();
  }
  write_stamp(os, st);
  write_trajectory_csv(os, tr);
  return os.str();
}

std::string cmd_thermal(const Options& o, const std::string& st) {
  const ChainSpec spec = make_spec(o);
  const double L = spec.half_length();
  const double J = spec.J();
  double beta = o.beta;
  if (std::isnan(beta)) {
    const double x0 = std::isnan(o.x0) ? L / 2.0 : o.x0;
    beta = 1.0 / cft::local_coupling(x0, spec.h(), J);
  }
  const double T = 1.0 / beta;
  const CorrelationMatrix C = thermal_correlations(diagonalize(build_hopping_matrix(spec)), beta);
  const EntropyProfile p = entropy_profile(C, 1.0);
  const bool predict = spec.h() >= cft::kSmallH;
  const double x0 = predict ? cft::crossover_position(T, L, spec.h(), J) : kUnset;

  std::vector<double> pred;
  for (const auto& [ell, s] : p.values)
    pred.push_back(predict ? cft::finite_T_profile(ell - L, T, L, spec.h(), J) : kUnset);

  std::ostringstream os;
  if (o.format == "json") {
    json j;
    j["config"] = st;
    j["T"] = number(T);
    j["beta"] = number(beta);
    j["x0"] = number(x0);
    json ell = json::array(), x = json::array(), pj = json::array();
    for (std::size_t k = 0; k < p.values.size(); ++k) {
      ell.push_back(p.values[k].first);
      x.push_back(p.values[k].first - L);
      pj.push_back(number(pred[k]));
    }
    j["ell"] = ell;
    j["x"] = x;
    j["S"] = p.entropies();
    j["prediction"] = pj;
    os << j.dump(2) << '\n';
    return os.str();
  }
  write_stamp(os, st);
  os << "ell,x,S,prediction\n";
  for (std::size_t k = 0; k < p.values.size(); ++k) {
    const int ell = p.values[k].first;
    os << ell << ',' << format_double(ell - L) << ',' << format_double(p.values[k].second) << ','
       << format_double(pred[k]) << '\n';
  }
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free-fermion entanglement of rainbow and homogeneous XX chains", "rainbow"};
  // -h would clash with the inhomogeneity option --h.
  app.set_help_flag("--help", "Print this help message and exit");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "Flat key = value file; flags on the command line win");
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--sites", o.sites, "Number of sites N (even)")->capture_default_str();
  auto* h_opt = app.add_option("--h", o.h, "Inhomogeneity h >= 0 (rainbow model; the quench rainbow state defaults to 8)")->capture_default_str();
  app.add_option("--coupling", o.coupling, "Overall coupling J > 0")->capture_default_str();
  app.add_option("--model", o.model, "rainbow | homogeneous | custom:FILE")->capture_default_str();
  app.add_option("--renyi", o.renyi, "Renyi orders, comma separated (1 = von Neumann)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--out", o.out, "Output path (default: standard output)");
  app.add_option("--format", o.format, "csv | json")->capture_default_str();
  app.add_flag("--overlay-cft", o.overlay_cft, "Add the fitted field-theory prediction (profile)");
  app.add_option("--threshold", o.threshold, "Smallest |C_ij| drawn as an arc")
      ->capture_default_str();
  app.add_option("--beta", o.beta, "Inverse temperature (thermal; overrides --x0)");
  app.add_option("--x0", o.x0, "Crossover position fixing T = J(x0) (thermal; default L/2)");
  app.add_option("--tmax", o.tmax, "Final time of the quench (default 2N)");
  app.add_option("--dt", o.dt, "Time step of the quench grid")->capture_default_str();
  app.add_option("--initial", o.initial, "Quench initial state: rainbow | dimer | gs")
      ->capture_default_str();
  app.add_option("--svg", o.svg, "Also write the arc diagram as SVG (arcs)");
  app.add_option("--summary", o.summary, "Also write the revival summary JSON (quench)");
  app.add_option("--block", o.blocks,
                 "Blocks: LEN (left block) or FIRST:LEN, comma separated")
      ->delimiter(',');

  struct Command {
    const char* name;
    const char* help;
    std::string (*fn)(const Options&, const std::string&);
  };
  const Command commands[] = {
      {"spectrum", "Single-body energies", cmd_spectrum},
      {"profile", "Entanglement entropy of every left block", cmd_profile},
      {"entspectrum", "Entanglement spectrum and level spacing of a block", cmd_entspectrum},
      {"arcs", "Correlation arc diagram", cmd_arcs},
      {"quench", "Entropy after a quench to the homogeneous chain", cmd_quench},
      {"thermal", "Finite-temperature entropy profile", cmd_thermal},
  };
  std::vector<CLI::App*> subs;
  for (const Command& c : commands) subs.push_back(app.add_subcommand(c.name, c.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }
  o.h_given = h_opt->count() > 0;

  try {
    validate(o);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      // The stamp records the h the quench state is actually built from.
      Options shown = o;
      if (std::string_view(commands[i].name) == "quench" && o.initial == "rainbow" && !o.h_given)
        shown.h = FromHamiltonian{}.h;
      const std::string text = commands[i].fn(o, stamp(commands[i].name, shown));
      emit(out, o.out, text);
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"rainbow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rainbow::cli
