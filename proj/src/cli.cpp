#include "pbeauty/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pbeauty/errors.hpp"
#include "pbeauty/model.hpp"

namespace pbeauty::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const auto pos = s.find(sep, begin);
    parts.push_back(trim(s.substr(begin, pos == std::string_view::npos ? std::string_view::npos : pos - begin)));
    if (pos == std::string_view::npos) break;
    begin = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view s, std::string_view what) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    throw UsageError(fmt::format("malformed {} '{}'", what, s));
  }
  return v;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError(fmt::format("malformed {} '{}'", what, s));
  }
  return v;
}

std::string optional_number(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

}  // namespace

std::vector<double> Grid::values() const {
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(start);
    return out;
  }
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i + 1 < count; ++i) out.push_back(start + step * static_cast<double>(i));
  out.push_back(stop);
  return out;
}

Grid parse_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    const double x = parse_double(parts[0], "grid value");
    return {x, x, 1};
  }
  if (parts.size() != 3) throw UsageError(fmt::format("grid '{}' is not start:stop:count", text));
  const double start = parse_double(parts[0], "grid start");
  const double stop = parse_double(parts[1], "grid stop");
  const std::int64_t count = parse_int(parts[2], "grid count");
  if (count < 1) throw UsageError(fmt::format("grid '{}' must have at least one point", text));
  if (count == 1 && start != stop) throw UsageError(fmt::format("one-point grid '{}' needs start == stop", text));
  if (stop < start) throw UsageError(fmt::format("grid '{}' has stop < start", text));
  return {start, stop, static_cast<std::size_t>(count)};
}

IntRange parse_int_range(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) {
    const auto n = parse_int(parts[0], "integer");
    return {n, n};
  }
  if (parts.size() != 2) throw UsageError(fmt::format("range '{}' is not lo:hi", text));
  const IntRange r{parse_int(parts[0], "range start"), parse_int(parts[1], "range end")};
  if (r.hi < r.lo) throw UsageError(fmt::format("range '{}' is empty", text));
  return r;
}

std::vector<std::optional<double>> parse_m_list(std::string_view text) {
  std::vector<std::optional<double>> out;
  for (auto token : split(text, ',')) {
    if (token == "inf") {
      out.emplace_back(std::nullopt);
      continue;
    }
    const double m = parse_double(token, "m value");
    if (!(m > 0.0)) throw UsageError(fmt::format("m must be > 0, got '{}'", token));
    out.emplace_back(m);
  }
  if (out.empty()) throw UsageError("empty m list");
  return out;
}

std::string format_number(double x) { return fmt::format("{:.12g}", x); }

void write_phi(const SweepSpec& spec, std::ostream& out) {
  const auto ps = spec.p.values();
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) throw UsageError(fmt::format("p grid must lie in (0, 1), got {}", p));
  }
  if (spec.m.empty()) throw UsageError("empty m list");
  if (spec.n && *spec.n < 1) throw UsageError(fmt::format("N must be >= 1, got {}", *spec.n));

  const std::string n_col = spec.n ? std::to_string(*spec.n) : std::string();
  out << "p,phi,m,N\n";
  for (const auto& m : spec.m) {
    const std::string m_col = m ? format_number(*m) : std::string("inf");
    for (double p : ps) {
      double value = 0.0;
      if (spec.n) {
        value = m ? phi_finite(p, *spec.n, *m) : phi_finite_limit_m(p, *spec.n);
      } else {
        value = m ? phi_infinite(p, *m) : phi_infinite_limit(p);
      }
      out << format_number(p) << ',' << format_number(value) << ',' << m_col << ',' << n_col << '\n';
    }
  }
}

void write_roots(const RootsSpec& spec, std::ostream& out, std::ostream& diag) {
  if (spec.n && *spec.n < 2) throw UsageError(fmt::format("N must be >= 2, got {}", *spec.n));
  if (!(spec.tol > 0.0)) throw UsageError("tol must be > 0");
  out << "m,p_star,p_min\n";
  for (double m : spec.m.values()) {
    if (!(m > 0.0)) throw UsageError(fmt::format("m must be > 0, got {}", m));
    std::optional<double> star;
    std::optional<double> minimiser;
    if (spec.n) {
      if (auto r = p_star_finite(*spec.n, m, spec.tol)) {
        star = r->p_star;
      } else {
        diag << fmt::format("warning: no root in (1/2, 1) for N={} m={}\n", *spec.n, format_number(m));
      }
    } else {
      if (m > 1.0) minimiser = p_min(m);
      if (m > 2.0) {
        star = p_star_infinite(m, spec.tol).p_star;
      } else {
        diag << fmt::format("warning: no root in (1/2, 1) for m={} (needs m > 2)\n", format_number(m));
      }
    }
    out << format_number(m) << ',' << optional_number(star) << ',' << optional_number(minimiser) << '\n';
  }
}

void write_critical(const CriticalSpec& spec, std::ostream& out) {
  if (spec.n.lo < 2) throw UsageError(fmt::format("N range must start at >= 2, got {}", spec.n.lo));
  if (!(spec.m_max > 2.0)) throw UsageError("m-max must be > 2");
  if (!(spec.tol > 0.0)) throw UsageError("tol must be > 0");
  const auto curve = trace_m_star(spec.n.lo, spec.n.hi, spec.tol, spec.m_max, spec.threads);
  out << "N,m_star\n";
  for (const auto& point : curve) out << point.n << ',' << optional_number(point.m_star) << '\n';
}

SimulateConfig parse_simulate_config(std::istream& in) {
  SimulateConfig cfg;
  bool have_p = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw UsageError(fmt::format("config line {}: expected key=value", lineno));
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));

    if (key == "p") {
      cfg.p = parse_double(value, "p");
      have_p = true;
    } else if (key == "c") {
      cfg.c = parse_double(value, "c");
    } else if (key == "scheme") {
      if (value == "all-or-nothing") {
        cfg.scheme = PayoutKind::AllOrNothing;
      } else if (value == "inverse-distance") {
        cfg.scheme = PayoutKind::InverseDistance;
      } else {
        throw UsageError(fmt::format("config line {}: unknown scheme '{}'", lineno, value));
      }
    } else if (key == "selection_strength") {
      cfg.selection_strength = parse_double(value, "selection_strength");
    } else if (key == "epsilon") {
      cfg.epsilon = parse_double(value, "epsilon");
    } else if (key == "max_steps") {
      cfg.max_steps = parse_int(value, "max_steps");
    } else if (key == "fixation_threshold") {
      cfg.fixation_threshold = parse_double(value, "fixation_threshold");
    } else if (key == "initial") {
      cfg.initial.clear();
      for (auto pair : split(value, ',')) {
        const auto parts = split(pair, ':');
        if (parts.size() != 2) throw UsageError(fmt::format("config line {}: expected k:freq, got '{}'", lineno, pair));
        cfg.initial.emplace_back(parse_double(parts[0], "k"), parse_double(parts[1], "frequency"));
      }
    } else {
      throw UsageError(fmt::format("config line {}: unknown key '{}'", lineno, key));
    }
  }
  if (!have_p) throw UsageError("config is missing p");
  if (cfg.initial.empty()) throw UsageError("config is missing initial");
  return cfg;
}

Trajectory write_simulation(const SimulateConfig& config, std::ostream& csv, std::ostream& summary) {
  const GameConfig game(config.p, config.c);
  std::vector<std::pair<PlayerType, double>> freqs;
  for (const auto& [k, x] : config.initial) freqs.emplace_back(PlayerType(k), x);
  const auto initial = PopulationState::from_frequencies(freqs);
  const PayoutScheme scheme = config.scheme == PayoutKind::AllOrNothing
                                  ? PayoutScheme::all_or_nothing(config.selection_strength)
                                  : PayoutScheme::inverse_distance(config.selection_strength, game);
  const PayoutScheme effective =
      config.epsilon ? PayoutScheme(scheme.kind(), scheme.selection_strength(), *config.epsilon) : scheme;

  const auto traj = simulate(initial, game, effective, config.max_steps, config.fixation_threshold);

  csv << "gen,target";
  for (const auto& type : traj.types) csv << ",k_" << format_number(type.k);
  csv << '\n';
  for (std::size_t g = 0; g < traj.steps.size(); ++g) {
    csv << g << ',' << format_number(traj.target_series[g]);
    for (double x : traj.steps[g]) csv << ',' << format_number(x);
    csv << '\n';
  }

  if (traj.fixation) {
    summary << "fixated=" << format_number(traj.fixation->winner.k) << " generation=" << traj.fixation->generation
            << '\n';
  } else {
    summary << "fixated=none generation=" << traj.generations() << '\n';
  }
  return traj;
}

void write_h2h(const HeadToHeadSpec& spec, std::ostream& out) {
  const auto d = head_to_head_distances(spec.k, spec.m, spec.p, spec.c);
  const auto margin = head_to_head_margin(spec.k, spec.m, spec.p, spec.c);
  out << "k=" << format_number(spec.k) << " m=" << format_number(spec.m) << " p=" << format_number(spec.p)
      << " c=" << format_number(spec.c) << '\n';
  out << "guess_low=" << format_number(guess(spec.k, GameConfig(spec.p, spec.c)))
      << " guess_high=" << format_number(guess(spec.k + spec.m, GameConfig(spec.p, spec.c))) << '\n';
  out << "target=" << format_number(d.target) << '\n';
  out << "closed_form d_low=" << format_number(d.closed_low) << " d_high=" << format_number(d.closed_high) << '\n';
  out << "true d_low=" << format_number(d.true_low) << " d_high=" << format_number(d.true_high) << '\n';
  out << "margin=" << format_number(margin.value) << '\n';
  out << "closed_form_valid=" << (d.closed_form_invalid() ? "no" : "yes") << '\n';
  out << "winner=" << to_string(d.winner()) << '\n';
}

namespace {

// Writes to --out when given, otherwise to the supplied stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Level-k analysis of the p-beauty contest"};
  app.require_subcommand(1);

  std::string out_path;
  std::string p_grid = "0.01:0.99:99";
  std::string m_list;
  std::optional<std::int64_t> n_opt;

  auto* phi = app.add_subcommand("phi", "Advantage function phi over a p grid (CSV p,phi,m,N)");
  phi->add_option("--p", p_grid, "p grid start:stop:count")->capture_default_str();
  phi->add_option("--m", m_list, "comma-separated step gaps; 'inf' for the limit")->required();
  phi->add_option("--N", n_opt, "finite population size");
  phi->add_option("--out", out_path, "output path (default stdout)");

  std::string m_grid;
  double tol = kDefaultRootTol;
  auto* roots = app.add_subcommand("roots", "Root p* and minimiser p_min per m (CSV m,p_star,p_min)");
  roots->add_option("--m", m_grid, "m grid start:stop:count")->required();
  roots->add_option("--N", n_opt, "finite population size");
  roots->add_option("--tol", tol, "residual tolerance")->capture_default_str();
  roots->add_option("--out", out_path, "output path (default stdout)");

  std::string n_range = "2:100";
  CriticalSpec critical_spec;
  auto* critical = app.add_subcommand("critical", "Critical curve m*(N) (CSV N,m_star)");
  critical->add_option("--N", n_range, "inclusive range lo:hi")->capture_default_str();
  critical->add_option("--tol", critical_spec.tol, "bisection tolerance on m")->capture_default_str();
  critical->add_option("--m-max", critical_spec.m_max, "search cap on m")->capture_default_str();
  critical->add_option("--threads", critical_spec.threads, "worker threads (0 = all cores)");
  critical->add_option("--out", out_path, "output path (default stdout)");

  std::string config_path;
  auto* simulate_cmd = app.add_subcommand("simulate", "Discrete replicator simulation from a key=value config");
  simulate_cmd->add_option("--config", config_path, "config file")->required();
  simulate_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

  HeadToHeadSpec h2h_spec;
  auto* h2h = app.add_subcommand("h2h", "Two-player comparison of a k-player and a (k+m)-player");
  h2h->add_option("--k", h2h_spec.k, "steps of the lower player")->required();
  h2h->add_option("--m", h2h_spec.m, "extra steps of the higher player")->required();
  h2h->add_option("--p", h2h_spec.p, "contraction multiplier")->required();
  h2h->add_option("--c", h2h_spec.c, "interval center")->capture_default_str();
  h2h->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (phi->parsed()) {
      SweepSpec spec{parse_grid(p_grid), parse_m_list(m_list), n_opt};
      std::ostringstream buffer;
      write_phi(spec, buffer);
      Sink sink(out_path, out);
      sink.get() << buffer.str();
    } else if (roots->parsed()) {
      RootsSpec spec{parse_grid(m_grid), n_opt, tol};
      std::ostringstream buffer;
      write_roots(spec, buffer, err);
      Sink sink(out_path, out);
      sink.get() << buffer.str();
    } else if (critical->parsed()) {
      critical_spec.n = parse_int_range(n_range);
      std::ostringstream buffer;
      write_critical(critical_spec, buffer);
      Sink sink(out_path, out);
      sink.get() << buffer.str();
    } else if (simulate_cmd->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError(fmt::format("cannot read config '{}'", config_path));
      const auto config = parse_simulate_config(in);
      std::ostringstream buffer;
      std::ostringstream summary;
      write_simulation(config, buffer, summary);
      Sink sink(out_path, out);
      sink.get() << buffer.str();
      sink.get().flush();
      out << summary.str();
    } else if (h2h->parsed()) {
      std::ostringstream buffer;
      write_h2h(h2h_spec, buffer);
      Sink sink(out_path, out);
      sink.get() << buffer.str();
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NoRootError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace pbeauty::cli
