#ifndef PBEAUTY_CLI_HPP
#define PBEAUTY_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pbeauty/analysis.hpp"
#include "pbeauty/dynamics.hpp"

namespace pbeauty::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `start:stop:count`, inclusive endpoints, linear spacing. A bare number is a
/// one-point grid.
struct Grid {
  double start;
  double stop;
  std::size_t count;

  std::vector<double> values() const;
};

Grid parse_grid(std::string_view text);

/// Inclusive integer range `lo:hi` (or a single integer).
struct IntRange {
  std::int64_t lo;
  std::int64_t hi;
};

IntRange parse_int_range(std::string_view text);

/// Comma-separated step gaps; `inf` yields nullopt (the m -> infinity limit).
std::vector<std::optional<double>> parse_m_list(std::string_view text);

/// 12 significant digits, shortest of fixed/exponent notation.
std::string format_number(double x);

struct SweepSpec {
  Grid p{0.01, 0.99, 99};
  std::vector<std::optional<double>> m;
  std::optional<std::int64_t> n;
};

/// CSV `p,phi,m,N`: one row per (m, p), m-major.
void write_phi(const SweepSpec& spec, std::ostream& out);

struct RootsSpec {
  Grid m;
  std::optional<std::int64_t> n;
  double tol = kDefaultRootTol;
};

/// CSV `m,p_star,p_min`. Rows without a root carry an empty p_star and a
/// warning on `diag`.
void write_roots(const RootsSpec& spec, std::ostream& out, std::ostream& diag);

struct CriticalSpec {
  IntRange n{2, 100};
  double tol = kDefaultCurveTol;
  double m_max = kDefaultMMax;
  unsigned threads = 0;
};

/// CSV `N,m_star`.
void write_critical(const CriticalSpec& spec, std::ostream& out);

/// Flat key=value simulation config.
struct SimulateConfig {
  double p = 0.0;
  double c = 1.0;
  PayoutKind scheme = PayoutKind::InverseDistance;
  double selection_strength = 0.5;
  std::optional<double> epsilon;
  std::int64_t max_steps = kDefaultMaxSteps;
  double fixation_threshold = kDefaultFixationThreshold;
  std::vector<std::pair<double, double>> initial;  // (k, frequency)
};

SimulateConfig parse_simulate_config(std::istream& in);

/// Runs the simulation; writes per-generation CSV `gen,target,k_<k>...` to
/// `csv` and the summary line `fixated=<k|none> generation=<g>` to `summary`.
Trajectory write_simulation(const SimulateConfig& config, std::ostream& csv, std::ostream& summary);

struct HeadToHeadSpec {
  double k = 0.0;
  double m = 1.0;
  double p = 0.5;
  double c = 1.0;
};

void write_h2h(const HeadToHeadSpec& spec, std::ostream& out);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pbeauty::cli

#endif
