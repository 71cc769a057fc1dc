#ifndef PBEAUTY_MODEL_HPP
#define PBEAUTY_MODEL_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace pbeauty {

/// Two step counts denote the same player type when they differ by at most this.
inline constexpr double kTypeTolerance = 1e-12;

/// Tolerance on the sum of a frequency vector.
inline constexpr double kSimplexTolerance = 1e-12;

/// Parameters of the guessing game. Players guess in [0, 2c] and try to hit
/// p times the mean guess.
class GameConfig {
 public:
  /// Throws DomainError unless 0 < p < 1 and c > 0.
  explicit GameConfig(double p, double c = 1.0);

  double p() const noexcept { return p_; }
  double c() const noexcept { return c_; }

 private:
  double p_;
  double c_;
};

/// A level-k player: iterates the "p times the average" reasoning k times.
/// k is real-valued and non-negative.
struct PlayerType {
  double k;

  explicit PlayerType(double steps);

  bool same_as(const PlayerType& other) const noexcept;
};

/// A population of player types, carried either as integer head counts or as
/// a frequency vector on the simplex. Types are unique up to kTypeTolerance;
/// duplicates passed to the factories are merged.
class PopulationState {
 public:
  enum class Flavor { Counts, Frequencies };

  /// Every count >= 1 and the total >= 2.
  static PopulationState from_counts(std::span<const std::pair<PlayerType, std::int64_t>> counts);

  /// Every frequency >= 0 and the sum within kSimplexTolerance of 1.
  static PopulationState from_frequencies(std::span<const std::pair<PlayerType, double>> freqs);

  /// Frequency vector on the simplex. No tolerance check beyond non-negativity:
  /// the weights are renormalised. Used by the replicator update.
  static PopulationState normalized(std::vector<PlayerType> types, std::vector<double> weights);

  Flavor flavor() const noexcept { return flavor_; }
  std::size_t size() const noexcept { return types_.size(); }
  std::span<const PlayerType> types() const noexcept { return types_; }

  /// Raw weights: head counts (as doubles) or frequencies.
  std::span<const double> weights() const noexcept { return weights_; }

  /// Weights divided by their total.
  std::vector<double> frequencies() const;

  /// Sum of counts for the counts flavor, 1 for frequencies.
  double total() const noexcept;

  /// Converts counts to frequencies. Frequencies are returned unchanged.
  PopulationState to_frequencies() const;

 private:
  PopulationState(Flavor flavor, std::vector<PlayerType> types, std::vector<double> weights)
      : flavor_(flavor), types_(std::move(types)), weights_(std::move(weights)) {}

  Flavor flavor_;
  std::vector<PlayerType> types_;
  std::vector<double> weights_;
};

/// c * p^k. Throws DomainError for negative or non-finite k.
double guess(double k, const GameConfig& cfg);
inline double guess(const PlayerType& type, const GameConfig& cfg) { return guess(type.k, cfg); }

/// p times the weighted mean guess of the population.
double target(const PopulationState& pop, const GameConfig& cfg);

/// Target for N players of which M are (k+m)-players and N-M are k-players:
/// c p^(k+1) (N + M (p^m - 1)) / N.
double mixed_target(double k, double m, std::int64_t n, std::int64_t m_invaders, const GameConfig& cfg);

/// The population {N-M k-players, M (k+m)-players}, omitting empty groups.
PopulationState mixed_population(double k, double m, std::int64_t n, std::int64_t m_invaders);

}  // namespace pbeauty

#endif
