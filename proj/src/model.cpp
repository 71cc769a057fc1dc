#include "pbeauty/model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "pbeauty/errors.hpp"

namespace pbeauty {

GameConfig::GameConfig(double p, double c) : p_(p), c_(c) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("p must lie in (0, 1), got {}", p));
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError(fmt::format("c must be positive, got {}", c));
}

PlayerType::PlayerType(double steps) : k(steps) {
  if (!(steps >= 0.0) || !std::isfinite(steps)) {
    throw DomainError(fmt::format("step count must be finite and >= 0, got {}", steps));
  }
}

bool PlayerType::same_as(const PlayerType& other) const noexcept {
  return std::abs(k - other.k) <= kTypeTolerance;
}

namespace {

// Merge duplicate types, preserving first-seen order.
template <class Weight>
void merge_into(std::span<const std::pair<PlayerType, Weight>> entries, std::vector<PlayerType>& types,
                std::vector<double>& weights) {
  for (const auto& [type, w] : entries) {
    bool merged = false;
    for (std::size_t i = 0; i < types.size(); ++i) {
      if (types[i].same_as(type)) {
        weights[i] += static_cast<double>(w);
        merged = true;
        break;
      }
    }
    if (!merged) {
      types.push_back(type);
      weights.push_back(static_cast<double>(w));
    }
  }
}

}  // namespace

PopulationState PopulationState::from_counts(std::span<const std::pair<PlayerType, std::int64_t>> counts) {
  if (counts.empty()) throw DomainError("population is empty");
  std::int64_t total = 0;
  for (const auto& [type, n] : counts) {
    if (n < 1) throw DomainError(fmt::format("count for k={} must be >= 1, got {}", type.k, n));
    total += n;
  }
  if (total < 2) throw DomainError(fmt::format("population size must be >= 2, got {}", total));
  std::vector<PlayerType> types;
  std::vector<double> weights;
  merge_into(counts, types, weights);
  return PopulationState(Flavor::Counts, std::move(types), std::move(weights));
}

PopulationState PopulationState::from_frequencies(std::span<const std::pair<PlayerType, double>> freqs) {
  if (freqs.empty()) throw DomainError("population is empty");
  double sum = 0.0;
  for (const auto& [type, x] : freqs) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw DomainError(fmt::format("frequency for k={} must be >= 0, got {}", type.k, x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw DomainError(fmt::format("frequencies must sum to 1, got {:.17g}", sum));
  }
  std::vector<PlayerType> types;
  std::vector<double> weights;
  merge_into(freqs, types, weights);
  return PopulationState(Flavor::Frequencies, std::move(types), std::move(weights));
}

PopulationState PopulationState::normalized(std::vector<PlayerType> types, std::vector<double> weights) {
  if (types.empty() || types.size() != weights.size()) throw DomainError("malformed population");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("weights must be finite and >= 0");
    sum += w;
  }
  if (!(sum > 0.0)) throw DomainError("population has no mass");
  for (double& w : weights) w /= sum;
  return PopulationState(Flavor::Frequencies, std::move(types), std::move(weights));
}

std::vector<double> PopulationState::frequencies() const {
  const double sum = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  std::vector<double> out(weights_);
  for (double& w : out) w /= sum;
  return out;
}

double PopulationState::total() const noexcept {
  if (flavor_ == Flavor::Frequencies) return 1.0;
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

PopulationState PopulationState::to_frequencies() const {
  if (flavor_ == Flavor::Frequencies) return *this;
  return PopulationState(Flavor::Frequencies, types_, frequencies());
}

double guess(double k, const GameConfig& cfg) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError(fmt::format("step count must be >= 0, got {}", k));
  return cfg.c() * std::pow(cfg.p(), k);
}

double target(const PopulationState& pop, const GameConfig& cfg) {
  if (pop.size() == 0) throw DomainError("population is empty");
  const auto types = pop.types();
  const auto weights = pop.weights();
  double weighted = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    weighted += weights[i] * guess(types[i], cfg);
    mass += weights[i];
  }
  if (!(mass > 0.0)) throw DomainError("population has no mass");
  return cfg.p() * weighted / mass;
}

namespace {

void check_mixed(double k, double m, std::int64_t n, std::int64_t m_invaders) {
  if (!(k >= 0.0)) throw DomainError(fmt::format("k must be >= 0, got {}", k));
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError(fmt::format("m must be > 0, got {}", m));
  if (n < 1) throw DomainError(fmt::format("N must be >= 1, got {}", n));
  if (m_invaders < 0 || m_invaders > n) {
    throw DomainError(fmt::format("M must lie in [0, N={}], got {}", n, m_invaders));
  }
}

}  // namespace

double mixed_target(double k, double m, std::int64_t n, std::int64_t m_invaders, const GameConfig& cfg) {
  check_mixed(k, m, n, m_invaders);
  const double p = cfg.p();
  const double nn = static_cast<double>(n);
  // p^m - 1 via expm1 keeps the invader term accurate when p^m is close to 1.
  const double pm_minus_one = std::expm1(m * std::log(p));
  return cfg.c() * std::pow(p, k + 1.0) * (nn + static_cast<double>(m_invaders) * pm_minus_one) / nn;
}

PopulationState mixed_population(double k, double m, std::int64_t n, std::int64_t m_invaders) {
  check_mixed(k, m, n, m_invaders);
  std::vector<std::pair<PlayerType, std::int64_t>> counts;
  if (n - m_invaders > 0) counts.emplace_back(PlayerType(k), n - m_invaders);
  if (m_invaders > 0) counts.emplace_back(PlayerType(k + m), m_invaders);
  return PopulationState::from_counts(counts);
}

}  // namespace pbeauty
