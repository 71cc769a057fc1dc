#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "pbeauty/errors.hpp"
#include "pbeauty/model.hpp"

using namespace pbeauty;

TEST_CASE("GameConfig rejects degenerate parameters") {
  CHECK_THROWS_AS(GameConfig(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(GameConfig(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(GameConfig(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(GameConfig(0.5, -3.0), DomainError);
  CHECK_NOTHROW(GameConfig(0.5, 50.0));
}

TEST_CASE("guess") {
  const GameConfig cfg(0.5, 50.0);
  CHECK(guess(0.0, cfg) == 50.0);
  CHECK(guess(1.0, cfg) == 25.0);
  CHECK(guess(2.0, cfg) == 12.5);
  CHECK(guess(2.5, cfg) == doctest::Approx(50.0 * std::pow(0.5, 2.5)));
  CHECK_THROWS_AS(guess(-0.1, cfg), DomainError);
  CHECK_THROWS_AS(PlayerType(-1.0), DomainError);

  SUBCASE("strictly decreasing and in (0, c]") {
    auto g = oracle::rng(1);
    for (int i = 0; i < 1000; ++i) {
      const GameConfig rc(oracle::uniform(g, 0.01, 0.99), oracle::uniform(g, 0.1, 100.0));
      const double k1 = oracle::uniform(g, 0.0, 20.0);
      const double k2 = k1 + oracle::uniform(g, 1e-3, 5.0);
      CHECK(guess(k1, rc) > guess(k2, rc));
      CHECK(guess(k1, rc) <= rc.c());
      CHECK(guess(k2, rc) > 0.0);
    }
  }
}

TEST_CASE("target of small populations") {
  const GameConfig cfg(0.8, 50.0);
  const double k = 1.5, m = 3.0;

  SUBCASE("homogeneous") {
    const std::vector<std::pair<PlayerType, std::int64_t>> counts{{PlayerType(k), 7}};
    CHECK(target(PopulationState::from_counts(counts), cfg) == doctest::Approx(50.0 * std::pow(0.8, k + 1)));
  }
  SUBCASE("one invader among N") {
    const std::int64_t n = 10;
    const std::vector<std::pair<PlayerType, std::int64_t>> counts{{PlayerType(k), n}, {PlayerType(k + m), 1}};
    const double expected = 50.0 * std::pow(0.8, k + 1) * (n + std::pow(0.8, m)) / (n + 1);
    CHECK(target(PopulationState::from_counts(counts), cfg) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("two players") {
    const std::vector<std::pair<PlayerType, std::int64_t>> counts{{PlayerType(k), 1}, {PlayerType(k + m), 1}};
    const double expected = 25.0 * (std::pow(0.8, k + 1) + std::pow(0.8, k + m + 1));
    CHECK(target(PopulationState::from_counts(counts), cfg) == doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("frequencies and counts agree") {
    const std::vector<std::pair<PlayerType, std::int64_t>> counts{{PlayerType(0), 3}, {PlayerType(2), 1}};
    const std::vector<std::pair<PlayerType, double>> freqs{{PlayerType(0), 0.75}, {PlayerType(2), 0.25}};
    CHECK(target(PopulationState::from_counts(counts), cfg) ==
          doctest::Approx(target(PopulationState::from_frequencies(freqs), cfg)).epsilon(1e-15));
  }
}

TEST_CASE("PopulationState validation") {
  using Counts = std::vector<std::pair<PlayerType, std::int64_t>>;
  using Freqs = std::vector<std::pair<PlayerType, double>>;
  CHECK_THROWS_AS(PopulationState::from_counts(Counts{}), DomainError);
  CHECK_THROWS_AS(PopulationState::from_counts(Counts{{PlayerType(1), 1}}), DomainError);
  CHECK_THROWS_AS(PopulationState::from_counts(Counts{{PlayerType(1), 3}, {PlayerType(2), 0}}), DomainError);
  CHECK_THROWS_AS(PopulationState::from_frequencies(Freqs{{PlayerType(1), 0.5}, {PlayerType(2), 0.4}}), DomainError);
  CHECK_THROWS_AS(PopulationState::from_frequencies(Freqs{{PlayerType(1), 1.5}, {PlayerType(2), -0.5}}),
                  DomainError);

  SUBCASE("types within 1e-12 merge") {
    const auto pop = PopulationState::from_counts(Counts{{PlayerType(1.0), 2}, {PlayerType(1.0 + 1e-13), 3}});
    REQUIRE(pop.size() == 1);
    CHECK(pop.total() == 5.0);
  }
  SUBCASE("counts convert to frequencies") {
    const auto pop = PopulationState::from_counts(Counts{{PlayerType(0), 3}, {PlayerType(4), 1}}).to_frequencies();
    CHECK(pop.flavor() == PopulationState::Flavor::Frequencies);
    CHECK(pop.weights()[0] == 0.75);
    CHECK(pop.weights()[1] == 0.25);
  }
}

TEST_CASE("mixed_target") {
  const GameConfig cfg(0.8, 50.0);
  CHECK(mixed_target(1.0, 2.0, 9, 0, cfg) == doctest::Approx(50.0 * std::pow(0.8, 2.0)));
  CHECK(mixed_target(1.0, 2.0, 9, 9, cfg) == doctest::Approx(50.0 * std::pow(0.8, 4.0)));
  CHECK_THROWS_AS(mixed_target(1.0, 2.0, 9, 10, cfg), DomainError);
  CHECK_THROWS_AS(mixed_target(1.0, 2.0, 0, 0, cfg), DomainError);
  CHECK_THROWS_AS(mixed_target(1.0, 0.0, 5, 1, cfg), DomainError);

  SUBCASE("9 residents and 1 invader") {
    const double closed = mixed_target(0.0, 3.0, 10, 1, cfg);
    const double direct = target(mixed_population(0.0, 3.0, 10, 1), cfg);
    CHECK(std::abs(closed - direct) <= 1e-12 * std::abs(direct));
    CHECK(closed == doctest::Approx(oracle::mixed_target_direct(0.0, 3.0, 10, 1, 0.8, 50.0)).epsilon(1e-13));
  }
}

TEST_CASE("sandwich: the two-player target lies between the guesses times p") {
  auto g = oracle::rng(7);
  int below_invader = 0;
  for (int i = 0; i < 5000; ++i) {
    const double p = oracle::uniform(g, 0.01, 0.99);
    const double c = oracle::uniform(g, 0.1, 100.0);
    const double k = oracle::uniform(g, 0.0, 10.0);
    const double m = oracle::uniform(g, 1e-3, 20.0);
    const GameConfig cfg(p, c);
    const std::vector<std::pair<PlayerType, std::int64_t>> counts{{PlayerType(k), 1}, {PlayerType(k + m), 1}};
    const double t = target(PopulationState::from_counts(counts), cfg);
    CHECK(c * std::pow(p, k + m + 1) <= t * (1 + 1e-14));
    CHECK(t <= c * std::pow(p, k + 1) * (1 + 1e-14));
    CHECK(c * std::pow(p, k + 1) < c * std::pow(p, k));

    // The invader's own guess c p^(k+m) is only a lower bound when
    // p^(m-1) <= 1/(2-p); otherwise it sits above the target.
    const bool guess_below = c * std::pow(p, k + m) <= t;
    if (std::abs(std::pow(p, m - 1) * (2 - p) - 1) > 1e-9) {
      CHECK(guess_below == (std::pow(p, m - 1) <= 1 / (2 - p)));
    }
    below_invader += guess_below ? 0 : 1;
  }
  CHECK(below_invader > 0);
}
