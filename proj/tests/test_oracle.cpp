#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <vector>

#include "pcbench/oracle.hpp"

using namespace pcbench;

namespace {

PCMatrix two_by_two(double forward, double backward) {
  PCMatrix pcm(2, 0.0);
  pcm.set(0, 1, forward);
  pcm.set(1, 0, backward);
  return pcm;
}

}  // namespace

TEST_CASE("empirical oracle requires a complete design") {
  PCMatrix incomplete(3, 0.0);
  incomplete.set(0, 1, 2.0);
  incomplete.set(1, 0, 1.0);
  incomplete.set(1, 2, 1.0);  // pair (0,2) has no votes
  CHECK_THROWS_AS(EmpiricalOracle{incomplete}, DatasetError);
}

TEST_CASE("empirical with-replacement follows the recorded win rate") {
  EmpiricalOracle oracle(two_by_two(12.0, 4.0));
  Rng rng(21);
  int wins_a = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    if (oracle.judge(Pair(0, 1), rng).winner == 0) ++wins_a;
  }
  const double se = std::sqrt(draws * 0.75 * 0.25);
  CHECK(std::abs(wins_a - draws * 0.75) < 5.0 * se);
  // the ground truth matrix is never mutated
  CHECK(oracle.ground_truth_pcm().at(0, 1) == 12.0);
}

TEST_CASE("degenerate pair always picks the recorded winner") {
  EmpiricalOracle oracle(two_by_two(7.0, 0.0));
  Rng rng(22);
  for (int k = 0; k < 50; ++k) CHECK(oracle.judge(Pair(0, 1), rng).winner == 0);
}

TEST_CASE("without-replacement exhausts the vote pool exactly") {
  // pool {a, a, b}: every draw order yields two a-wins and one b-win
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    EmpiricalOracle oracle(two_by_two(2.0, 1.0), EmpiricalMode::kWithoutReplacement);
    Rng rng(seed);
    int wins_a = 0;
    for (int k = 0; k < 3; ++k) {
      CHECK(oracle.remaining(Pair(0, 1)) == doctest::Approx(3.0 - k));
      if (oracle.judge(Pair(0, 1), rng).winner == 0) ++wins_a;
    }
    CHECK(wins_a == 2);
    CHECK_THROWS_AS(oracle.judge(Pair(0, 1), rng), PoolExhausted);
  }
}

TEST_CASE("synthetic judge obeys the flip floor") {
  // huge gap, zero noise: the better stimulus wins unless flipped
  SyntheticOracle oracle({5.0, 1.0}, {0.0, 0.0}, 0.1);
  Rng rng(33);
  int wins_a = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    if (oracle.judge(Pair(0, 1), rng).winner == 0) ++wins_a;
  }
  const double se = std::sqrt(draws * 0.9 * 0.1);
  CHECK(std::abs(wins_a - draws * 0.9) < 5.0 * se);
}

TEST_CASE("synthetic judge is symmetric for identical stimuli") {
  SyntheticOracle oracle({3.0, 3.0}, {0.4, 0.4}, 0.1);
  Rng rng(34);
  int wins_a = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    if (oracle.judge(Pair(0, 1), rng).winner == 0) ++wins_a;
  }
  const double se = std::sqrt(draws * 0.25);
  CHECK(std::abs(wins_a - draws * 0.5) < 5.0 * se);
}

TEST_CASE("synthetic judge matches the closed-form preference") {
  SyntheticOracle oracle({3.0, 2.0}, {0.5, 0.5}, 0.0);
  const double expected = 0.9213503964748574;  // Phi(1/sqrt(0.5))
  CHECK(oracle.expected_preference(0, 1) == doctest::Approx(expected).epsilon(1e-9));
  Rng rng(35);
  int wins_a = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    if (oracle.judge(Pair(0, 1), rng).winner == 0) ++wins_a;
  }
  const double se = std::sqrt(draws * expected * (1.0 - expected));
  CHECK(std::abs(wins_a - draws * expected) < 5.0 * se);
}

TEST_CASE("expected preference closed forms") {
  SyntheticOracle equal({2.0, 2.0}, {0.3, 0.3});
  CHECK(equal.expected_preference(0, 1) == doctest::Approx(0.5));

  SyntheticOracle gap({5.0, 1.0}, {0.0, 0.0}, 0.1);
  CHECK(gap.expected_preference(0, 1) == doctest::Approx(0.9));
  CHECK(gap.expected_preference(1, 0) == doctest::Approx(0.1));

  SyntheticOracle unit({3.0, 2.0}, {std::sqrt(0.5), std::sqrt(0.5)}, 0.1);
  CHECK(unit.expected_preference(0, 1) ==
        doctest::Approx(0.7730757968548344).epsilon(1e-9));

  // complementarity over random configurations
  Rng rng(36);
  for (int t = 0; t < 20; ++t) {
    SyntheticOracle random = synth_generate(4, rng);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        CHECK(random.expected_preference(i, j) + random.expected_preference(j, i) ==
              doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("synth generation ranges and determinism") {
  Rng rng(40);
  const SyntheticOracle oracle = synth_generate(16, rng);
  REQUIRE(oracle.mu().size() == 16);
  REQUIRE(oracle.sigma().size() == 16);
  for (const double m : oracle.mu()) {
    CHECK(m >= 1.0);
    CHECK(m <= 5.0);
  }
  for (const double s : oracle.sigma()) {
    CHECK(s >= 0.0);
    CHECK(s <= 0.7);
  }
  CHECK(oracle.flip_prob() == 0.1);
  CHECK(oracle.subjects() == 15);

  Rng rng_a(41), rng_b(41);
  const SyntheticOracle a = synth_generate(2, rng_a);
  const SyntheticOracle b = synth_generate(2, rng_b);
  CHECK(a.mu() == b.mu());
  CHECK(a.sigma() == b.sigma());
}

TEST_CASE("generated means average to the middle of the range") {
  Rng rng(42);
  double sum = 0.0;
  int count = 0;
  for (int g = 0; g < 10000; ++g) {
    const SyntheticOracle oracle = synth_generate(2, rng);
    for (const double m : oracle.mu()) {
      sum += m;
      ++count;
    }
  }
  CHECK(std::abs(sum / count - 3.0) < 0.05);
}

TEST_CASE("ground truth scores") {
  SUBCASE("identical stimuli give all-zero scores") {
    const SyntheticOracle oracle({2.0, 2.0, 2.0}, {0.3, 0.3, 0.3});
    for (const double s : ground_truth_scores(oracle, ScoringBackend::kBt).s) {
      CHECK(std::abs(s) < 1e-9);
    }
  }
  SUBCASE("two-stimulus synthetic closed form") {
    // expected preference 0.9 -> BT difference ln(0.9/0.1) = ln 9
    const SyntheticOracle oracle({5.0, 1.0}, {0.0, 0.0}, 0.1);
    const QualityScores scores = ground_truth_scores(oracle, ScoringBackend::kBt);
    CHECK(scores.s[0] - scores.s[1] == doctest::Approx(std::log(9.0)).epsilon(1e-8));
  }
  SUBCASE("uniform empirical votes give all-zero scores") {
    PCMatrix gt(4, 0.0);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i != j) gt.set(i, j, 6.0);
      }
    }
    const EmpiricalOracle oracle(gt);
    for (const double s : ground_truth_scores(oracle, ScoringBackend::kBt).s) {
      CHECK(std::abs(s) < 1e-9);
    }
  }
  SUBCASE("synthetic ground truth is seed independent") {
    const SyntheticOracle oracle({4.0, 2.5, 1.5}, {0.2, 0.4, 0.6});
    const PCMatrix a = oracle.ground_truth_pcm();
    const PCMatrix b = oracle.ground_truth_pcm();
    CHECK(a == b);
    CHECK(a.at(0, 1) ==
          doctest::Approx(15.0 * oracle.expected_preference(0, 1)).epsilon(1e-12));
  }
  SUBCASE("simulated ground truth mode is reproducible and complete") {
    SyntheticOracle oracle({4.0, 2.5, 1.5}, {0.2, 0.4, 0.6});
    oracle.set_ground_truth_mode(SyntheticGroundTruth::kSimulated, 99);
    const PCMatrix a = oracle.ground_truth_pcm();
    const PCMatrix b = oracle.ground_truth_pcm();
    CHECK(a == b);
    CHECK(a.total_comparisons() == doctest::Approx(15.0 * 3.0));
  }
}
