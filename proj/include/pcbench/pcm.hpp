#pragma once

#include <vector>

#include "pcbench/errors.hpp"

namespace pcbench {

// Unordered pair of stimuli, stored canonically with a < b.
struct Pair {
  int a;
  int b;

  Pair(int first, int second) : a(first), b(second) {
    if (a == b) throw InvalidJudgment("pair members must differ");
    if (a > b) std::swap(a, b);
  }

  friend bool operator==(const Pair&, const Pair&) = default;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

// One binary preference: winner beat loser.
struct Judgment {
  int winner;
  int loser;

  Judgment(int w, int l) : winner(w), loser(l) {
    if (winner == loser) throw InvalidJudgment("judgment winner equals loser");
  }

  Pair pair() const { return Pair(winner, loser); }
  friend bool operator==(const Judgment&, const Judgment&) = default;
};

// Pairwise comparison matrix: cell (i, j) counts how often stimulus i was
// preferred over stimulus j. Counts are reals so that expected (fractional)
// count matrices share the type with vote tallies. Value type; mutate only
// under exclusive access.
class PCMatrix {
 public:
  // Every off-diagonal cell starts at init_value, the diagonal at zero.
  explicit PCMatrix(int n, double init_value = 1.0);

  int size() const { return n_; }
  double init_value() const { return init_; }

  double at(int i, int j) const {
    check_index(i);
    check_index(j);
    return counts_[static_cast<std::size_t>(i) * n_ + j];
  }

  // Direct cell assignment, used when building ground-truth or expected
  // matrices. Rejects diagonal and negative writes.
  void set(int i, int j, double value);

  // Record one judgment: winner-over-loser cell grows by one.
  void record(const Judgment& j);

  // Empirical win rate counts[i][j] / (counts[i][j] + counts[j][i]).
  double preference_probability(int i, int j) const;

  // Votes on the unordered pair {i, j} in both directions.
  double pair_total(int i, int j) const { return at(i, j) + at(j, i); }

  // Sum of all pair totals over unordered pairs.
  double total_comparisons() const;

  // Row sum: total wins of stimulus i.
  double wins(int i) const;

  // Column sum: total losses of stimulus i.
  double losses(int i) const;

  friend bool operator==(const PCMatrix&, const PCMatrix&) = default;

 private:
  void check_index(int i) const {
    if (i < 0 || i >= n_) throw InvalidJudgment("stimulus index out of range");
  }

  int n_;
  double init_;
  std::vector<double> counts_;
};

}  // namespace pcbench
