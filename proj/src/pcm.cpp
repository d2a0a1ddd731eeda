#include "pcbench/pcm.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace pcbench {

PCMatrix::PCMatrix(int n, double init_value) : n_(n), init_(init_value) {
  if (n < 2) {
    throw InvalidDimension("PCMatrix needs at least two stimuli, got " +
                           std::to_string(n));
  }
  if (!(init_value >= 0.0) || !std::isfinite(init_value)) {
    throw InvalidDimension("init_value must be a finite nonnegative real");
  }
  counts_.assign(static_cast<std::size_t>(n_) * n_, init_);
  for (int i = 0; i < n_; ++i) {
    counts_[static_cast<std::size_t>(i) * n_ + i] = 0.0;
  }
}

void PCMatrix::set(int i, int j, double value) {
  check_index(i);
  check_index(j);
  if (i == j) throw InvalidJudgment("diagonal cells are fixed at zero");
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw InvalidJudgment("cell counts must be finite and nonnegative");
  }
  counts_[static_cast<std::size_t>(i) * n_ + j] = value;
}

void PCMatrix::record(const Judgment& j) {
  check_index(j.winner);
  check_index(j.loser);
  counts_[static_cast<std::size_t>(j.winner) * n_ + j.loser] += 1.0;
}

double PCMatrix::preference_probability(int i, int j) const {
  const double forward = at(i, j);
  const double total = forward + at(j, i);
  if (total <= 0.0) {
    throw UndefinedPreference("no votes on pair (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
  }
  return forward / total;
}

double PCMatrix::total_comparisons() const {
  double total = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      total += pair_total(i, j);
    }
  }
  return total;
}

double PCMatrix::wins(int i) const {
  check_index(i);
  double w = 0.0;
  for (int j = 0; j < n_; ++j) w += counts_[static_cast<std::size_t>(i) * n_ + j];
  return w;
}

double PCMatrix::losses(int i) const {
  check_index(i);
  double l = 0.0;
  for (int j = 0; j < n_; ++j) l += counts_[static_cast<std::size_t>(j) * n_ + i];
  return l;
}

}  // namespace pcbench
