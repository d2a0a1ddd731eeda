#include "pcbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pcbench {

namespace {

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("correlation inputs must have equal length");
  }
  if (x.size() < 3) {
    throw std::invalid_argument("correlation needs at least three samples");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw std::invalid_argument("correlation inputs must be finite");
    }
  }
}

}  // namespace

double plcc(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw UndefinedCorrelation("correlation of a constant vector is undefined");
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    // positions i..j (0-based) share the averaged 1-based rank
    const double rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double srocc(std::span<const double> x, std::span<const double> y) {
  check_lengths(x, y);
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return plcc(rx, ry);
}

double fisher_z(double r) {
  if (!std::isfinite(r) || r < -1.0 || r > 1.0) {
    throw std::domain_error("fisher_z requires a correlation in [-1, 1]");
  }
  const double clamped = std::clamp(r, -1.0 + 1e-7, 1.0 - 1e-7);
  return std::atanh(clamped);
}

}  // namespace pcbench
