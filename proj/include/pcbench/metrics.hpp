#pragma once

#include <span>
#include <vector>

#include "pcbench/errors.hpp"

namespace pcbench {

// Pearson linear correlation coefficient, clamped to [-1, 1].
// Throws UndefinedCorrelation when either vector is constant.
double plcc(std::span<const double> x, std::span<const double> y);

// Spearman rank-order correlation: Pearson correlation of average ranks.
double srocc(std::span<const double> x, std::span<const double> y);

// Fisher variance-stabilizing transform arctanh(r), with |r| clamped to
// 1 - 1e-7 so perfect correlations stay plottable.
double fisher_z(double r);

// 1-based ranks with ties assigned the average of their positions.
std::vector<double> average_ranks(std::span<const double> v);

}  // namespace pcbench
