#pragma once

#include <cstdint>
#include <span>

namespace grbb {

struct ChiSquareResult {
  double statistic;
  std::uint64_t dof;
  double p_value;
};

/// Pearson goodness-of-fit. Cells whose expected count is below
/// `min_expected` are pooled into one cell together with the probability
/// mass not covered by `expected_probs`.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> expected_probs, double min_expected = 5.0);

}  // namespace grbb
