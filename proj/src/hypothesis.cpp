#include "grbb/hypothesis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace grbb {

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed,
                                std::span<const double> expected_probs, double min_expected) {
  if (observed.size() != expected_probs.size()) throw std::invalid_argument("cell count mismatch");
  const auto n = static_cast<double>(std::accumulate(observed.begin(), observed.end(), std::uint64_t{0}));
  if (n == 0.0) throw std::invalid_argument("no observations");

  double stat = 0.0;
  std::uint64_t cells = 0;
  double pooled_expected = n;
  double pooled_observed = n;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * expected_probs[i];
    if (e < min_expected) continue;
    const double o = static_cast<double>(observed[i]);
    stat += (o - e) * (o - e) / e;
    pooled_expected -= e;
    pooled_observed -= o;
    ++cells;
  }
  if (pooled_expected > 1e-9 * n) {
    stat += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
    ++cells;
  } else if (pooled_observed > 0.5) {
    // Observations where the model puts no mass.
    return {std::numeric_limits<double>::infinity(), cells, 0.0};
  }
  if (cells < 2) return {stat, 0, 1.0};
  const std::uint64_t dof = cells - 1;
  const boost::math::chi_squared dist(static_cast<double>(dof));
  return {stat, dof, boost::math::cdf(boost::math::complement(dist, stat))};
}

}  // namespace grbb
