#include "grbb/combinatorics.hpp"

#include <cmath>
#include <limits>

namespace grbb {

namespace {

constexpr std::uint64_t kExactLimit = 64;

double exact_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    r = r * (n - i) / (i + 1);
  }
  return static_cast<double>(r);
}

}  // namespace

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  if (n <= kExactLimit) return std::log(exact_binomial(n, k));
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

double binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0.0;
  if (n <= kExactLimit) return exact_binomial(n, k);
  return std::exp(log_binomial(n, k));
}

double binomial_pmf(std::uint64_t n, std::uint64_t k, double p) {
  if (k > n) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  const auto kd = static_cast<double>(k);
  const auto rest = static_cast<double>(n - k);
  return std::exp(log_binomial(n, k) + kd * std::log(p) + rest * std::log1p(-p));
}

}  // namespace grbb
