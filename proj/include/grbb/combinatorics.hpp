#pragma once

#include <cstdint>

namespace grbb {

/// log C(n, k); -inf when k > n.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k) as a double. Exact integer arithmetic for n <= 64, log-gamma above.
double binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k) * p^k * (1-p)^(n-k), with the 0^0 = 1 convention at p in {0, 1}.
double binomial_pmf(std::uint64_t n, std::uint64_t k, double p);

}  // namespace grbb
