#pragma once

// Couplings of the two-site marginal (X_1, X_2) of the Maxwell-Boltzmann and
// Bose-Einstein statistics with the product of one-site marginals (Y_1, Y_2).
// Both set Y_1 = X_1, so P(X_2 != Y_2) bounds the TV distance between them.

#include <cstdint>
#include <string_view>

#include "grbb/measures.hpp"
#include "grbb/rng.hpp"

namespace grbb {

struct CouplingSample {
  std::uint64_t x1 = 0;
  std::uint64_t x2 = 0;
  std::uint64_t y1 = 0;
  std::uint64_t y2 = 0;

  friend bool operator==(const CouplingSample&, const CouplingSample&) = default;
};

enum class CouplingKind { MaxwellBoltzmann, BoseEinstein };

std::string_view short_name(CouplingKind kind) noexcept;

/// X_1 ~ Binomial(N, 1/L); shared uniforms U_1..U_N give
/// X_2 = #{k <= N - X_1 : U_k <= 1/(L-1)} and Y_2 = #{k <= N : U_k <= 1/L}.
class MaxwellBoltzmannCoupler {
 public:
  MaxwellBoltzmannCoupler(std::uint64_t bins, std::uint64_t balls);
  CouplingSample operator()(Rng& rng) const;

 private:
  std::uint64_t bins_;
  std::uint64_t balls_;
};

/// Two-urn construction. Urn A starts with balls 2..L, urn B with 1..L, and
/// every draw is returned with one extra copy. For X_1 = n < N, N - n coupled
/// draws take ball k from A and, with probability
///   (L + t - 1)(1 + t_k - f_k) / ((L + t)(1 + t_k)),
/// the same ball from B (ball 1 otherwise); then n further draws from B alone.
/// X_2 counts ball 2 drawn from A, Y_2 counts ball 2 drawn from B.
/// For X_1 = N, X_2 = 0 and Y_2 comes from N plain draws of B.
class BoseEinsteinCoupler {
 public:
  BoseEinsteinCoupler(std::uint64_t bins, std::uint64_t balls);
  CouplingSample operator()(Rng& rng) const;

 private:
  std::uint64_t bins_;
  std::uint64_t balls_;
  PmfSampler first_site_;
};

/// Success probability of the coupled draw's test. `draws` = t, `drawn_from_a`
/// = t_k, `failures` = f_k.
double be_test_probability(std::uint64_t bins, std::uint64_t draws, std::uint64_t drawn_from_a,
                           std::uint64_t failures);

/// Ball-2 count after `draws` draws of an L-color Polya urn (double replacement).
std::uint64_t polya_urn_ball_count(std::uint64_t bins, std::uint64_t draws, Rng& rng);

CouplingSample mb_coupling_sample(std::uint64_t bins, std::uint64_t balls, Rng& rng);
CouplingSample be_coupling_sample(std::uint64_t bins, std::uint64_t balls, Rng& rng);

struct MismatchEstimate {
  double estimate;
  double std_error;
  std::uint64_t mismatches;
  std::uint64_t samples;
};

/// Monte Carlo frequency of X_2 != Y_2. Samples are split in blocks of fixed
/// size, block b drawing from make_stream(seed, tag, L, b); the result does
/// not depend on the worker count.
MismatchEstimate mismatch_probability(CouplingKind kind, std::uint64_t bins, std::uint64_t balls,
                                      std::uint64_t samples, std::uint64_t seed);

}  // namespace grbb
