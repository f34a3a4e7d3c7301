#pragma once

// The GRBB chain: every occupied bin releases one ball per step and the
// released balls are reassigned together by one draw of the statistic.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "grbb/measures.hpp"
#include "grbb/occupancy.hpp"
#include "grbb/rng.hpp"
#include "grbb/statistics.hpp"

namespace grbb {

/// xi <- xi - w(xi) + B, with B drawn from `law` on xi.occupied() balls.
void grbb_step_in_place(ReassignmentLaw law, OccupancyVector& state, Rng& rng);

OccupancyVector grbb_step(ReassignmentLaw law, const OccupancyVector& state, Rng& rng);

/// Empirical measures rho_L(eta(t)) for t = 0..steps.
std::vector<Pmf> grbb_trajectory(ReassignmentLaw law, const OccupancyVector& init, std::size_t steps,
                                 Rng& rng);

/// All compositions of `balls` into `bins` non-negative parts, lexicographic.
std::vector<OccupancyVector> compositions(std::size_t bins, std::uint64_t balls);

inline constexpr std::size_t kMaxExactStates = 20000;

/// Sparse row-stochastic matrix of the chain on compositions of N into L parts.
struct TransitionMatrix {
  using Row = std::vector<std::pair<std::size_t, double>>;

  ReassignmentLaw law;
  std::vector<OccupancyVector> states;
  std::vector<Row> rows;

  std::size_t size() const noexcept { return states.size(); }
  /// Throws std::out_of_range for states not in the matrix.
  std::size_t index_of(const OccupancyVector& state) const;

  std::map<OccupancyVector, std::size_t> index;
};

/// Throws std::length_error when the number of states exceeds `max_states`.
TransitionMatrix exact_transition_matrix(ReassignmentLaw law, std::size_t bins, std::uint64_t balls,
                                         std::size_t max_states = kMaxExactStates);

/// One step of the distribution: returns dist * P.
std::vector<double> propagate(const TransitionMatrix& matrix, const std::vector<double>& dist);

/// Row `start` of P^steps.
std::vector<double> distribution_after(const TransitionMatrix& matrix, std::size_t start, std::size_t steps);

/// Stationary vector supported on the unique closed class. Throws
/// std::domain_error when the chain has more than one closed class.
std::vector<double> stationary_exact(const TransitionMatrix& matrix);

/// Smallest t with TV(P^t(start, .), pi) <= eps; the maximum over every start
/// state when `start` is empty.
std::size_t exact_mixing_time(const TransitionMatrix& matrix, std::optional<std::size_t> start,
                              double eps = 0.25);

}  // namespace grbb
