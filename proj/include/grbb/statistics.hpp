#pragma once

// The three classical occupancy statistics used as reassignment rules.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "grbb/measures.hpp"
#include "grbb/occupancy.hpp"
#include "grbb/rng.hpp"

namespace grbb {

enum class ReassignmentLaw { FermiDirac, MaxwellBoltzmann, BoseEinstein };

/// "fd", "mb", "be".
std::string_view short_name(ReassignmentLaw law) noexcept;
std::string_view long_name(ReassignmentLaw law) noexcept;
/// Accepts short or long names, case-insensitive. Throws std::invalid_argument.
ReassignmentLaw parse_law(std::string_view name);

/// Lipschitz constant of psi in total variation: 1 (FD), 3 (MB), 4 (BE).
double lipschitz_constant(ReassignmentLaw law) noexcept;

/// Throws std::domain_error("statistic undefined") for Fermi-Dirac with N > L,
/// std::invalid_argument for L == 0.
void check_occupancy_parameters(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls);

/// Adds one draw of the statistic with `balls` balls into `out` (out.size() bins).
void add_occupancy_sample(ReassignmentLaw law, std::uint64_t balls, std::span<Count> out, Rng& rng);

OccupancyVector sample_occupancy(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls, Rng& rng);

/// Exact law of X_1.
Pmf one_site_marginal(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls);

/// Exact law of (X_1, X_2); needs at least two bins.
JointPmf two_site_joint(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls);

/// mu^q as a function of q({0}): Bernoulli(1-q0), Poisson(1-q0) or
/// Geometric(1/(2-q0)).
Pmf limit_law(ReassignmentLaw law, double q0, double tail_tol = kFineTail);

/// psi(q) = limit_law(law, q({0})).
Pmf psi(ReassignmentLaw law, const Pmf& q, double tail_tol = kFineTail);

/// lambda^{N/L}: Bernoulli(N/L), Poisson(N/L) or Geometric(1/(1+N/L)).
Pmf reference_product_law(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls,
                          double tail_tol = kTailTolerance);

/// TV distance between the two-site joint and lambda^{N/L} (x) lambda^{N/L}.
double condition1_gap(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls);

/// Closed form of the Fermi-Dirac gap: 2N/(L(L-1)) (1 - N/L).
double fermi_dirac_gap_formula(std::uint64_t bins, std::uint64_t balls);

}  // namespace grbb
