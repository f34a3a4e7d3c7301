#pragma once

// Mean-field side: the measure recursion F, the single-site nonlinear process,
// the G_mu/D/1 queue and its stationary law, and the mean-r fixed point.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "grbb/measures.hpp"
#include "grbb/rng.hpp"
#include "grbb/statistics.hpp"

namespace grbb {

/// Per-step truncation budget inside the measure recursion.
inline constexpr double kIterationTail = 1e-14;

/// F(q): law of eta - 1(eta > 0) + B with eta ~ q and B ~ psi(law, q).
Pmf evolve_measure(ReassignmentLaw law, const Pmf& q, double tail_tol = kIterationTail);

/// [q0, F(q0), ..., F^steps(q0)].
std::vector<Pmf> iterate_measure(ReassignmentLaw law, const Pmf& q0, std::size_t steps,
                                 double tail_tol = kIterationTail);

/// One path of the nonlinear process; arrivals at step t are drawn from
/// psi(law, Q(t)) where Q is the deterministic measure recursion from q0.
std::vector<std::uint64_t> simulate_nonlinear_path(ReassignmentLaw law, const Pmf& q0, std::size_t steps,
                                                   Rng& rng);

/// Same as above for many paths at once, reusing one measure recursion.
std::vector<std::vector<std::uint64_t>> simulate_nonlinear_paths(ReassignmentLaw law, const Pmf& q0,
                                                                 std::size_t steps, std::size_t paths,
                                                                 Rng& rng);

/// zeta - 1(zeta > 0) + B with B ~ arrivals.
std::uint64_t queue_step(const Pmf& arrivals, std::uint64_t zeta, Rng& rng);

struct QueueSolution {
  Pmf pi;
  std::size_t iterations;
  /// TV(pi P, pi) of the returned measure.
  double residual_tv;
  /// |mean(pi) - stationary_mean(arrivals)|.
  double mean_error;
  /// max over x in {0.1, 0.5, 1, 2} of |char_fn(pi, x) - stationary_char_fn(arrivals, x)|.
  double char_fn_error;
};

/// Stationary law of the G_mu/D/1 queue by forward iteration of the one-step
/// kernel from delta_0. The queue is driven by the explicit masses of
/// `arrivals` (its tail must be below 1e-12). Throws std::domain_error
/// ("unstable queue") when the mean arrival is >= 1, and std::runtime_error
/// when the closed-form validators disagree by more than 1e-8.
QueueSolution solve_queue(const Pmf& arrivals, double tol = 1e-10);
Pmf queue_stationary(const Pmf& arrivals, double tol = 1e-10);

/// Closed-form characteristic function of the stationary queue law.
std::complex<double> stationary_char_fn(const Pmf& arrivals, double x);

/// (sigma^2 + m(1-m)) / (2(1-m)).
double stationary_mean(const Pmf& arrivals);

struct DriftConstants {
  double gamma;
  double c;
  /// gamma in (0, 1), i.e. lambda lies in the admissible range.
  bool in_range;
};

/// gamma = 1 - e^{-lambda} mgf(lambda), C = mgf(lambda) (1 - e^{-lambda}).
/// Throws std::invalid_argument for lambda <= 0 and std::domain_error when the
/// truncated tail could contribute more than 1e-9 of the mgf.
DriftConstants drift_constants(const Pmf& arrivals, double lambda);

struct FixedPoint {
  ReassignmentLaw law;
  double r;
  double a_star;
  Pmf arrivals;
  Pmf pi_bar;
  double residual_tv;
};

/// Mean of the stationary queue law with arrivals limit_law(law, 1 - a).
double fixed_point_mean(ReassignmentLaw law, double a);

/// Unique a* with fixed_point_mean(law, a*) = r, by bisection, and the
/// stationary law pi_bar of the corresponding queue.
FixedPoint fixed_point(ReassignmentLaw law, double r, double tol = 1e-10);

/// {law, r, a_star, pi_bar, residual_tv}
nlohmann::json to_json(const FixedPoint& fp);

}  // namespace grbb
