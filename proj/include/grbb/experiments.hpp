#pragma once

// Reproduction harnesses. Each returns an ExperimentReport whose hard
// assertions decide `passed()`; soft findings are listed as warnings.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "grbb/couplings.hpp"
#include "grbb/measures.hpp"
#include "grbb/statistics.hpp"

namespace grbb {

struct ReportPoint {
  std::string label;
  std::uint64_t size = 0;  // L
  double n_or_r = 0.0;
  double estimate = 0.0;
  /// Zero together with exact == true for exactly computed values.
  double std_error = 0.0;
  bool exact = false;
  double bound = 0.0;
  bool pass = true;
};

struct ExperimentReport {
  std::string name;
  nlohmann::json config = nlohmann::json::object();
  std::vector<ReportPoint> points;
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::vector<std::string> failures;
  double wall_clock_seconds = 0.0;

  bool passed() const noexcept { return failures.empty(); }
  /// Records a hard assertion; a false condition adds `what` to failures.
  void require(bool condition, const std::string& what);
  void warn_unless(bool condition, const std::string& what);

  nlohmann::json to_json(bool include_wall_clock = true) const;
  /// Columns: L, N_or_r, estimate, stderr, bound, pass.
  std::string to_csv() const;
};

struct ChaosConfig {
  ReassignmentLaw law = ReassignmentLaw::MaxwellBoltzmann;
  std::vector<std::uint64_t> sizes;
  std::uint64_t horizon = 20;
  double delta = 0.05;
  std::uint64_t replicas = 2000;
  Pmf init_law = Pmf::bernoulli(0.5);
  std::uint64_t seed = 0;
  /// Acceptance threshold on the fitted log-log slope of the mean deviation.
  double max_mean_slope = -0.4;
};

/// Throws std::invalid_argument on an invalid configuration.
void validate(const ChaosConfig& cfg);

/// Propagation-of-chaos sweep: for each L, i.i.d. initial sites from
/// init_law, D_r = sup_t TV(Q_L(t), Q(t)) per replica; reports the mean
/// deviation, exceedance frequency of delta and their log-log slopes.
ExperimentReport chaos_sweep(const ChaosConfig& cfg);

/// Least-squares slope of log(y) against log(x) over points with y > 0.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Steps until every bin of the Fermi-Dirac chain holds at most one ball.
std::uint64_t exclusion_hitting_time(const OccupancyVector& init, Rng& rng);

/// -5 L log(1 - (N+1)/L); +inf when N + 1 >= L.
double mixing_time_bound(std::uint64_t bins, std::uint64_t balls);

/// Fermi-Dirac mixing study from the all-in-one-bin start.
ExperimentReport mixing_experiment(std::uint64_t bins, std::uint64_t balls, std::uint64_t replicas,
                                   std::uint64_t seed);

/// N values checked by the TV suite for a given L.
std::vector<std::uint64_t> tv_suite_balls(ReassignmentLaw law, std::uint64_t bins);

/// Exact Condition-1 gaps against the closed form (FD) or the 4N/L^2, 14N/L^2
/// and 6/L bounds (MB, BE).
ExperimentReport tv_bound_suite(ReassignmentLaw law, const std::vector<std::uint64_t>& sizes);

/// Marginal chi-square tests and mismatch bound for one coupling.
ExperimentReport coupling_test(CouplingKind kind, std::uint64_t bins, std::uint64_t balls,
                               std::uint64_t samples, std::uint64_t seed);

/// Fixed point for mean r, then the measure recursion from Bernoulli(r).
ExperimentReport equilibrium_experiment(ReassignmentLaw law, double r, std::uint64_t horizon,
                                        std::uint64_t seed, double tv_target = 1e-6);

/// Stationary law of the G_mu/D/1 queue with both closed-form validators.
ExperimentReport stationary_report(const Pmf& arrivals, double tol = 1e-10);

/// Fixed-point report.
ExperimentReport fixed_point_report(ReassignmentLaw law, double r, double tol = 1e-10);

}  // namespace grbb
