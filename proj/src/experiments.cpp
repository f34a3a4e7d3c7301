#include "grbb/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "grbb/combinatorics.hpp"
#include "grbb/hypothesis.hpp"
#include "grbb/nonlinear.hpp"
#include "grbb/parallel.hpp"
#include "grbb/process.hpp"

namespace grbb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

struct MeanAndError {
  double mean;
  double std_error;
};

MeanAndError summarize(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double m = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {m, std::sqrt(var / n)};
}

double quantile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  const auto idx = static_cast<std::size_t>(std::ceil(p * static_cast<double>(xs.size()))) - 1;
  return xs[std::min(idx, xs.size() - 1)];
}

nlohmann::json point_json(const ReportPoint& p) {
  return {{"label", p.label},       {"L", p.size},         {"N_or_r", p.n_or_r}, {"estimate", p.estimate},
          {"stderr", p.std_error}, {"exact", p.exact},     {"bound", p.bound},   {"pass", p.pass},
          {"margin", p.bound - p.estimate}};
}

}  // namespace

void ExperimentReport::require(bool condition, const std::string& what) {
  if (!condition) failures.push_back(what);
}

void ExperimentReport::warn_unless(bool condition, const std::string& what) {
  if (!condition) warnings.push_back(what);
}

nlohmann::json ExperimentReport::to_json(bool include_wall_clock) const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back(point_json(p));
  nlohmann::json j = {{"experiment", name}, {"config", config},     {"points", pts},
                      {"results", results}, {"warnings", warnings}, {"failures", failures},
                      {"passed", passed()}, {"generator", std::string(kGeneratorName)}};
  if (include_wall_clock) j["wall_clock_seconds"] = wall_clock_seconds;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "L,N_or_r,estimate,stderr,bound,pass\n";
  for (const auto& p : points) {
    os << p.size << ',' << p.n_or_r << ',' << p.estimate << ',' << p.std_error << ',' << p.bound << ','
       << (p.pass ? 1 : 0) << '\n';
  }
  return os.str();
}

void validate(const ChaosConfig& cfg) {
  if (cfg.sizes.empty()) throw std::invalid_argument("chaos sweep needs at least one L");
  for (auto l : cfg.sizes) {
    if (l == 0) throw std::invalid_argument("L must be positive");
  }
  if (!(cfg.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (cfg.replicas < 100) throw std::invalid_argument("chaos sweep needs at least 100 replicas");
  if (cfg.init_law.tail() > kTailTolerance) {
    throw std::invalid_argument("initial law must have finite explicit support");
  }
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

ExperimentReport chaos_sweep(const ChaosConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "chaos";
  rep.config = {{"law", std::string(short_name(cfg.law))},
                {"L_grid", cfg.sizes},
                {"T", cfg.horizon},
                {"delta", cfg.delta},
                {"replicas", cfg.replicas},
                {"init_law", to_json(cfg.init_law)},
                {"initial_condition", "iid per site"},
                {"seed", cfg.seed},
                {"max_mean_slope", cfg.max_mean_slope}};

  const auto limit = iterate_measure(cfg.law, cfg.init_law, cfg.horizon);
  const PmfSampler init(cfg.init_law);

  auto sizes = cfg.sizes;
  std::sort(sizes.begin(), sizes.end());
  std::vector<double> xs, mean_dev, exceed, exceed_se;
  std::vector<std::uint64_t> exceed_counts;
  for (auto bins : sizes) {
    std::vector<double> dev(cfg.replicas, 0.0);
    parallel_for(cfg.replicas, [&](std::size_t r) {
      Rng rng = make_stream(cfg.seed, "chaos", bins, r);
      OccupancyVector state(bins);
      for (auto& c : state.counts()) c = static_cast<Count>(init(rng));
      double sup = tv_distance(empirical_measure(state.counts()), limit[0]);
      for (std::uint64_t t = 1; t <= cfg.horizon; ++t) {
        grbb_step_in_place(cfg.law, state, rng);
        sup = std::max(sup, tv_distance(empirical_measure(state.counts()), limit[t]));
      }
      dev[r] = sup;
    });
    const auto [m, se] = summarize(dev);
    const auto hits = static_cast<std::uint64_t>(
        std::count_if(dev.begin(), dev.end(), [&](double d) { return d > cfg.delta; }));
    const double reps = static_cast<double>(cfg.replicas);
    const double p = static_cast<double>(hits) / reps;
    const double p_se = std::sqrt(p * (1.0 - p) / reps);
    xs.push_back(static_cast<double>(bins));
    mean_dev.push_back(m);
    exceed.push_back(p);
    exceed_se.push_back(p_se);
    exceed_counts.push_back(hits);
    rep.points.push_back({"mean_sup_deviation", bins, static_cast<double>(bins), m, se, false,
                          std::numeric_limits<double>::quiet_NaN(), true});
    rep.points.push_back({"exceedance", bins, cfg.delta, p, p_se, false,
                          std::numeric_limits<double>::quiet_NaN(), true});
  }

  const double mean_slope = log_log_slope(xs, mean_dev);
  const double exceed_slope = log_log_slope(xs, exceed);
  std::vector<std::uint64_t> zero_points;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (exceed[i] == 0.0) zero_points.push_back(sizes[i]);
  }
  rep.results = {{"mean_deviation_slope", std::isnan(mean_slope) ? nlohmann::json() : nlohmann::json(mean_slope)},
                 {"exceedance_slope", std::isnan(exceed_slope) ? nlohmann::json() : nlohmann::json(exceed_slope)},
                 {"exceedance_zero_points_excluded", zero_points},
                 {"mean_deviation", mean_dev},
                 {"exceedance", exceed}};
  // Fitted constant of the C'/sqrt(L) form, for the largest-L point.
  rep.results["fitted_constant_sqrtL"] = mean_dev.back() * std::sqrt(xs.back());

  for (std::size_t i = 1; i < xs.size(); ++i) {
    const bool ok = mean_dev[i] <= mean_dev[i - 1];
    rep.points[2 * i].pass = ok;
    rep.require(ok, "mean deviation increased from L=" + std::to_string(sizes[i - 1]) +
                        " to L=" + std::to_string(sizes[i]));
  }
  const double reps = static_cast<double>(cfg.replicas);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double pooled = static_cast<double>(exceed_counts[i] + exceed_counts[j]) / (2.0 * reps);
      const double se = std::sqrt(pooled * (1.0 - pooled) * 2.0 / reps);
      const bool ok = exceed[j] <= exceed[i] + 3.0 * se;
      if (!ok) rep.points[2 * j + 1].pass = false;
      rep.require(ok, "exceedance at L=" + std::to_string(sizes[j]) + " exceeds L=" +
                          std::to_string(sizes[i]) + " by more than 3 pooled stderr");
    }
  }
  if (std::isnan(mean_slope)) {
    rep.warnings.push_back("mean deviation slope undefined (fewer than two positive points)");
  } else {
    rep.require(mean_slope <= cfg.max_mean_slope,
                "mean deviation slope " + fmt(mean_slope) + " above " + fmt(cfg.max_mean_slope));
  }
  if (!zero_points.empty()) {
    rep.warnings.push_back(std::to_string(zero_points.size()) +
                           " zero-exceedance point(s) excluded from the exceedance fit");
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

std::uint64_t exclusion_hitting_time(const OccupancyVector& init, Rng& rng) {
  constexpr std::uint64_t kMaxSteps = 100000000;
  OccupancyVector state = init;
  const auto blocked = [](const OccupancyVector& s) {
    const auto c = s.counts();
    return std::any_of(c.begin(), c.end(), [](Count x) { return x > 1; });
  };
  std::uint64_t t = 0;
  while (blocked(state)) {
    if (++t > kMaxSteps) throw std::runtime_error("exclusion hitting time exceeded the step limit");
    grbb_step_in_place(ReassignmentLaw::FermiDirac, state, rng);
  }
  return t;
}

double mixing_time_bound(std::uint64_t bins, std::uint64_t balls) {
  if (balls + 1 >= bins) return std::numeric_limits<double>::infinity();
  const auto l = static_cast<double>(bins);
  return -5.0 * l * std::log(1.0 - static_cast<double>(balls + 1) / l);
}

ExperimentReport mixing_experiment(std::uint64_t bins, std::uint64_t balls, std::uint64_t replicas,
                                   std::uint64_t seed) {
  if (balls < 2 || balls > bins) throw std::invalid_argument("mixing experiment needs 2 <= N <= L");
  if (replicas == 0) throw std::invalid_argument("mixing experiment needs at least one replica");
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "mixing";
  rep.config = {{"L", bins}, {"N", balls}, {"replicas", replicas}, {"seed", seed}, {"start", "all balls in bin 1"}};

  OccupancyVector init(bins);
  init[0] = static_cast<Count>(balls);
  std::vector<double> tau(replicas, 0.0);
  parallel_for(replicas, [&](std::size_t r) {
    Rng rng = make_stream(seed, "mixing", bins, r);
    tau[r] = static_cast<double>(exclusion_hitting_time(init, rng));
  });
  const auto [m, se] = summarize(tau);
  const double bound = mixing_time_bound(bins, balls);
  const double derived = 4.0 * (m + 1.0) + 1.0;
  const bool tiny = binomial(balls + bins - 1, balls) <= static_cast<double>(kMaxExactStates);

  rep.results = {{"tau_mean", m},
                 {"tau_stderr", se},
                 {"tau_q50", quantile(tau, 0.5)},
                 {"tau_q90", quantile(tau, 0.9)},
                 {"tau_q99", quantile(tau, 0.99)},
                 {"derived_tmix_bound", derived},
                 {"proposition_bound", std::isfinite(bound) ? nlohmann::json(bound) : nlohmann::json("inf")}};
  rep.points.push_back({"simulated_4(E[tau]+1)+1", bins, static_cast<double>(balls), derived, 4.0 * se, false,
                        bound, derived <= bound});
  const std::string what = "4(E[tau]+1)+1 = " + fmt(derived) + " exceeds -5L log(1-(N+1)/L) = " + fmt(bound) +
                           " at L=" + std::to_string(bins) + ", N=" + std::to_string(balls);
  // The bound is only claimed for large L; below the exact-analysis guard a
  // violation is reported, not failed.
  if (tiny) {
    rep.warn_unless(derived <= bound, what);
    const auto matrix = exact_transition_matrix(ReassignmentLaw::FermiDirac, bins, balls);
    const auto exact = exact_mixing_time(matrix, matrix.index_of(init));
    rep.results["exact_tmix"] = exact;
    const bool ok = static_cast<double>(exact) <= bound;
    rep.points.push_back({"exact_tmix", bins, static_cast<double>(balls), static_cast<double>(exact), 0.0, true,
                          bound, ok});
    rep.warn_unless(ok, "exact t_mix = " + std::to_string(exact) + " exceeds the bound " + fmt(bound) +
                            " at L=" + std::to_string(bins) + ", N=" + std::to_string(balls));
  } else {
    rep.require(derived <= bound, what);
  }
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

std::vector<std::uint64_t> tv_suite_balls(ReassignmentLaw law, std::uint64_t bins) {
  std::vector<std::uint64_t> out;
  if (law == ReassignmentLaw::FermiDirac) {
    for (std::uint64_t n = 0; n <= bins; ++n) out.push_back(n);
    return out;
  }
  out = {0, 1, bins / 4, bins / 2, bins};
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExperimentReport tv_bound_suite(ReassignmentLaw law, const std::vector<std::uint64_t>& sizes) {
  if (sizes.empty()) throw std::invalid_argument("TV suite needs at least one L");
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "tv-check";
  rep.config = {{"law", std::string(short_name(law))}, {"L_grid", sizes}};
  double worst_scaled = 0.0;

  for (auto bins : sizes) {
    if (bins < 2) throw std::invalid_argument("TV suite needs L >= 2");
    const auto l = static_cast<double>(bins);
    for (auto balls : tv_suite_balls(law, bins)) {
      const auto n = static_cast<double>(balls);
      const double gap = condition1_gap(law, bins, balls);
      worst_scaled = std::max(worst_scaled, gap * l);
      if (law == ReassignmentLaw::FermiDirac) {
        const double formula = fermi_dirac_gap_formula(bins, balls);
        const bool ok = std::abs(gap - formula) <= 1e-12;
        rep.points.push_back({"fd_gap_vs_formula", bins, n, gap, 0.0, true, formula, ok});
        rep.require(ok, "FD gap " + fmt(gap) + " differs from 2N/(L(L-1))(1-N/L) = " + fmt(formula) +
                            " at L=" + std::to_string(bins) + ", N=" + std::to_string(balls));
        continue;
      }
      const double factor = law == ReassignmentLaw::MaxwellBoltzmann ? 4.0 : 14.0;
      const double bound = factor * n / (l * l);
      const bool ok = gap <= bound;
      rep.points.push_back({"two_site_gap", bins, n, gap, 0.0, true, bound, ok});
      rep.require(ok, "two-site gap " + fmt(gap) + " above " + fmt(bound) + " at L=" + std::to_string(bins) +
                          ", N=" + std::to_string(balls));
      if (law == ReassignmentLaw::BoseEinstein) {
        const double one_site = tv_distance(one_site_marginal(law, bins, balls),
                                            reference_product_law(law, bins, balls));
        const bool ok1 = one_site <= 6.0 / l;
        rep.points.push_back({"one_site_gap", bins, n, one_site, 0.0, true, 6.0 / l, ok1});
        rep.require(ok1, "one-site gap " + fmt(one_site) + " above 6/L at L=" + std::to_string(bins) +
                             ", N=" + std::to_string(balls));
      }
    }
  }
  rep.results = {{"max_L_times_gap", worst_scaled}, {"checked_points", rep.points.size()}};
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

ExperimentReport coupling_test(CouplingKind kind, std::uint64_t bins, std::uint64_t balls, std::uint64_t samples,
                               std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("coupling test needs at least 1000 samples");
  const auto start = Clock::now();
  const auto law = kind == CouplingKind::MaxwellBoltzmann ? ReassignmentLaw::MaxwellBoltzmann
                                                           : ReassignmentLaw::BoseEinstein;
  ExperimentReport rep;
  rep.name = "coupling-test";
  rep.config = {{"coupling", std::string(short_name(kind))}, {"L", bins}, {"N", balls},
                {"samples", samples}, {"seed", seed}};

  const std::size_t side = balls + 1;
  constexpr std::uint64_t kBlock = 1 << 16;
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  struct Tally {
    std::vector<std::uint64_t> x, y;
    std::uint64_t mismatches = 0;
  };
  std::vector<Tally> tallies(blocks);
  const std::string tag = std::string("coupling-") + std::string(short_name(kind));
  const MaxwellBoltzmannCoupler mb(bins, balls);
  const std::optional<BoseEinsteinCoupler> be =
      kind == CouplingKind::BoseEinstein ? std::optional(BoseEinsteinCoupler(bins, balls)) : std::nullopt;
  parallel_for(blocks, [&](std::size_t b) {
    Rng rng = make_stream(seed, tag, (bins << 32) | balls, b);
    Tally& t = tallies[b];
    t.x.assign(side * side, 0);
    t.y.assign(side * side, 0);
    const std::uint64_t n = std::min(kBlock, samples - b * kBlock);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto s = be ? (*be)(rng) : mb(rng);
      if (s.x1 != s.y1) throw std::logic_error("coupling broke Y_1 = X_1");
      ++t.x[s.x1 * side + s.x2];
      ++t.y[s.y1 * side + s.y2];
      t.mismatches += s.x2 != s.y2 ? 1 : 0;
    }
  });
  std::vector<std::uint64_t> x(side * side, 0), y(side * side, 0);
  std::uint64_t mismatches = 0;
  for (const auto& t : tallies) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += t.x[i];
      y[i] += t.y[i];
    }
    mismatches += t.mismatches;
  }

  const JointPmf joint = two_site_joint(law, bins, balls);
  const Pmf one = one_site_marginal(law, bins, balls);
  const JointPmf product = outer_product(one, one);
  std::vector<double> px(side * side), py(side * side);
  for (std::size_t h = 0; h < side; ++h) {
    for (std::size_t k = 0; k < side; ++k) {
      px[h * side + k] = joint(h, k);
      py[h * side + k] = product(h, k);
    }
  }
  const auto cx = chi_square_test(x, px);
  const auto cy = chi_square_test(y, py);
  const double est = static_cast<double>(mismatches) / static_cast<double>(samples);
  const double se = std::sqrt(est * (1.0 - est) / static_cast<double>(samples));
  const double l = static_cast<double>(bins);
  const double bound = 2.0 * static_cast<double>(balls) / (l * l);

  rep.points.push_back({"chi2_p_joint", bins, static_cast<double>(balls), cx.p_value, 0.0, false, 0.001,
                        cx.p_value > 0.001});
  rep.points.push_back({"chi2_p_product", bins, static_cast<double>(balls), cy.p_value, 0.0, false, 0.001,
                        cy.p_value > 0.001});
  rep.points.push_back({"mismatch", bins, static_cast<double>(balls), est, se, false, bound,
                        est <= bound + 3.0 * se});
  rep.results = {{"chi2_joint", {{"statistic", cx.statistic}, {"dof", cx.dof}, {"p_value", cx.p_value}}},
                 {"chi2_product", {{"statistic", cy.statistic}, {"dof", cy.dof}, {"p_value", cy.p_value}}},
                 {"mismatch", {{"estimate", est}, {"stderr", se}, {"bound_2N_over_L2", bound}}}};
  rep.require(cx.p_value > 0.001, "(X_1, X_2) chi-square p = " + fmt(cx.p_value));
  rep.require(cy.p_value > 0.001, "(Y_1, Y_2) chi-square p = " + fmt(cy.p_value));
  rep.require(est <= bound + 3.0 * se, "mismatch " + fmt(est) + " above 2N/L^2 + 3 stderr");
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

ExperimentReport equilibrium_experiment(ReassignmentLaw law, double r, std::uint64_t horizon, std::uint64_t seed,
                                        double tv_target) {
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("target mean r must lie in [0, 1)");
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "equilibrium";
  rep.config = {{"law", std::string(short_name(law))}, {"r", r}, {"T", horizon}, {"seed", seed},
                {"tv_target", tv_target}};

  const FixedPoint fp = fixed_point(law, r);
  std::vector<Pmf> measures;
  measures.reserve(horizon + 1);
  measures.push_back(Pmf::bernoulli(r));
  for (std::uint64_t t = 0; t < horizon; ++t) measures.push_back(evolve_measure(law, measures.back()));

  nlohmann::json trace = nlohmann::json::array();
  for (std::uint64_t t = 0; t <= horizon; t = t == 0 ? 1 : 2 * t) {
    trace.push_back({{"t", t}, {"tv", tv_distance(measures[t], fp.pi_bar)}});
  }
  const double final_tv = tv_distance(measures.back(), fp.pi_bar);
  trace.push_back({{"t", horizon}, {"tv", final_tv}});

  // Occupation histogram of one nonlinear path over the second half of the run.
  Rng rng = make_stream(seed, "equilibrium", horizon, 0);
  std::uint64_t eta = sample(measures[0], rng);
  std::vector<std::uint64_t> visits;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    eta = eta - (eta > 0 ? 1 : 0) + sample(psi(law, measures[t]), rng);
    if (2 * (t + 1) > horizon) {
      if (eta >= visits.size()) visits.resize(eta + 1, 0);
      ++visits[eta];
    }
  }
  double path_tv = 0.0;
  if (!visits.empty()) {
    const double total = static_cast<double>(std::accumulate(visits.begin(), visits.end(), std::uint64_t{0}));
    std::vector<double> freq(visits.size());
    for (std::size_t v = 0; v < visits.size(); ++v) freq[v] = static_cast<double>(visits[v]) / total;
    path_tv = tv_distance(make_unchecked_pmf(std::move(freq), 0.0), fp.pi_bar);
  }

  rep.results = {{"a_star", fp.a_star},          {"pi_bar", to_json(fp.pi_bar)},
                 {"fixed_point_residual_tv", fp.residual_tv}, {"tv_trace", trace},
                 {"final_tv", final_tv},         {"path_occupation_tv", path_tv}};
  rep.points.push_back({"final_tv", 0, r, final_tv, 0.0, true, tv_target, final_tv < tv_target});
  rep.points.push_back({"fixed_point_residual", 0, r, fp.residual_tv, 0.0, true, 1e-8, fp.residual_tv <= 1e-8});
  rep.require(final_tv < tv_target, "TV(Q(T), pi_bar) = " + fmt(final_tv) + " not below " + fmt(tv_target));
  rep.require(fp.residual_tv <= 1e-8, "fixed-point residual " + fmt(fp.residual_tv) + " above 1e-8");
  rep.warn_unless(path_tv < 0.1, "single-path occupation histogram is " + fmt(path_tv) + " away from pi_bar");
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

ExperimentReport stationary_report(const Pmf& arrivals, double tol) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "stationary";
  rep.config = {{"arrivals", to_json(arrivals)}, {"tol", tol}};
  const QueueSolution sol = solve_queue(arrivals, tol);
  const double closed_mean = stationary_mean(arrivals);
  rep.results = {{"pi", to_json(sol.pi)},
                 {"iterations", sol.iterations},
                 {"residual_tv", sol.residual_tv},
                 {"mean", mean(sol.pi)},
                 {"closed_form_mean", closed_mean},
                 {"mean_error", sol.mean_error},
                 {"char_fn_error", sol.char_fn_error}};
  rep.points.push_back({"mean_error", 0, 0.0, sol.mean_error, 0.0, true, 1e-8, sol.mean_error <= 1e-8});
  rep.points.push_back({"char_fn_error", 0, 0.0, sol.char_fn_error, 0.0, true, 1e-8, sol.char_fn_error <= 1e-8});
  rep.points.push_back({"residual_tv", 0, 0.0, sol.residual_tv, 0.0, true, tol, sol.residual_tv <= tol});
  rep.require(sol.residual_tv <= tol, "stationary residual " + fmt(sol.residual_tv) + " above tolerance");
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

ExperimentReport fixed_point_report(ReassignmentLaw law, double r, double tol) {
  const auto start = Clock::now();
  ExperimentReport rep;
  rep.name = "fixed-point";
  rep.config = {{"law", std::string(short_name(law))}, {"r", r}, {"tol", tol}};
  const FixedPoint fp = fixed_point(law, r, tol);
  rep.results = to_json(fp);
  rep.points.push_back({"a_star", 0, r, fp.a_star, 0.0, true, std::numeric_limits<double>::quiet_NaN(), true});
  rep.points.push_back({"residual_tv", 0, r, fp.residual_tv, 0.0, true, 1e-8, fp.residual_tv <= 1e-8});
  rep.require(fp.residual_tv <= 1e-8, "TV(F(pi_bar), pi_bar) = " + fmt(fp.residual_tv) + " above 1e-8");
  rep.wall_clock_seconds = seconds_since(start);
  return rep;
}

}  // namespace grbb
