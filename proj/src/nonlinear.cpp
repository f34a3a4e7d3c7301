#include "grbb/nonlinear.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace grbb {

namespace {

constexpr double kQueueTrim = 1e-20;
constexpr double kValidationTol = 1e-8;
constexpr std::size_t kMaxQueueIterations = 5000000;
constexpr std::array<double, 4> kCharFnProbes = {0.1, 0.5, 1.0, 2.0};

// eta - 1(eta > 0): moves the mass at 1 onto 0 and shifts everything above down.
std::vector<double> served(std::span<const double> q) {
  if (q.empty()) return {};
  std::vector<double> s(std::max<std::size_t>(q.size() - 1, 1), 0.0);
  s[0] = q[0] + (q.size() > 1 ? q[1] : 0.0);
  for (std::size_t v = 2; v < q.size(); ++v) s[v - 1] = q[v];
  return s;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

void trim_tail(std::vector<double>& m, double tol) {
  double dropped = 0.0;
  while (m.size() > 1 && dropped + m.back() < tol) {
    dropped += m.back();
    m.pop_back();
  }
}

double tv_dense(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::max(a.size(), b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    acc += std::abs(x - y);
  }
  return 0.5 * acc;
}

// The queue is driven by the explicit masses; the (tiny) tail is folded back
// by normalization here and only here.
std::vector<double> queue_arrivals(const Pmf& arrivals) {
  if (arrivals.tail() > kTailTolerance) {
    throw std::invalid_argument("arrival law tail exceeds 1e-12; construct it with a finer truncation");
  }
  const double total = arrivals.explicit_mass();
  std::vector<double> m(arrivals.masses().begin(), arrivals.masses().end());
  for (double& x : m) x /= total;
  return m;
}

struct ArrivalMoments {
  double mean;
  double variance;
};

ArrivalMoments stable_moments(const Pmf& arrivals) {
  const Pmf normalized = make_unchecked_pmf(queue_arrivals(arrivals), 0.0);
  const ArrivalMoments mo{mean(normalized), variance(normalized)};
  if (!(mo.mean < 1.0)) throw std::domain_error("unstable queue: mean arrival must be below 1");
  return mo;
}

}  // namespace

Pmf evolve_measure(ReassignmentLaw law, const Pmf& q, double tail_tol) {
  const Pmf arrivals = psi(law, q, tail_tol);
  auto out = convolve(served(q.masses()), arrivals.masses());
  const double tail = q.tail() + arrivals.tail() - q.tail() * arrivals.tail();
  return make_unchecked_pmf(std::move(out), tail).truncated(tail_tol);
}

std::vector<Pmf> iterate_measure(ReassignmentLaw law, const Pmf& q0, std::size_t steps, double tail_tol) {
  std::vector<Pmf> out;
  out.reserve(steps + 1);
  out.push_back(q0);
  for (std::size_t t = 0; t < steps; ++t) out.push_back(evolve_measure(law, out.back(), tail_tol));
  return out;
}

std::vector<std::vector<std::uint64_t>> simulate_nonlinear_paths(ReassignmentLaw law, const Pmf& q0,
                                                                 std::size_t steps, std::size_t paths,
                                                                 Rng& rng) {
  const auto measures = iterate_measure(law, q0, steps);
  std::vector<PmfSampler> arrivals;
  arrivals.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) arrivals.emplace_back(psi(law, measures[t]));
  const PmfSampler initial(q0);

  std::vector<std::vector<std::uint64_t>> out(paths);
  for (auto& path : out) {
    path.reserve(steps + 1);
    std::uint64_t eta = initial(rng);
    path.push_back(eta);
    for (std::size_t t = 0; t < steps; ++t) {
      eta = eta - (eta > 0 ? 1 : 0) + arrivals[t](rng);
      path.push_back(eta);
    }
  }
  return out;
}

std::vector<std::uint64_t> simulate_nonlinear_path(ReassignmentLaw law, const Pmf& q0, std::size_t steps,
                                                   Rng& rng) {
  return std::move(simulate_nonlinear_paths(law, q0, steps, 1, rng).front());
}

std::uint64_t queue_step(const Pmf& arrivals, std::uint64_t zeta, Rng& rng) {
  return zeta - (zeta > 0 ? 1 : 0) + sample(arrivals, rng);
}

QueueSolution solve_queue(const Pmf& arrivals, double tol) {
  stable_moments(arrivals);
  const auto mu = queue_arrivals(arrivals);

  std::vector<double> pi{1.0};
  double previous_change = 1.0;
  std::array<double, 16> ratios{};
  std::size_t iterations = 0;
  for (;;) {
    if (++iterations > kMaxQueueIterations) throw std::runtime_error("queue iteration did not converge");
    auto next = convolve(served(pi), mu);
    trim_tail(next, kQueueTrim);
    const double change = tv_dense(next, pi);
    pi = std::move(next);
    ratios[iterations % ratios.size()] = previous_change > 0.0 ? change / previous_change : 0.0;
    previous_change = change;
    if (change == 0.0) break;
    if (iterations < ratios.size() || change >= tol / 10.0) continue;
    // Geometric tail estimate of the remaining distance to the fixed point.
    const double rate = *std::max_element(ratios.begin(), ratios.end());
    if (rate < 1.0 && change * rate / (1.0 - rate) < tol / 10.0) break;
  }

  double explicit_total = 0.0;
  for (double x : pi) explicit_total += x;
  QueueSolution sol{make_unchecked_pmf(pi, std::max(0.0, 1.0 - explicit_total)), iterations, 0.0, 0.0, 0.0};
  auto after = convolve(served(pi), mu);
  sol.residual_tv = tv_dense(after, pi);
  sol.mean_error = std::abs(mean(sol.pi) - stationary_mean(arrivals));
  for (double x : kCharFnProbes) {
    sol.char_fn_error = std::max(sol.char_fn_error, std::abs(char_fn(sol.pi, x) - stationary_char_fn(arrivals, x)));
  }
  if (sol.mean_error > kValidationTol || sol.char_fn_error > kValidationTol) {
    throw std::runtime_error("queue solver disagrees with the closed form (mean error " +
                             std::to_string(sol.mean_error) + ", char fn error " +
                             std::to_string(sol.char_fn_error) + ")");
  }
  return sol;
}

Pmf queue_stationary(const Pmf& arrivals, double tol) { return solve_queue(arrivals, tol).pi; }

std::complex<double> stationary_char_fn(const Pmf& arrivals, double x) {
  const auto mo = stable_moments(arrivals);
  const double reduced = std::remainder(x, 2.0 * std::numbers::pi);
  if (std::abs(reduced) < 1e-9) return 1.0;
  const Pmf mu = make_unchecked_pmf(queue_arrivals(arrivals), 0.0);
  const std::complex<double> mu_hat = char_fn(mu, x);
  const std::complex<double> e = std::polar(1.0, x);
  return (1.0 - mo.mean) * mu_hat * (e - 1.0) / (e - mu_hat);
}

double stationary_mean(const Pmf& arrivals) {
  const auto mo = stable_moments(arrivals);
  return (mo.variance + mo.mean * (1.0 - mo.mean)) / (2.0 * (1.0 - mo.mean));
}

DriftConstants drift_constants(const Pmf& arrivals, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  stable_moments(arrivals);
  const auto g = mgf(arrivals, lambda);
  if (g.tail_contribution > 1e-9 * g.value) {
    throw std::domain_error("mgf not resolved by the truncated support at this lambda");
  }
  const double decay = std::exp(-lambda);
  const double gamma = 1.0 - decay * g.value;
  return {gamma, g.value * (1.0 - decay), gamma > 0.0 && gamma < 1.0};
}

double fixed_point_mean(ReassignmentLaw law, double a) {
  return stationary_mean(limit_law(law, 1.0 - a, kFineTail));
}

FixedPoint fixed_point(ReassignmentLaw law, double r, double tol) {
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("target mean r must lie in [0, 1)");

  // The bisection relies on monotonicity of the stationary mean in a.
  constexpr double kUpper = 1.0 - 1e-9;
  constexpr int kGrid = 64;
  double last = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double m = fixed_point_mean(law, kUpper * i / kGrid);
    if (!(m > last)) throw std::runtime_error("stationary mean is not increasing in a");
    last = m;
  }
  if (r > last) throw std::invalid_argument("target mean r beyond the reachable range");

  double lo = 0.0;
  double hi = kUpper;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fixed_point_mean(law, mid) < r ? lo : hi) = mid;
  }
  const double a_star = r == 0.0 ? 0.0 : 0.5 * (lo + hi);
  if (std::abs(fixed_point_mean(law, a_star) - r) > tol) {
    throw std::runtime_error("fixed-point bisection did not reach the target mean");
  }

  FixedPoint fp{law, r, a_star, limit_law(law, 1.0 - a_star, kFineTail), Pmf{}, 0.0};
  fp.pi_bar = queue_stationary(fp.arrivals, tol / 10.0);
  fp.residual_tv = tv_distance(evolve_measure(law, fp.pi_bar, kFineTail), fp.pi_bar);
  return fp;
}

nlohmann::json to_json(const FixedPoint& fp) {
  return {{"law", std::string(short_name(fp.law))},
          {"r", fp.r},
          {"a_star", fp.a_star},
          {"pi_bar", to_json(fp.pi_bar)},
          {"residual_tv", fp.residual_tv}};
}

}  // namespace grbb
