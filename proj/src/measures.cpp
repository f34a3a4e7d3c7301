#include "grbb/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "grbb/combinatorics.hpp"

namespace grbb {

namespace {

// Accepted drift of explicit mass + tail away from one for user-supplied
// masses. Internally produced measures satisfy the tighter 1e-12 budget.
constexpr double kNormalizationSlack = 1e-10;

void require_probability(double a, const char* what) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

void drop_trailing_zeros(std::vector<double>& masses) {
  while (!masses.empty() && masses.back() == 0.0) masses.pop_back();
}

}  // namespace

Pmf::Pmf() : masses_{1.0} {}

Pmf::Pmf(std::vector<double> masses, double tail) : masses_(std::move(masses)), tail_(tail) {
  if (!(tail_ >= 0.0 && tail_ <= 1.0)) throw std::invalid_argument("tail mass must lie in [0, 1]");
  double total = tail_;
  for (double m : masses_) {
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("masses must lie in [0, 1]");
    total += m;
  }
  if (std::abs(total - 1.0) > kNormalizationSlack) {
    throw std::invalid_argument("masses plus tail must sum to one");
  }
  drop_trailing_zeros(masses_);
}

Pmf::Pmf(Unchecked, std::vector<double> masses, double tail)
    : masses_(std::move(masses)), tail_(tail) {
  drop_trailing_zeros(masses_);
}

Pmf make_unchecked_pmf(std::vector<double> masses, double tail) {
  return Pmf(Pmf::Unchecked{}, std::move(masses), std::max(tail, 0.0));
}

Pmf Pmf::point(std::size_t value) {
  std::vector<double> m(value + 1, 0.0);
  m[value] = 1.0;
  return make_unchecked_pmf(std::move(m), 0.0);
}

Pmf Pmf::bernoulli(double a) {
  require_probability(a, "Bernoulli parameter");
  return make_unchecked_pmf({1.0 - a, a}, 0.0);
}

Pmf Pmf::binomial(std::uint64_t n, double p) {
  require_probability(p, "binomial success probability");
  std::vector<double> m(n + 1);
  for (std::uint64_t k = 0; k <= n; ++k) m[k] = binomial_pmf(n, k, p);
  return make_unchecked_pmf(std::move(m), 0.0);
}

Pmf Pmf::poisson(double rate, double tail_tol) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("Poisson rate must be finite and non-negative");
  }
  if (rate == 0.0) return point(0);
  std::vector<double> m;
  double term = std::exp(-rate);
  for (std::size_t k = 0;; ++k) {
    m.push_back(term);
    const double next = term * rate / static_cast<double>(k + 1);
    const double ratio = rate / static_cast<double>(k + 2);
    if (ratio < 1.0) {
      // Remaining mass is dominated by a geometric series started at `next`.
      const double remainder = next / (1.0 - ratio);
      if (remainder < tail_tol) return make_unchecked_pmf(std::move(m), remainder);
    }
    term = next;
  }
}

Pmf Pmf::geometric(double s, double tail_tol) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("geometric parameter must lie in (0, 1]");
  if (s == 1.0) return point(0);
  std::vector<double> m;
  double survival = 1.0;  // (1-s)^k
  while (survival >= tail_tol) {
    m.push_back(s * survival);
    survival *= 1.0 - s;
  }
  return make_unchecked_pmf(std::move(m), survival);
}

double Pmf::explicit_mass() const noexcept {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

std::vector<std::size_t> Pmf::support() const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < masses_.size(); ++v) {
    if (masses_[v] > 0.0) out.push_back(v);
  }
  return out;
}

Pmf Pmf::truncated(double tol) const {
  std::vector<double> m = masses_;
  double dropped = 0.0;
  while (m.size() > 1 && dropped + m.back() < tol) {
    dropped += m.back();
    m.pop_back();
  }
  return make_unchecked_pmf(std::move(m), tail_ + dropped);
}

JointPmf::JointPmf(std::size_t rows, std::size_t cols, std::vector<double> masses, double tail)
    : rows_(rows), cols_(cols), masses_(std::move(masses)), tail_(tail) {
  if (masses_.size() != rows_ * cols_) throw std::invalid_argument("joint mass table has wrong size");
  double total = tail_;
  for (double m : masses_) {
    if (!(m >= 0.0)) throw std::invalid_argument("joint masses must be non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > kNormalizationSlack) {
    throw std::invalid_argument("joint masses plus tail must sum to one");
  }
}

double tv_distance(const Pmf& p, const Pmf& q) {
  const std::size_t n = std::max(p.size(), q.size());
  double acc = 0.0;
  for (std::size_t v = 0; v < n; ++v) acc += std::abs(p(v) - q(v));
  return std::clamp(0.5 * acc, 0.0, 1.0);
}

double joint_tv_distance(const JointPmf& p, const JointPmf& q) {
  const std::size_t rows = std::max(p.rows(), q.rows());
  const std::size_t cols = std::max(p.cols(), q.cols());
  double acc = 0.0;
  for (std::size_t h = 0; h < rows; ++h) {
    for (std::size_t k = 0; k < cols; ++k) acc += std::abs(p(h, k) - q(h, k));
  }
  return std::clamp(0.5 * acc, 0.0, 1.0);
}

Pmf empirical_measure(std::span<const std::uint32_t> counts) {
  if (counts.empty()) throw std::invalid_argument("empirical measure of an empty vector");
  const auto top = *std::max_element(counts.begin(), counts.end());
  std::vector<std::size_t> tally(static_cast<std::size_t>(top) + 1, 0);
  for (auto c : counts) ++tally[c];
  const auto size = static_cast<double>(counts.size());
  std::vector<double> m(tally.size());
  for (std::size_t v = 0; v < tally.size(); ++v) m[v] = static_cast<double>(tally[v]) / size;
  return make_unchecked_pmf(std::move(m), 0.0);
}

double mean(const Pmf& p) {
  double acc = 0.0;
  const auto m = p.masses();
  for (std::size_t v = 1; v < m.size(); ++v) acc += static_cast<double>(v) * m[v];
  return acc;
}

double variance(const Pmf& p) {
  const double mu = mean(p);
  double acc = 0.0;
  const auto m = p.masses();
  for (std::size_t v = 0; v < m.size(); ++v) {
    const double d = static_cast<double>(v) - mu;
    acc += d * d * m[v];
  }
  return acc;
}

std::complex<double> char_fn(const Pmf& p, double x) {
  std::complex<double> acc = 0.0;
  const auto m = p.masses();
  for (std::size_t v = 0; v < m.size(); ++v) {
    acc += m[v] * std::polar(1.0, x * static_cast<double>(v));
  }
  return acc;
}

MgfValue mgf(const Pmf& p, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("mgf requires a finite lambda >= 0");
  }
  double acc = 0.0;
  const auto m = p.masses();
  for (std::size_t v = 0; v < m.size(); ++v) acc += m[v] * std::exp(lambda * static_cast<double>(v));
  return {acc, p.tail() * std::exp(lambda * static_cast<double>(m.size()))};
}

Pmf thin(const Pmf& p, double prob, double tail_tol) {
  require_probability(prob, "thinning probability");
  if (prob == 1.0) return p;
  const auto m = p.masses();
  std::vector<double> out(std::max<std::size_t>(m.size(), 1), 0.0);
  for (std::size_t total = 0; total < m.size(); ++total) {
    if (m[total] == 0.0) continue;
    for (std::size_t kept = 0; kept <= total; ++kept) {
      out[kept] += m[total] * binomial_pmf(total, kept, prob);
    }
  }
  return make_unchecked_pmf(std::move(out), p.tail()).truncated(tail_tol);
}

JointPmf outer_product(const Pmf& p, const Pmf& q) {
  std::vector<double> m(p.size() * q.size());
  for (std::size_t h = 0; h < p.size(); ++h) {
    for (std::size_t k = 0; k < q.size(); ++k) m[h * q.size() + k] = p(h) * q(k);
  }
  const double tail = p.tail() + q.tail() - p.tail() * q.tail();
  return JointPmf(p.size(), q.size(), std::move(m), tail);
}

Pmf first_marginal(const JointPmf& joint) {
  std::vector<double> m(joint.rows(), 0.0);
  for (std::size_t h = 0; h < joint.rows(); ++h) {
    for (std::size_t k = 0; k < joint.cols(); ++k) m[h] += joint(h, k);
  }
  return make_unchecked_pmf(std::move(m), joint.tail());
}

PmfSampler::PmfSampler(const Pmf& p) : cdf_(p.size()) {
  std::partial_sum(p.masses().begin(), p.masses().end(), cdf_.begin());
  if (cdf_.empty() || !(cdf_.back() > 0.0)) throw std::invalid_argument("cannot sample an empty measure");
}

std::size_t PmfSampler::operator()(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, cdf_.back());
  const double u = unif(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

std::size_t sample(const Pmf& p, Rng& rng) { return PmfSampler(p)(rng); }

nlohmann::json to_json(const Pmf& p) {
  nlohmann::json support = nlohmann::json::array();
  nlohmann::json mass = nlohmann::json::array();
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (p(v) > 0.0) {
      support.push_back(v);
      mass.push_back(p(v));
    }
  }
  return {{"support", support}, {"mass", mass}, {"tail", p.tail()}};
}

Pmf pmf_from_json(const nlohmann::json& j) {
  const auto support = j.at("support").get<std::vector<std::size_t>>();
  const auto mass = j.at("mass").get<std::vector<double>>();
  const double tail = j.value("tail", 0.0);
  if (support.size() != mass.size()) throw std::invalid_argument("support and mass lengths differ");
  for (std::size_t i = 1; i < support.size(); ++i) {
    if (support[i] <= support[i - 1]) throw std::invalid_argument("support must be strictly increasing");
  }
  std::vector<double> dense(support.empty() ? 0 : support.back() + 1, 0.0);
  for (std::size_t i = 0; i < support.size(); ++i) dense[support[i]] = mass[i];
  return Pmf(std::move(dense), tail);
}

}  // namespace grbb
