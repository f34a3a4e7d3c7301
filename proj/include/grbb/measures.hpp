#pragma once

// Probability mass functions on the non-negative integers.
//
// A Pmf stores dense masses for the values 0..size()-1 and a tail mass that
// accounts for everything beyond the explicit range (mass dropped by
// truncation). Operations never renormalize: whatever is discarded is added to
// the tail so that explicit mass + tail stays equal to one.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "grbb/rng.hpp"

namespace grbb {

/// Default budget for mass discarded by a single truncation.
inline constexpr double kTailTolerance = 1e-12;
/// Finer truncation for laws whose moments must be exact to ~1e-14.
inline constexpr double kFineTail = 1e-16;

class Pmf {
 public:
  /// Point mass at zero.
  Pmf();

  /// Validated construction from dense masses indexed by value.
  /// Throws std::invalid_argument on negative masses or when the masses plus
  /// tail are not normalized.
  explicit Pmf(std::vector<double> masses, double tail = 0.0);

  static Pmf point(std::size_t value);
  static Pmf bernoulli(double a);
  static Pmf binomial(std::uint64_t n, double p);
  static Pmf poisson(double rate, double tail_tol = kTailTolerance);
  /// Geometric on {0,1,...} with success parameter s: P(k) = s (1-s)^k.
  static Pmf geometric(double s, double tail_tol = kTailTolerance);

  /// Mass at `value`; zero outside the explicit range.
  double operator()(std::size_t value) const noexcept {
    return value < masses_.size() ? masses_[value] : 0.0;
  }
  /// One past the largest explicitly stored value.
  std::size_t size() const noexcept { return masses_.size(); }
  std::span<const double> masses() const noexcept { return masses_; }
  double tail() const noexcept { return tail_; }
  /// Sum of the explicit masses.
  double explicit_mass() const noexcept;
  /// Values carrying positive mass, increasing.
  std::vector<std::size_t> support() const;

  /// Drop trailing values whose combined mass is below `tol`, moving it to the tail.
  Pmf truncated(double tol = kTailTolerance) const;

  friend bool operator==(const Pmf&, const Pmf&) = default;

 private:
  struct Unchecked {};
  Pmf(Unchecked, std::vector<double> masses, double tail);
  friend Pmf make_unchecked_pmf(std::vector<double>, double);

  std::vector<double> masses_;
  double tail_ = 0.0;
};

/// Internal construction path for operations whose output is normalized by
/// construction. Trailing zeros are removed.
Pmf make_unchecked_pmf(std::vector<double> masses, double tail);

/// Probability mass function on pairs of non-negative integers, stored densely
/// as rows x cols (first coordinate indexes the row).
class JointPmf {
 public:
  JointPmf(std::size_t rows, std::size_t cols, std::vector<double> masses, double tail = 0.0);

  double operator()(std::size_t h, std::size_t k) const noexcept {
    return h < rows_ && k < cols_ ? masses_[h * cols_ + k] : 0.0;
  }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double tail() const noexcept { return tail_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> masses_;
  double tail_;
};

/// Half the l1 distance over the union of explicit supports. The true
/// distance differs by at most (p.tail() + q.tail()) / 2.
double tv_distance(const Pmf& p, const Pmf& q);
double joint_tv_distance(const JointPmf& p, const JointPmf& q);

/// rho_L: fraction of coordinates holding each value. Throws on empty input.
Pmf empirical_measure(std::span<const std::uint32_t> counts);

/// Moments over the explicit support; the bias is bounded in terms of tail().
double mean(const Pmf& p);
double variance(const Pmf& p);

std::complex<double> char_fn(const Pmf& p, double x);

struct MgfValue {
  double value;
  /// tail() * exp(lambda * size()): the smallest contribution the discarded
  /// tail could make. Large values mean the truncated sum is not trustworthy.
  double tail_contribution;
};

/// sum_k p(k) e^{lambda k}. Throws std::invalid_argument for lambda < 0.
MgfValue mgf(const Pmf& p, double lambda);

/// Law of a Binomial(X, prob) count with X ~ p.
Pmf thin(const Pmf& p, double prob, double tail_tol = kTailTolerance);

/// Product measure p (x) q.
JointPmf outer_product(const Pmf& p, const Pmf& q);

/// Law of the first coordinate.
Pmf first_marginal(const JointPmf& joint);

/// Inverse-CDF sampler over the explicit masses of a Pmf.
class PmfSampler {
 public:
  explicit PmfSampler(const Pmf& p);
  std::size_t operator()(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

std::size_t sample(const Pmf& p, Rng& rng);

/// {"support": [...], "mass": [...], "tail": t}
nlohmann::json to_json(const Pmf& p);
Pmf pmf_from_json(const nlohmann::json& j);

}  // namespace grbb
