#include "grbb/couplings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "grbb/parallel.hpp"
#include "grbb/statistics.hpp"

namespace grbb {

namespace {

constexpr std::uint64_t kBlockSize = 1 << 16;

// An urn holding one ball of each number in [first, first + initial) plus one
// copy of every ball drawn so far. Drawing is uniform over the current content.
class PolyaUrn {
 public:
  PolyaUrn(std::uint64_t first, std::uint64_t initial) : first_(first), initial_(initial) {}

  std::uint64_t size() const noexcept { return initial_ + drawn_.size(); }

  std::uint64_t peek(Rng& rng) const {
    std::uniform_int_distribution<std::uint64_t> pick(0, size() - 1);
    const auto i = pick(rng);
    return i < initial_ ? first_ + i : drawn_[i - initial_];
  }
  /// Double replacement: the ball goes back with one extra copy.
  void add(std::uint64_t ball) { drawn_.push_back(ball); }

  std::uint64_t draw(Rng& rng) {
    const auto ball = peek(rng);
    add(ball);
    return ball;
  }

  std::uint64_t count_drawn(std::uint64_t ball) const {
    return static_cast<std::uint64_t>(std::count(drawn_.begin(), drawn_.end(), ball));
  }

 private:
  std::uint64_t first_;
  std::uint64_t initial_;
  std::vector<std::uint64_t> drawn_;
};

void require_two_bins(std::uint64_t bins) {
  if (bins < 2) throw std::invalid_argument("couplings need L >= 2");
}

}  // namespace

std::string_view short_name(CouplingKind kind) noexcept {
  return kind == CouplingKind::MaxwellBoltzmann ? "mb" : "be";
}

MaxwellBoltzmannCoupler::MaxwellBoltzmannCoupler(std::uint64_t bins, std::uint64_t balls)
    : bins_(bins), balls_(balls) {
  require_two_bins(bins);
}

CouplingSample MaxwellBoltzmannCoupler::operator()(Rng& rng) const {
  std::binomial_distribution<std::uint64_t> first(balls_, 1.0 / static_cast<double>(bins_));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  CouplingSample s;
  s.x1 = s.y1 = first(rng);
  const double p_rest = 1.0 / static_cast<double>(bins_ - 1);
  const double p_site = 1.0 / static_cast<double>(bins_);
  for (std::uint64_t k = 0; k < balls_; ++k) {
    const double u = unif(rng);
    if (k < balls_ - s.x1 && u <= p_rest) ++s.x2;
    if (u <= p_site) ++s.y2;
  }
  return s;
}

BoseEinsteinCoupler::BoseEinsteinCoupler(std::uint64_t bins, std::uint64_t balls)
    : bins_(bins), balls_(balls), first_site_([&] {
        require_two_bins(bins);
        return one_site_marginal(ReassignmentLaw::BoseEinstein, bins, balls);
      }()) {}

CouplingSample BoseEinsteinCoupler::operator()(Rng& rng) const {
  CouplingSample s;
  s.x1 = s.y1 = first_site_(rng);
  PolyaUrn urn_b(1, bins_);
  if (s.x1 == balls_) {
    for (std::uint64_t t = 0; t < balls_; ++t) urn_b.draw(rng);
    s.y2 = urn_b.count_drawn(2);
    return s;
  }

  PolyaUrn urn_a(2, bins_ - 1);
  std::vector<std::uint64_t> drawn_from_a(bins_ + 1, 0);
  std::vector<std::uint64_t> failures(bins_ + 1, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::uint64_t coupled = balls_ - s.x1;
  for (std::uint64_t t = 0; t < coupled; ++t) {
    const auto k = urn_a.draw(rng);
    const bool success = unif(rng) < be_test_probability(bins_, t, drawn_from_a[k], failures[k]);
    urn_b.add(success ? k : 1);
    if (!success) ++failures[k];
    ++drawn_from_a[k];
  }
  for (std::uint64_t t = 0; t < s.x1; ++t) urn_b.draw(rng);
  s.x2 = drawn_from_a[2];
  s.y2 = urn_b.count_drawn(2);
  return s;
}

double be_test_probability(std::uint64_t bins, std::uint64_t draws, std::uint64_t drawn_from_a,
                           std::uint64_t failures) {
  const auto l = static_cast<double>(bins);
  const auto t = static_cast<double>(draws);
  const auto tk = static_cast<double>(drawn_from_a);
  const auto fk = static_cast<double>(failures);
  return (l + t - 1.0) * (1.0 + tk - fk) / ((l + t) * (1.0 + tk));
}

std::uint64_t polya_urn_ball_count(std::uint64_t bins, std::uint64_t draws, Rng& rng) {
  require_two_bins(bins);
  PolyaUrn urn(1, bins);
  for (std::uint64_t t = 0; t < draws; ++t) urn.draw(rng);
  return urn.count_drawn(2);
}

CouplingSample mb_coupling_sample(std::uint64_t bins, std::uint64_t balls, Rng& rng) {
  return MaxwellBoltzmannCoupler(bins, balls)(rng);
}

CouplingSample be_coupling_sample(std::uint64_t bins, std::uint64_t balls, Rng& rng) {
  return BoseEinsteinCoupler(bins, balls)(rng);
}

MismatchEstimate mismatch_probability(CouplingKind kind, std::uint64_t bins, std::uint64_t balls,
                                      std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1000) throw std::invalid_argument("mismatch estimation needs at least 1000 samples");
  require_two_bins(bins);
  const std::uint64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<std::uint64_t> mismatches(blocks, 0);
  const std::string tag = std::string("mismatch-") + std::string(short_name(kind));
  const std::uint64_t key = (bins << 32) | balls;

  auto run = [&](const auto& coupler) {
    parallel_for(blocks, [&](std::size_t b) {
      Rng rng = make_stream(seed, tag, key, b);
      const std::uint64_t n = std::min(kBlockSize, samples - b * kBlockSize);
      std::uint64_t hits = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        const auto s = coupler(rng);
        hits += s.x2 != s.y2 ? 1 : 0;
      }
      mismatches[b] = hits;
    });
  };
  if (kind == CouplingKind::MaxwellBoltzmann) {
    run(MaxwellBoltzmannCoupler(bins, balls));
  } else {
    run(BoseEinsteinCoupler(bins, balls));
  }

  MismatchEstimate out{0.0, 0.0, 0, samples};
  for (auto m : mismatches) out.mismatches += m;
  out.estimate = static_cast<double>(out.mismatches) / static_cast<double>(samples);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(samples));
  return out;
}

}  // namespace grbb
