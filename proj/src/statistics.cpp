#include "grbb/statistics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "grbb/combinatorics.hpp"

namespace grbb {

namespace {

// Partial Fisher-Yates: the first `picks` entries of the returned vector are a
// uniform random `picks`-subset of {0, ..., population-1}.
std::vector<std::uint64_t> partial_shuffle(std::uint64_t population, std::uint64_t picks, Rng& rng) {
  std::vector<std::uint64_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::uint64_t{0});
  for (std::uint64_t i = 0; i < picks; ++i) {
    std::uniform_int_distribution<std::uint64_t> pick(i, population - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(picks);
  return idx;
}

void add_fermi_dirac(std::uint64_t balls, std::span<Count> out, Rng& rng) {
  for (auto site : partial_shuffle(out.size(), balls, rng)) ++out[site];
}

void add_maxwell_boltzmann(std::uint64_t balls, std::span<Count> out, Rng& rng) {
  std::uint64_t remaining = balls;
  const std::size_t bins = out.size();
  for (std::size_t i = 0; i + 1 < bins && remaining > 0; ++i) {
    std::binomial_distribution<std::uint64_t> draw(remaining, 1.0 / static_cast<double>(bins - i));
    const auto x = draw(rng);
    out[i] += static_cast<Count>(x);
    remaining -= x;
  }
  out[bins - 1] += static_cast<Count>(remaining);
}

// Stars and bars: L-1 bars placed uniformly among N+L-1 slots.
void add_bose_einstein(std::uint64_t balls, std::span<Count> out, Rng& rng) {
  const std::uint64_t bins = out.size();
  if (bins == 1) {
    out[0] += static_cast<Count>(balls);
    return;
  }
  auto bars = partial_shuffle(balls + bins - 1, bins - 1, rng);
  std::sort(bars.begin(), bars.end());
  std::uint64_t prev = 0;
  for (std::uint64_t i = 0; i < bins - 1; ++i) {
    out[i] += static_cast<Count>(bars[i] - prev);
    prev = bars[i] + 1;
  }
  out[bins - 1] += static_cast<Count>(balls + bins - 1 - prev);
}

double exp_log_ratio(double log_num, double log_den) { return std::exp(log_num - log_den); }

}  // namespace

std::string_view short_name(ReassignmentLaw law) noexcept {
  switch (law) {
    case ReassignmentLaw::FermiDirac: return "fd";
    case ReassignmentLaw::MaxwellBoltzmann: return "mb";
    case ReassignmentLaw::BoseEinstein: return "be";
  }
  return "?";
}

std::string_view long_name(ReassignmentLaw law) noexcept {
  switch (law) {
    case ReassignmentLaw::FermiDirac: return "fermi-dirac";
    case ReassignmentLaw::MaxwellBoltzmann: return "maxwell-boltzmann";
    case ReassignmentLaw::BoseEinstein: return "bose-einstein";
  }
  return "?";
}

ReassignmentLaw parse_law(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto law : {ReassignmentLaw::FermiDirac, ReassignmentLaw::MaxwellBoltzmann,
                   ReassignmentLaw::BoseEinstein}) {
    if (lower == short_name(law) || lower == long_name(law)) return law;
  }
  throw std::invalid_argument("unknown law '" + std::string(name) + "' (expected fd, mb or be)");
}

double lipschitz_constant(ReassignmentLaw law) noexcept {
  switch (law) {
    case ReassignmentLaw::FermiDirac: return 1.0;
    case ReassignmentLaw::MaxwellBoltzmann: return 3.0;
    case ReassignmentLaw::BoseEinstein: return 4.0;
  }
  return 0.0;
}

void check_occupancy_parameters(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls) {
  if (bins == 0) throw std::invalid_argument("at least one bin is required");
  if (law == ReassignmentLaw::FermiDirac && balls > bins) {
    throw std::domain_error("statistic undefined: Fermi-Dirac needs N <= L");
  }
}

void add_occupancy_sample(ReassignmentLaw law, std::uint64_t balls, std::span<Count> out, Rng& rng) {
  check_occupancy_parameters(law, out.size(), balls);
  if (balls == 0) return;
  switch (law) {
    case ReassignmentLaw::FermiDirac: add_fermi_dirac(balls, out, rng); break;
    case ReassignmentLaw::MaxwellBoltzmann: add_maxwell_boltzmann(balls, out, rng); break;
    case ReassignmentLaw::BoseEinstein: add_bose_einstein(balls, out, rng); break;
  }
}

OccupancyVector sample_occupancy(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls, Rng& rng) {
  check_occupancy_parameters(law, bins, balls);
  OccupancyVector out(bins);
  add_occupancy_sample(law, balls, out.counts(), rng);
  return out;
}

Pmf one_site_marginal(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls) {
  check_occupancy_parameters(law, bins, balls);
  if (bins == 1) return Pmf::point(balls);
  switch (law) {
    case ReassignmentLaw::FermiDirac:
      return Pmf::bernoulli(static_cast<double>(balls) / static_cast<double>(bins));
    case ReassignmentLaw::MaxwellBoltzmann:
      return Pmf::binomial(balls, 1.0 / static_cast<double>(bins));
    case ReassignmentLaw::BoseEinstein: {
      const double log_total = log_binomial(bins - 1 + balls, balls);
      std::vector<double> m(balls + 1);
      for (std::uint64_t k = 0; k <= balls; ++k) {
        m[k] = exp_log_ratio(log_binomial(bins - 2 + balls - k, balls - k), log_total);
      }
      return make_unchecked_pmf(std::move(m), 0.0);
    }
  }
  throw std::logic_error("unreachable");
}

JointPmf two_site_joint(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls) {
  check_occupancy_parameters(law, bins, balls);
  if (bins < 2) throw std::invalid_argument("two-site joint needs L >= 2");
  const std::size_t side = balls + 1;
  std::vector<double> m(side * side, 0.0);
  const auto at = [&](std::uint64_t h, std::uint64_t k) -> double& { return m[h * side + k]; };

  switch (law) {
    case ReassignmentLaw::FermiDirac: {
      // Count configurations: the remaining N-h-k ones sit among L-2 sites.
      const double total = binomial(bins, balls);
      for (std::uint64_t h = 0; h <= std::min<std::uint64_t>(1, balls); ++h) {
        for (std::uint64_t k = 0; k <= std::min<std::uint64_t>(1, balls - h); ++k) {
          at(h, k) = binomial(bins - 2, balls - h - k) / total;
        }
      }
      break;
    }
    case ReassignmentLaw::MaxwellBoltzmann: {
      if (bins == 2) {
        for (std::uint64_t h = 0; h <= balls; ++h) at(h, balls - h) = binomial_pmf(balls, h, 0.5);
        break;
      }
      const double inv = 1.0 / static_cast<double>(bins);
      const double log_rest = std::log1p(-2.0 * inv);
      for (std::uint64_t h = 0; h <= balls; ++h) {
        for (std::uint64_t k = 0; h + k <= balls; ++k) {
          const auto r = static_cast<double>(balls - h - k);
          const double log_p = log_binomial(balls, h) + log_binomial(balls - h, k) +
                               static_cast<double>(h + k) * std::log(inv) + r * log_rest;
          at(h, k) = std::exp(log_p);
        }
      }
      break;
    }
    case ReassignmentLaw::BoseEinstein: {
      if (bins == 2) {
        const double w = 1.0 / static_cast<double>(balls + 1);
        for (std::uint64_t h = 0; h <= balls; ++h) at(h, balls - h) = w;
        break;
      }
      const double log_total = log_binomial(bins - 1 + balls, balls);
      for (std::uint64_t h = 0; h <= balls; ++h) {
        for (std::uint64_t k = 0; h + k <= balls; ++k) {
          const std::uint64_t rest = balls - h - k;
          at(h, k) = exp_log_ratio(log_binomial(bins - 3 + rest, rest), log_total);
        }
      }
      break;
    }
  }
  double total = 0.0;
  for (double x : m) total += x;
  return JointPmf(side, side, std::move(m), std::max(0.0, 1.0 - total));
}

Pmf limit_law(ReassignmentLaw law, double q0, double tail_tol) {
  if (!(q0 >= 0.0 && q0 <= 1.0)) throw std::invalid_argument("q({0}) must lie in [0, 1]");
  switch (law) {
    case ReassignmentLaw::FermiDirac: return Pmf::bernoulli(1.0 - q0);
    case ReassignmentLaw::MaxwellBoltzmann: return Pmf::poisson(1.0 - q0, tail_tol);
    case ReassignmentLaw::BoseEinstein: return Pmf::geometric(1.0 / (2.0 - q0), tail_tol);
  }
  throw std::logic_error("unreachable");
}

Pmf psi(ReassignmentLaw law, const Pmf& q, double tail_tol) {
  return limit_law(law, std::clamp(q(0), 0.0, 1.0), tail_tol);
}

Pmf reference_product_law(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls, double tail_tol) {
  check_occupancy_parameters(law, bins, balls);
  const double density = static_cast<double>(balls) / static_cast<double>(bins);
  switch (law) {
    case ReassignmentLaw::FermiDirac: return Pmf::bernoulli(density);
    case ReassignmentLaw::MaxwellBoltzmann: return Pmf::poisson(density, tail_tol);
    case ReassignmentLaw::BoseEinstein: return Pmf::geometric(1.0 / (1.0 + density), tail_tol);
  }
  throw std::logic_error("unreachable");
}

double condition1_gap(ReassignmentLaw law, std::uint64_t bins, std::uint64_t balls) {
  const Pmf ref = reference_product_law(law, bins, balls);
  return joint_tv_distance(two_site_joint(law, bins, balls), outer_product(ref, ref));
}

double fermi_dirac_gap_formula(std::uint64_t bins, std::uint64_t balls) {
  const auto l = static_cast<double>(bins);
  const auto n = static_cast<double>(balls);
  return 2.0 * n / (l * (l - 1.0)) * (1.0 - n / l);
}

}  // namespace grbb
