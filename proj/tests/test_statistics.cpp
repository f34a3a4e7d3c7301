#include <doctest.h>

#include <cmath>
#include <random>

#include "grbb/hypothesis.hpp"
#include "grbb/measures.hpp"
#include "grbb/statistics.hpp"
#include "oracles.hpp"

using namespace grbb;

namespace {

constexpr ReassignmentLaw kLaws[] = {ReassignmentLaw::FermiDirac, ReassignmentLaw::MaxwellBoltzmann,
                                     ReassignmentLaw::BoseEinstein};

oracle::Stat to_oracle(ReassignmentLaw law) {
  switch (law) {
    case ReassignmentLaw::FermiDirac: return oracle::Stat::FD;
    case ReassignmentLaw::MaxwellBoltzmann: return oracle::Stat::MB;
    case ReassignmentLaw::BoseEinstein: return oracle::Stat::BE;
  }
  return oracle::Stat::FD;
}

}  // namespace

TEST_CASE("law names and Lipschitz constants") {
  CHECK(parse_law("fd") == ReassignmentLaw::FermiDirac);
  CHECK(parse_law("Bose-Einstein") == ReassignmentLaw::BoseEinstein);
  CHECK_THROWS_AS(parse_law("xx"), std::invalid_argument);
  CHECK(lipschitz_constant(ReassignmentLaw::FermiDirac) == 1.0);
  CHECK(lipschitz_constant(ReassignmentLaw::MaxwellBoltzmann) == 3.0);
  CHECK(lipschitz_constant(ReassignmentLaw::BoseEinstein) == 4.0);
}

TEST_CASE("sampler edge cases") {
  Rng rng(1);
  CHECK(sample_occupancy(ReassignmentLaw::FermiDirac, 3, 3, rng).vector() == std::vector<Count>{1, 1, 1});
  for (auto law : kLaws) CHECK(sample_occupancy(law, 7, 0, rng).total() == 0);
  CHECK_THROWS_WITH_AS(sample_occupancy(ReassignmentLaw::FermiDirac, 4, 9, rng),
                       doctest::Contains("statistic undefined"), std::domain_error);
  CHECK(sample_occupancy(ReassignmentLaw::BoseEinstein, 1, 5, rng).vector() == std::vector<Count>{5});
}

TEST_CASE("samplers conserve the ball count on every draw") {
  Rng rng(2);
  for (auto law : kLaws) {
    for (std::uint64_t bins : {1, 2, 5, 40}) {
      for (std::uint64_t balls : {0, 1, 3, 17, 40}) {
        if (law == ReassignmentLaw::FermiDirac && balls > bins) continue;
        for (int i = 0; i < 200; ++i) {
          const auto v = sample_occupancy(law, bins, balls, rng);
          REQUIRE(v.total() == balls);
          if (law == ReassignmentLaw::FermiDirac) {
            for (auto c : v.counts()) REQUIRE(c <= 1);
          }
        }
      }
    }
  }
}

TEST_CASE("BE L=2 N=2 sampler is uniform on the three compositions") {
  Rng rng(3);
  std::vector<std::uint64_t> hits(3, 0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) ++hits[sample_occupancy(ReassignmentLaw::BoseEinstein, 2, 2, rng)[0]];
  for (auto h : hits) CHECK(std::abs(h / static_cast<double>(n) - 1.0 / 3.0) < 3 * std::sqrt(2.0 / 9.0 / n) + 1e-4);
}

TEST_CASE("marginal examples") {
  CHECK(tv_distance(one_site_marginal(ReassignmentLaw::FermiDirac, 4, 2), Pmf::bernoulli(0.5)) == 0.0);
  CHECK(tv_distance(one_site_marginal(ReassignmentLaw::MaxwellBoltzmann, 2, 2), Pmf({0.25, 0.5, 0.25})) < 1e-15);
  CHECK(tv_distance(one_site_marginal(ReassignmentLaw::BoseEinstein, 3, 1), Pmf({2.0 / 3, 1.0 / 3})) < 1e-15);
  CHECK(one_site_marginal(ReassignmentLaw::BoseEinstein, 1, 4) == Pmf::point(4));

  const auto fd = two_site_joint(ReassignmentLaw::FermiDirac, 2, 1);
  CHECK(fd(1, 0) == doctest::Approx(0.5));
  CHECK(fd(0, 1) == doctest::Approx(0.5));
  CHECK(two_site_joint(ReassignmentLaw::MaxwellBoltzmann, 3, 2)(1, 1) == doctest::Approx(2.0 / 9.0));
  CHECK(two_site_joint(ReassignmentLaw::FermiDirac, 4, 2)(1, 1) == doctest::Approx(1.0 / 6.0));
  CHECK_THROWS_AS(two_site_joint(ReassignmentLaw::MaxwellBoltzmann, 1, 2), std::invalid_argument);
}

TEST_CASE("brute-force enumeration reproduces both marginals for L, N <= 5") {
  for (auto law : kLaws) {
    for (int bins = 2; bins <= 5; ++bins) {
      for (int balls = 0; balls <= 5; ++balls) {
        if (law == ReassignmentLaw::FermiDirac && balls > bins) continue;
        const auto configs = oracle::configuration_law(to_oracle(law), bins, balls);
        const auto one = oracle::one_site(configs, balls);
        const auto two = oracle::two_site(configs, balls);
        const Pmf m = one_site_marginal(law, bins, balls);
        const JointPmf j = two_site_joint(law, bins, balls);
        for (int h = 0; h <= balls; ++h) {
          CHECK(std::abs(m(h) - one[h]) < 1e-12);
          for (int k = 0; k <= balls; ++k) CHECK(std::abs(j(h, k) - two[h][k]) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("two-site joint marginalizes to the one-site marginal") {
  for (auto law : kLaws) {
    for (std::uint64_t bins = 2; bins <= 30; ++bins) {
      for (std::uint64_t balls = 0; balls <= 30; ++balls) {
        if (law == ReassignmentLaw::FermiDirac && balls > bins) continue;
        const double d = tv_distance(first_marginal(two_site_joint(law, bins, balls)), one_site_marginal(law, bins, balls));
        REQUIRE(d < 1e-12);
      }
    }
  }
}

TEST_CASE("sampler matches exact marginals by chi-square") {
  struct Case {
    ReassignmentLaw law;
    std::uint64_t bins, balls;
  };
  const Case cases[] = {{ReassignmentLaw::FermiDirac, 6, 3},  {ReassignmentLaw::MaxwellBoltzmann, 5, 4},
                        {ReassignmentLaw::MaxwellBoltzmann, 12, 6}, {ReassignmentLaw::BoseEinstein, 4, 5},
                        {ReassignmentLaw::BoseEinstein, 10, 6}};
  Rng rng(4);
  for (const auto& c : cases) {
    const std::size_t side = c.balls + 1;
    std::vector<std::uint64_t> one(side, 0), two(side * side, 0);
    OccupancyVector v(c.bins);
    for (int i = 0; i < 1000000; ++i) {
      std::fill(v.counts().begin(), v.counts().end(), 0);
      add_occupancy_sample(c.law, c.balls, v.counts(), rng);
      ++one[v[0]];
      ++two[v[0] * side + v[1]];
    }
    const Pmf m = one_site_marginal(c.law, c.bins, c.balls);
    const JointPmf j = two_site_joint(c.law, c.bins, c.balls);
    std::vector<double> p1(side), p2(side * side);
    for (std::size_t h = 0; h < side; ++h) {
      p1[h] = m(h);
      for (std::size_t k = 0; k < side; ++k) p2[h * side + k] = j(h, k);
    }
    CAPTURE(short_name(c.law));
    CAPTURE(c.bins);
    CHECK(chi_square_test(one, p1).p_value > 0.001);
    CHECK(chi_square_test(two, p2).p_value > 0.001);
  }
}

TEST_CASE("limit laws, psi and reference laws") {
  CHECK(limit_law(ReassignmentLaw::FermiDirac, 0.25) == Pmf::bernoulli(0.75));
  CHECK(limit_law(ReassignmentLaw::MaxwellBoltzmann, 1.0) == Pmf::point(0));
  const Pmf g = limit_law(ReassignmentLaw::BoseEinstein, 0.0);
  for (int k = 0; k < 10; ++k) CHECK(g(k) == doctest::Approx(std::pow(2.0, -(k + 1))));

  CHECK(psi(ReassignmentLaw::FermiDirac, Pmf::point(0)) == Pmf::point(0));
  CHECK(tv_distance(psi(ReassignmentLaw::MaxwellBoltzmann, Pmf::point(1)), Pmf::poisson(1.0, kFineTail)) == 0.0);
  CHECK(psi(ReassignmentLaw::BoseEinstein, Pmf::bernoulli(0.5))(0) == doctest::Approx(2.0 / 3.0));

  CHECK(reference_product_law(ReassignmentLaw::FermiDirac, 4, 2) == Pmf::bernoulli(0.5));
  CHECK(reference_product_law(ReassignmentLaw::BoseEinstein, 2, 2)(0) == doctest::Approx(0.5));
  CHECK(reference_product_law(ReassignmentLaw::MaxwellBoltzmann, 9, 0) == Pmf::point(0));

  for (auto law : kLaws) {
    for (int i = 0; i <= 20; ++i) {
      const double q0 = i / 20.0;
      CHECK(std::abs(mean(limit_law(law, q0)) - (1.0 - q0)) < 1e-12);
    }
  }
}

TEST_CASE("thinning closure of the limit families") {
  for (double q0 : {0.0, 0.2, 0.5, 0.9}) {
    for (double p : {0.1, 0.5, 0.95}) {
      const double a = 1.0 - q0;
      CHECK(tv_distance(thin(limit_law(ReassignmentLaw::FermiDirac, q0), p), Pmf::bernoulli(a * p)) < 1e-10);
      CHECK(tv_distance(thin(limit_law(ReassignmentLaw::MaxwellBoltzmann, q0), p), Pmf::poisson(a * p)) < 1e-10);
      const double s = 1.0 / (2.0 - q0);
      CHECK(tv_distance(thin(limit_law(ReassignmentLaw::BoseEinstein, q0), p),
                        Pmf::geometric(s / (s + (1.0 - s) * p))) < 1e-10);
    }
  }
}

TEST_CASE("psi is Lipschitz with the stated constants") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto law : kLaws) {
    for (int i = 0; i < 1000; ++i) {
      const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
      const Pmf q = make_unchecked_pmf({a / (a + b + 0.5), b / (a + b + 0.5), 0.5 / (a + b + 0.5)}, 0.0);
      const Pmf r = make_unchecked_pmf({c / (c + d + 0.1), 0.1 / (c + d + 0.1), d / (c + d + 0.1)}, 0.0);
      CHECK(tv_distance(psi(law, q), psi(law, r)) <= lipschitz_constant(law) * tv_distance(q, r) + 1e-12);
    }
  }
}

TEST_CASE("condition-1 gap") {
  CHECK(condition1_gap(ReassignmentLaw::FermiDirac, 4, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  for (auto law : kLaws) CHECK(condition1_gap(law, 9, 0) < 1e-15);
  CHECK(condition1_gap(ReassignmentLaw::FermiDirac, 7, 7) < 1e-15);

  // FD gap from the enumerated joint, against the closed form.
  for (int bins = 2; bins <= 8; ++bins) {
    for (int balls = 0; balls <= bins; ++balls) {
      const auto two = oracle::two_site(oracle::configuration_law(oracle::Stat::FD, bins, balls), balls);
      const double a = static_cast<double>(balls) / bins;
      double gap = 0.0;
      for (int h = 0; h <= balls; ++h) {
        for (int k = 0; k <= balls; ++k) {
          const double ph = h == 0 ? 1 - a : h == 1 ? a : 0.0;
          const double pk = k == 0 ? 1 - a : k == 1 ? a : 0.0;
          gap += std::abs(two[h][k] - ph * pk);
        }
      }
      gap *= 0.5;
      CHECK(std::abs(gap - fermi_dirac_gap_formula(bins, balls)) < 1e-12);
      CHECK(std::abs(condition1_gap(ReassignmentLaw::FermiDirac, bins, balls) - gap) < 1e-12);
    }
  }
  for (std::uint64_t bins = 10; bins <= 200; bins += 10) {
    const std::uint64_t n = bins / 2;
    const double l = static_cast<double>(bins);
    CHECK(condition1_gap(ReassignmentLaw::MaxwellBoltzmann, bins, n) <= 4.0 * n / (l * l));
    CHECK(condition1_gap(ReassignmentLaw::BoseEinstein, bins, n) <= 14.0 * n / (l * l));
    CHECK(l * condition1_gap(ReassignmentLaw::FermiDirac, bins, n) <= 1.0);
  }
}
