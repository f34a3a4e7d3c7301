#include <doctest.h>

#include <cmath>
#include <random>

#include "grbb/combinatorics.hpp"
#include "grbb/measures.hpp"
#include "oracles.hpp"

using namespace grbb;

namespace {

Pmf random_pmf(std::mt19937_64& rng, std::size_t max_size = 8) {
  std::uniform_int_distribution<std::size_t> len(1, max_size);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> m(len(rng));
  double total = 0.0;
  for (double& x : m) total += (x = u(rng));
  for (double& x : m) x /= total;
  return make_unchecked_pmf(std::move(m), 0.0);
}

}  // namespace

TEST_CASE("binomial coefficients are exact below 64 and accurate above") {
  CHECK(binomial(10, 3) == 120.0);
  CHECK(binomial(60, 30) == 118264581564861424.0);
  CHECK(binomial(5, 7) == 0.0);
  CHECK(std::abs(log_binomial(1000, 500) - (std::lgamma(1001.0) - 2 * std::lgamma(501.0))) < 1e-9);
  CHECK(binomial_pmf(4, 2, 0.5) == doctest::Approx(0.375));
}

TEST_CASE("constructor validates masses") {
  CHECK_THROWS_AS(Pmf({0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(Pmf({-0.1, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(Pmf({0.5}, 0.2), std::invalid_argument);
  CHECK_NOTHROW(Pmf({0.5}, 0.5));
  CHECK(Pmf() == Pmf::point(0));
}

TEST_CASE("tv distance examples") {
  CHECK(tv_distance(Pmf::point(0), Pmf::point(1)) == 1.0);
  CHECK(tv_distance(Pmf::bernoulli(0.3), Pmf::bernoulli(0.5)) == doctest::Approx(0.2).epsilon(1e-14));
  const Pmf p({0.25, 0.5, 0.25});
  CHECK(tv_distance(p, p) == 0.0);
}

TEST_CASE("tv distance is a metric on random triples") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 500; ++i) {
    const Pmf a = random_pmf(rng), b = random_pmf(rng), c = random_pmf(rng);
    CHECK(tv_distance(a, b) == tv_distance(b, a));
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-12);
  }
}

TEST_CASE("empirical measure of counts") {
  const std::vector<std::uint32_t> counts{0, 2, 2, 1};
  const Pmf q = empirical_measure(counts);
  CHECK(q(0) == 0.25);
  CHECK(q(1) == 0.25);
  CHECK(q(2) == 0.5);
  CHECK(q.explicit_mass() == 1.0);
  CHECK(q.tail() == 0.0);
  CHECK_THROWS_AS(empirical_measure(std::vector<std::uint32_t>{}), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> v(0, 6);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::uint32_t> c(1 + i % 37);
    for (auto& x : c) x = v(rng);
    const Pmf e = empirical_measure(c);
    // Every mass is k/L for an integer k, so the sum is exactly one up to rounding of each term.
    CHECK(std::abs(e.explicit_mass() - 1.0) <= 1e-15 * static_cast<double>(e.size()));
  }
}

TEST_CASE("moments and characteristic function") {
  CHECK(mean(Pmf::bernoulli(0.3)) == doctest::Approx(0.3));
  CHECK(variance(Pmf::bernoulli(0.3)) == doctest::Approx(0.21));
  const Pmf pois = Pmf::poisson(2.5);
  CHECK(std::abs(mean(pois) - 2.5) < 1e-10);
  CHECK(std::abs(variance(pois) - 2.5) < 1e-9);
  CHECK(pois.tail() <= kTailTolerance);
  for (int k = 0; k < 10; ++k) CHECK(std::abs(pois(k) - oracle::poisson_pmf(2.5, k)) < 1e-15);

  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const Pmf p = random_pmf(rng, 20);
    for (double x : {0.0, 0.3, 1.0, 3.0, -2.0, 10.0}) CHECK(std::abs(char_fn(p, x)) <= 1.0 + 1e-12);
  }
  const auto phi = char_fn(Pmf::bernoulli(0.4), 1.0);
  CHECK(std::abs(phi - (0.6 + 0.4 * std::polar(1.0, 1.0))) < 1e-15);
}

TEST_CASE("geometric law uses the success parameter on Z_+") {
  const Pmf g = Pmf::geometric(0.5);
  for (int k = 0; k < 20; ++k) CHECK(g(k) == doctest::Approx(std::pow(0.5, k + 1)));
  CHECK(g.tail() <= kTailTolerance);
  CHECK(std::abs(g.explicit_mass() + g.tail() - 1.0) < 1e-14);
  CHECK(std::abs(mean(Pmf::geometric(0.25)) - 3.0) < 1e-9);
}

TEST_CASE("mgf and its tail contribution") {
  CHECK(mgf(Pmf::point(0), 0.7).value == 1.0);
  CHECK(mgf(Pmf::bernoulli(0.5), 0.1).value == doctest::Approx(0.5 + 0.5 * std::exp(0.1)));
  CHECK_THROWS_AS(mgf(Pmf::point(0), -1.0), std::invalid_argument);
  const auto coarse = mgf(Pmf::poisson(0.9), 2.0);
  CHECK(coarse.tail_contribution > 0.0);
  const auto fine = mgf(Pmf::poisson(0.9, 1e-60), 2.0);
  CHECK(std::abs(fine.value - std::exp(0.9 * (std::exp(2.0) - 1.0))) < 1e-9);
}

TEST_CASE("thinning") {
  const Pmf p({0.2, 0.3, 0.5});
  CHECK(tv_distance(thin(p, 1.0), p) < 1e-15);
  CHECK(thin(p, 0.0) == Pmf::point(0));

  // Direct binomial-mixture sum as the oracle for thinned Poisson.
  const double a = 1.7, keep = 0.35;
  const Pmf thinned = thin(Pmf::poisson(a), keep);
  std::vector<double> direct(40, 0.0);
  for (int n = 0; n < 80; ++n) {
    for (int k = 0; k <= n && k < 40; ++k) {
      direct[k] += oracle::poisson_pmf(a, n) * oracle::choose(n, k) * std::pow(keep, k) * std::pow(1 - keep, n - k);
    }
  }
  CHECK(tv_distance(thinned, make_unchecked_pmf(direct, 0.0)) < 1e-10);
  CHECK(tv_distance(thinned, Pmf::poisson(a * keep)) < 1e-10);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const Pmf q = random_pmf(rng, 12);
    const double x = u(rng), y = u(rng);
    CHECK(tv_distance(thin(thin(q, x), y), thin(q, x * y)) < 1e-10);
    CHECK(std::abs(mean(thin(q, x)) - x * mean(q)) < 1e-10);
  }
}

TEST_CASE("joint measures and marginals") {
  const Pmf a = Pmf::bernoulli(0.3), b({0.5, 0.25, 0.25});
  const JointPmf j = outer_product(a, b);
  CHECK(j(1, 2) == doctest::Approx(0.075));
  CHECK(tv_distance(first_marginal(j), a) < 1e-15);
  CHECK(joint_tv_distance(j, j) == 0.0);
  CHECK_THROWS_AS(JointPmf(2, 2, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("sampler frequencies") {
  const Pmf p({0.1, 0.6, 0.3});
  Rng rng(11);
  const PmfSampler s(p);
  std::vector<int> hits(3, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[s(rng)];
  for (int k = 0; k < 3; ++k) {
    const double se = std::sqrt(p(k) * (1 - p(k)) / n);
    CHECK(std::abs(hits[k] / static_cast<double>(n) - p(k)) < 4 * se);
  }
}

TEST_CASE("json round trip uses the support/mass/tail schema") {
  const Pmf p({0.5, 0.0, 0.5 - 1e-13}, 1e-13);
  const auto j = to_json(p);
  CHECK(j.at("support") == nlohmann::json({0, 2}));
  CHECK(j.at("tail").get<double>() == 1e-13);
  CHECK(pmf_from_json(j) == p);
  CHECK_THROWS(pmf_from_json(nlohmann::json{{"support", {1, 0}}, {"mass", {0.5, 0.5}}, {"tail", 0.0}}));
}
