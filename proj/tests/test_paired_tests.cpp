#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "sigtestsim/errors.hpp"
#include "sigtestsim/paired_tests.hpp"
#include "sigtestsim/rng.hpp"
#include "sigtestsim/stats.hpp"

using namespace sigtestsim;

namespace {

PairedSample diffs(std::vector<double> d) {
  return PairedSample::from_differences(std::move(d));
}

}  // namespace

TEST_CASE("t test on a hand-checked sample") {
  // d = [0.1, 0.2, 0.3]: mean 0.2, sd 0.1, t = 0.2 / (0.1/sqrt(3))
  const auto out = t_test(diffs({0.1, 0.2, 0.3}));
  CHECK(out.statistic == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-12));
  // with 2 df, p1 = 1 - (1 + t/sqrt(t^2+2)) / 2
  const double t = 2.0 * std::sqrt(3.0);
  const double p1 = 0.5 * (1.0 - t / std::sqrt(t * t + 2.0));
  CHECK(out.p1 == doctest::Approx(p1).epsilon(1e-10));
  CHECK(out.p1 == doctest::Approx(0.03709).epsilon(1e-3));
  CHECK(out.p2 == doctest::Approx(2.0 * p1).epsilon(1e-10));
}

TEST_CASE("t test with zero mean difference") {
  const auto out = t_test(diffs({0.1, -0.1}));
  CHECK(out.statistic == doctest::Approx(0.0));
  CHECK(out.p1 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.p2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("t test rejects degenerate input") {
  CHECK_THROWS_AS(t_test(diffs({0.2, 0.2, 0.2})), degenerate_sample_error);
  CHECK_THROWS_AS(t_test(diffs({0.2})), insufficient_sample_error);
}

TEST_CASE("t test p1 decreases as the mean difference grows") {
  double prev = 1.0;
  for (double shift : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    std::vector<double> d = {-0.1, 0.05, 0.2, -0.02, 0.13};
    for (double& x : d) x += shift;
    const double p1 = t_test(diffs(d)).p1;
    CHECK(p1 < prev);
    prev = p1;
  }
}

TEST_CASE("wilcoxon exact p on hand-checked samples") {
  // d = [0.1, 0.2, 0.3]: all positive, W = 6, P(W >= 6) = 1/8
  auto out = wilcoxon_test(diffs({0.1, 0.2, 0.3}));
  CHECK(out.statistic == doctest::Approx(6.0));
  CHECK(out.p1 == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(out.p2 == doctest::Approx(0.25).epsilon(1e-12));

  // zero differences are dropped: d = [0, 0.2, -0.1] keeps n0 = 2,
  // ranks 1 (for 0.1) and 2 (for 0.2), W = 2, P(W >= 2) = 2/4
  out = wilcoxon_test(diffs({0.0, 0.2, -0.1}));
  CHECK(out.statistic == doctest::Approx(2.0));
  CHECK(out.p1 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("wilcoxon rejects an all-zero sample") {
  CHECK_THROWS_AS(wilcoxon_test(diffs({0.0, 0.0, 0.0})), all_ties_error);
}

TEST_CASE("wilcoxon exact cdf matches brute-force enumeration") {
  for (std::size_t n0 : {1u, 2u, 5u, 8u, 10u}) {
    const auto cdf = wilcoxon_exact_cdf(n0);
    const std::size_t wmax = n0 * (n0 + 1) / 2;
    REQUIRE(cdf.size() == wmax + 1);
    std::vector<double> counts(wmax + 1, 0.0);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n0); ++mask) {
      std::size_t w = 0;
      for (std::size_t r = 0; r < n0; ++r) {
        if (mask & (std::size_t{1} << r)) w += r + 1;
      }
      counts[w] += 1.0;
    }
    double cum = 0.0;
    const double total = std::ldexp(1.0, static_cast<int>(n0));
    for (std::size_t w = 0; w <= wmax; ++w) {
      cum += counts[w];
      CHECK(cdf[w] == doctest::Approx(cum / total).epsilon(1e-14));
    }
  }
}

TEST_CASE("wilcoxon normal approximation is sane with ties") {
  // ties force the approximate path even for small n0
  std::vector<double> d;
  for (int i = 0; i < 30; ++i) d.push_back((i % 3 == 0) ? -0.1 : 0.1);
  const auto out = wilcoxon_test(diffs(d));
  CHECK(out.p1 > 0.0);
  CHECK(out.p1 < 0.05);  // 20 of 30 positive with equal magnitudes
  CHECK(out.p2 == doctest::Approx(std::min(1.0, 2.0 * out.p1)));
}

TEST_CASE("sign test on hand-checked samples") {
  // five positives beyond h: p1 = (1/2)^5
  auto out = sign_test(diffs({0.3, 0.2, 0.1, 0.4, 0.5}));
  CHECK(out.statistic == doctest::Approx(5.0));
  CHECK(out.p1 == doctest::Approx(1.0 / 32.0).epsilon(1e-14));
  CHECK(out.p2 == doctest::Approx(1.0 / 16.0).epsilon(1e-14));

  // |d| <= h drops the first observation: n0 = 2, S = 2, p1 = 1/4
  out = sign_test(diffs({0.005, 0.5, 0.5}), 0.01);
  CHECK(out.statistic == doctest::Approx(2.0));
  CHECK(out.p1 == doctest::Approx(0.25).epsilon(1e-14));

  // a single surviving observation
  out = sign_test(diffs({0.5}));
  CHECK(out.p1 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("sign test rejects when everything is within the threshold") {
  CHECK_THROWS_AS(sign_test(diffs({0.001, -0.002, 0.0}), 0.01),
                  all_ties_error);
}

TEST_CASE("sign test antisymmetry") {
  const std::vector<double> d = {0.3, 0.2, -0.1, 0.4, 0.5, 0.25, -0.15};
  const double p_pos = sign_test(diffs(d)).p1;
  std::vector<double> neg = d;
  for (double& x : neg) x = -x;
  const double p_neg = sign_test(diffs(neg)).p1;
  CHECK(p_pos < 0.5);
  CHECK(p_neg > 0.5);
  // P(S >= s) + P(S >= n0-s+1) = 1 for a symmetric binomial
  CHECK(p_pos + p_neg - 1.0 ==
        doctest::Approx(stats::binom_upper_tail_half(5, 7) -
                        stats::binom_upper_tail_half(6, 7))
            .epsilon(1e-12));
}

TEST_CASE("exact permutation p over all sign assignments") {
  // d = [0.1, 0.2]: sums {0.3, 0.1, -0.1, -0.3}; p1 = 1/4, p2 = 2/4
  auto p = exact_permutation_p(diffs({0.1, 0.2}));
  CHECK(p.p1 == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p.p2 == doctest::Approx(0.5).epsilon(1e-14));

  p = exact_permutation_p(diffs({0.3}));
  CHECK(p.p1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.p2 == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<double> big(21, 0.1);
  CHECK_THROWS_AS(exact_permutation_p(diffs(big)),
                  enumeration_too_large_error);
}

TEST_CASE("monte-carlo permutation tracks the exact p-value") {
  rng_engine gen(99);
  for (int rep = 0; rep < 8; ++rep) {
    std::vector<double> d(10);
    for (double& x : d) x = (uniform01(gen) - 0.35) * 0.4;
    const PairedSample s = diffs(d);
    const ExactP exact = exact_permutation_p(s);
    const std::uint64_t T = 100000;
    const auto out = permutation_test(s, T, 7 + rep);
    const double se1 =
        std::sqrt(std::max(exact.p1 * (1 - exact.p1), 1e-6) / T);
    const double se2 =
        std::sqrt(std::max(exact.p2 * (1 - exact.p2), 1e-6) / T);
    CHECK(std::abs(out.p1 - exact.p1) < 4 * se1 + 1e-3);
    CHECK(std::abs(out.p2 - exact.p2) < 4 * se2 + 1e-3);
  }
}

TEST_CASE("permutation p-values are plain fractions") {
  // with one observation only two assignments exist; every estimate is a
  // multiple of 1/T with no smoothing
  const auto out = permutation_test(diffs({0.5}), 1000, 3);
  const double scaled = out.p1 * 1000;
  CHECK(scaled == doctest::Approx(std::round(scaled)).epsilon(1e-9));
}

TEST_CASE("bootstrap shift test on a two-point sample") {
  // d = [0.3, -0.1]: replica means are 0.3 (1/4), 0.1 (1/2), -0.1 (1/4);
  // the recentering shift converges to 0.1 and the observed mean is 0.1,
  // so p1 -> P(mean - 0.1 >= 0.1) = 1/4 and p2 -> 1/2
  const auto out = bootstrap_shift_test(diffs({0.3, -0.1}), 200000, 11);
  CHECK(out.p1 == doctest::Approx(0.25).epsilon(0.03));
  CHECK(out.p2 == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("bootstrap shift test on a constant positive sample") {
  // every replica mean equals the shift, so no recentred replica reaches
  // the observed mean and both p-values are exactly zero
  const auto out = bootstrap_shift_test(diffs({0.2, 0.2, 0.2, 0.2}), 10000, 5);
  CHECK(out.p1 == 0.0);
  CHECK(out.p2 == 0.0);
}

TEST_CASE("resampling tests are deterministic in the seed") {
  const PairedSample s = diffs({0.1, -0.05, 0.2, 0.07, -0.01, 0.13});
  const auto a = permutation_test(s, 20000, 42);
  const auto b = permutation_test(s, 20000, 42);
  CHECK(a.p1 == b.p1);
  CHECK(a.p2 == b.p2);
  const auto c = permutation_test(s, 20000, 43);
  CHECK(a.p1 != c.p1);

  const auto ba = bootstrap_shift_test(s, 20000, 42);
  const auto bb = bootstrap_shift_test(s, 20000, 42);
  CHECK(ba.p1 == bb.p1);
}

TEST_CASE("all five tests are invariant to power-of-two rescaling") {
  const std::vector<double> base = {0.11, -0.04, 0.22, 0.09, -0.015,
                                    0.13, 0.05,  -0.08, 0.17, 0.02};
  std::vector<double> scaled = base;
  for (double& x : scaled) x *= 4.0;  // exact in binary floating point
  const PairedSample s1 = diffs(base);
  const PairedSample s2 = diffs(scaled);

  CHECK(t_test(s1).p1 == t_test(s2).p1);
  CHECK(wilcoxon_test(s1).p1 == wilcoxon_test(s2).p1);
  // the sign threshold scales with the data
  CHECK(sign_test(s1, 0.01).p1 == sign_test(s2, 0.04).p1);
  CHECK(permutation_test(s1, 5000, 17).p1 ==
        permutation_test(s2, 5000, 17).p1);
  CHECK(bootstrap_shift_test(s1, 5000, 17).p1 ==
        bootstrap_shift_test(s2, 5000, 17).p1);
}

TEST_CASE("required replicas") {
  CHECK(required_replicas(0.05, 0.01) == 190000);
  CHECK(required_replicas(0.5, 1.0) == 1);
  CHECK(required_replicas(0.01, 0.01) == 990000);
  CHECK_THROWS_AS(required_replicas(0.0, 0.01), invalid_configuration_error);
  CHECK_THROWS_AS(required_replicas(0.05, 0.0), invalid_configuration_error);
  CHECK_THROWS_AS(required_replicas(1.5, 0.01), invalid_configuration_error);
}

TEST_CASE("from_scores wires differences and summary statistics") {
  const auto s = PairedSample::from_scores({0.5, 0.4, 0.6}, {0.6, 0.6, 0.9});
  REQUIRE(s.n == 3);
  CHECK(s.d[0] == doctest::Approx(0.1));
  CHECK(s.d[1] == doctest::Approx(0.2));
  CHECK(s.d[2] == doctest::Approx(0.3));
  CHECK(s.mean_d == doctest::Approx(0.2));
  CHECK(s.sd_d == doctest::Approx(0.1));
  CHECK_THROWS_AS(PairedSample::from_scores({0.5}, {0.6, 0.7}),
                  invalid_data_error);
  CHECK_THROWS_AS(PairedSample::from_scores({}, {}), invalid_data_error);
}

TEST_CASE("signed ranks use mid-ranks for ties") {
  const auto r = SignedRanks::from_differences({0.1, -0.1, 0.3, 0.0});
  REQUIRE(r.n0 == 3);
  CHECK(r.tie_present);
  // |d| = {0.1, 0.1, 0.3} -> mid-ranks 1.5, 1.5, 3 with signs
  std::vector<double> sorted = r.ranks;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == doctest::Approx(-1.5));
  CHECK(sorted[1] == doctest::Approx(1.5));
  CHECK(sorted[2] == doctest::Approx(3.0));
}

TEST_CASE("test names round-trip") {
  for (TestId id : {TestId::t, TestId::wilcoxon, TestId::sign,
                    TestId::permutation, TestId::bootstrap}) {
    CHECK(test_from_name(test_name(id)) == id);
  }
  CHECK_THROWS_AS(test_from_name("anova"), invalid_configuration_error);
}
