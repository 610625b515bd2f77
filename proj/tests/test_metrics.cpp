#include "oracles.hpp"

#include "ideofactor/error.hpp"
#include "ideofactor/metrics.hpp"
#include "ideofactor/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ideofactor;

namespace {

std::vector<int> random_labels(Rng& rng, std::size_t n, int k) {
  std::vector<int> out(n);
  for (auto& l : out) l = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
  return out;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("purity examples") {
  const LabeledPartition a({0, 0, 1, 1, 2});
  CHECK(purity(a, a) == 1.0);
  CHECK(purity(LabeledPartition({0, 0, 0, 1, 1}), LabeledPartition({0, 0, 1, 1, 1})) == 0.8);
  CHECK(oracle::purity({0, 0, 0, 1, 1}, {0, 0, 1, 1, 1}) == 0.8);
  CHECK(purity(LabeledPartition(std::vector<int>(10, 0)), LabeledPartition({0, 0, 0, 0, 0, 1, 1, 1, 1, 1})) == 0.5);
  CHECK_THROWS_AS(purity(LabeledPartition({0, 1}), LabeledPartition({0})), InputError);
}

TEST_CASE("labels must be non-negative") { CHECK_THROWS_AS(LabeledPartition({0, -1}), InputError); }

TEST_CASE("ARI examples") {
  const LabeledPartition a({0, 0, 1, 1, 2, 2});
  CHECK(adjusted_rand_index(a, a) == 1.0);
  CHECK(adjusted_rand_index(LabeledPartition({3, 3, 7, 7, 5, 5}), a) == 1.0);
  CHECK(adjusted_rand_index(LabeledPartition(std::vector<int>(6, 0)), a) == 0.0);
  const std::vector<int> p{0, 0, 1, 1, 1, 2, 2, 0}, t{0, 1, 1, 1, 0, 2, 2, 2};
  CHECK(adjusted_rand_index(LabeledPartition(p), LabeledPartition(t)) == oracle::ari(p, t));
}

TEST_CASE("MI examples") {
  const LabeledPartition a({0, 0, 1, 1, 2, 2});
  const auto s = mutual_information_scores(a, a);
  CHECK(s.nmi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.ami == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<int> p{0, 0, 1, 2, 1, 0}, t{1, 0, 1, 1, 0, 0};
  const auto got = mutual_information_scores(LabeledPartition(p), LabeledPartition(t));
  const auto want = oracle::mi_scores_by_permutation(p, t);
  CHECK(std::abs(got.mi - want.mi) <= 1e-9);
  CHECK(std::abs(got.nmi - want.nmi) <= 1e-9);
  CHECK(std::abs(got.ami - want.ami) <= 1e-9);
  CHECK(std::string(kMiNormalization) == "arithmetic");
}

TEST_CASE("single-cluster conventions") {
  const LabeledPartition one(std::vector<int>(5, 0));
  const auto s = mutual_information_scores(one, one);
  CHECK(s.nmi == 1.0);
  CHECK(s.ami == 1.0);
  CHECK(adjusted_rand_index(one, one) == 1.0);
  const auto t = mutual_information_scores(one, LabeledPartition({0, 1, 0, 1, 1}));
  CHECK(t.nmi == 0.0);
  CHECK(t.ami == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("random small labelings agree with brute force") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    const auto p = random_labels(rng, n, 1 + static_cast<int>(rng.below(4)));
    const auto t = random_labels(rng, n, 1 + static_cast<int>(rng.below(4)));
    const LabeledPartition lp(p), lt(t);
    CHECK(purity(lp, lt) == oracle::purity(p, t));
    CHECK(adjusted_rand_index(lp, lt) == oracle::ari(p, t));
    const auto got = mutual_information_scores(lp, lt);
    const auto want = oracle::mi_scores_by_permutation(p, t);
    CHECK(std::abs(got.nmi - want.nmi) <= 1e-9);
    CHECK(std::abs(got.ami - want.ami) <= 1e-9);
  }
}

TEST_CASE("AMI of independent partitions centres on zero") {
  Rng rng(77);
  std::vector<int> a(1000), b(1000);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = b[i] = static_cast<int>(i % 2);
  double total = 0.0;
  for (int s = 0; s < 20; ++s) {
    std::shuffle(b.begin(), b.end(), rng.engine());
    total += mutual_information_scores(LabeledPartition(a), LabeledPartition(b)).ami;
  }
  CHECK(std::abs(total / 20) <= 0.05);
}

TEST_CASE("pearson examples") {
  const std::vector<double> x{1, 2, 4, 7, 11};
  std::vector<double> y, z;
  for (double v : x) {
    y.push_back(2 * v + 3);
    z.push_back(-v);
  }
  CHECK(pearson(x, y) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(x, z) == doctest::Approx(-1.0).epsilon(1e-15));
  const std::vector<double> a{0.3, 1.7, 2.2, 0.9, 4.1}, b{1.1, 0.4, 2.5, 3.3, 2.0};
  CHECK(std::abs(pearson(a, b) - oracle::pearson(a, b)) <= 1e-12);
}

TEST_CASE("pearson error kinds") {
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(pearson(one, one), InsufficientOverlapError);
  const std::vector<double> flat{2, 2, 2}, x{1, 2, 3};
  CHECK_THROWS_AS(pearson(flat, x), ZeroVarianceError);
  const ScoreSeries s1({"a", "b"}, {0.1, 0.2}), s2({"b", "c"}, {0.3, 0.4});
  CHECK_THROWS_AS(pearson(s1, s2), InsufficientOverlapError);
}

TEST_CASE("pearson over the id intersection") {
  const ScoreSeries xs({"a", "b", "c", "d"}, {1, 2, 3, 100}), ys({"c", "b", "a", "e"}, {30, 20, 10, -5});
  CHECK(pearson(xs, ys) == doctest::Approx(1.0));
}

TEST_CASE("score series validation") {
  CHECK_THROWS_AS(ScoreSeries({"a", "a"}, {1, 2}), InputError);
  CHECK_THROWS_AS(ScoreSeries({"a"}, {std::nan("")}), InputError);
  CHECK_THROWS_AS(ScoreSeries({"a"}, {1, 2}), InputError);
}

TEST_CASE("threshold labels") {
  const std::vector<double> a{0.1, 0.9}, b{0.5}, c{0.1, 0.2, 0.49};
  CHECK(threshold_labels(a).labels == std::vector<int>{0, 1});
  CHECK(threshold_labels(b).labels == std::vector<int>{1});
  CHECK(threshold_labels(c).labels == std::vector<int>{0, 0, 0});
}

TEST_CASE("average content truth") {
  MatrixXd v(4, 3);
  v << 0, 1, 0,   // one source scored 0.9
      1, 0, 1,    // equal on 0.0 and 1.0
      2, 0, 1,    // 2x on 0.0, 1x on 0.9 (column 2 rescored below)
      0, 0, 0;    // no engagement
  const EngagementMatrix c(v, {"u1", "u2", "u3", "u4"}, {"s0", "s1", "s2"});
  const auto out = avg_content_truth(c, ScoreSeries({"s0", "s1", "s2"}, {0.0, 0.9, 1.0}));
  REQUIRE(out.size() == 3);
  CHECK(out.ids == std::vector<std::string>{"u1", "u2", "u3"});
  CHECK(out.values[0] == doctest::Approx(0.9));
  CHECK(out.values[1] == doctest::Approx(0.5));
  const auto partial = avg_content_truth(c, ScoreSeries({"s0", "s2"}, {0.0, 0.9}));
  CHECK(partial.ids == std::vector<std::string>{"u2", "u3"});
  CHECK(partial.values[1] == doctest::Approx(0.3));
}

TEST_CASE("evaluate uses the id intersection") {
  Prediction p;
  p.ids = {"a", "b", "c", "d", "x"};
  p.clusters = {0, 0, 1, 1, 1};
  p.ideology = {0.1, 0.2, 0.8, 0.9, 0.5};
  const ScoreSeries truth({"d", "c", "b", "a", "y"}, {0.95, 0.7, 0.3, 0.05, 0.5});
  const auto r = evaluate(p, truth);
  CHECK(r.coverage.predicted == 5);
  CHECK(r.coverage.truth == 5);
  CHECK(r.coverage.common == 4);
  CHECK(r.purity == 1.0);
  CHECK(r.ari == 1.0);
  REQUIRE(r.corr_i);
  CHECK(*r.corr_i > 0.9);
  CHECK_FALSE(r.corr_rho);
  const ScoreSeries far({"y", "z"}, {0.1, 0.9});
  CHECK_THROWS_AS(evaluate(p, far), InsufficientOverlapError);
}

}  // TEST_SUITE
