#include "oracles.hpp"

#include "ideofactor/error.hpp"
#include "ideofactor/recommender.hpp"
#include "ideofactor/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace ideofactor;

namespace {

ScoredEntity source(const std::string& id, double ideology, double popularity) {
  ScoredEntity e;
  e.id = id;
  e.kind = EntityKind::Source;
  e.ideology = ideology;
  e.popularity = popularity;
  return e;
}

}  // namespace

TEST_SUITE("recommender") {

TEST_CASE("user popularity is the engagement-weighted mean") {
  const std::vector<ScoredEntity> s{source("a", 0.2, 1.0), source("b", 0.8, 3.0)};
  const std::vector<double> single{0, 1};
  std::vector<ScoredEntity> one{source("a", 0.2, 2.0)};
  const std::vector<double> one_count{1};
  CHECK(*user_popularity_position(one_count, one) == 2.0);
  const std::vector<double> even{1, 1}, skew{3, 1}, none{0, 0};
  CHECK(*user_popularity_position(even, s) == 2.0);
  CHECK(*user_popularity_position(skew, s) == 1.5);
  CHECK_FALSE(user_popularity_position(none, s));
  CHECK(*user_popularity_position(single, s) == 3.0);
}

TEST_CASE("unplaceable users fall back to the median popularity") {
  const std::vector<ScoredEntity> s{source("a", 0.2, 1.0), source("b", 0.8, 3.0), source("c", 0.5, 10.0)};
  ScoredEntity u;
  u.id = "u";
  u.ideology = 0.4;
  const std::vector<double> none{0, 0, 0};
  const auto p = place_user(u, none, s);
  CHECK(p.fallback);
  CHECK(p.popularity == 3.0);
  ScoredEntity bare;
  bare.id = "x";
  CHECK_THROWS_AS(place_user(bare, none, s), InputError);
}

TEST_CASE("the nearest source in ideology has the highest weight") {
  std::vector<ScoredEntity> s;
  for (int i = 0; i < 11; ++i) s.push_back(source("s" + std::to_string(i), i / 10.0, 1.0));
  const UserPosition user{"u", 0.33, 1.0, false};
  RecommendOptions opt;
  const auto c = candidates(user, s, {1.0, 1.0}, {}, opt);
  REQUIRE(c.size() == 11);
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i].sample_weight > c[best].sample_weight) best = i;
  CHECK(c[best].source_id == "s3");
}

TEST_CASE("empty box, empty list") {
  const std::vector<ScoredEntity> s{source("a", 0.0, 1.0), source("b", 1.0, 1.0)};
  const UserPosition user{"u", 0.5, 1.0, false};
  CHECK(recommend(user, s, {0.1, 10.0}, {}, RecommendOptions{}).empty());
  CHECK(recommend(user, s, {0.0, 0.0}, {}, RecommendOptions{}).empty());
}

TEST_CASE("weights decrease with ideology distance") {
  const UserPosition user{"u", 0.5, 2.0, false};
  const ToleranceBox box{0.3, 0.5};
  double last = gaussian_box_weight(user, box, 0.5, 2.0);
  for (double d = 0.01; d < 0.3; d += 0.01) {
    const double w = gaussian_box_weight(user, box, 0.5 + d, 2.0);
    CHECK(w < last);
    last = w;
  }
}

TEST_CASE("consumed sources are excluded unless asked") {
  const std::vector<ScoredEntity> s{source("a", 0.5, 1.0), source("b", 0.55, 1.0)};
  const std::vector<double> consumed{2, 0};
  const UserPosition user{"u", 0.5, 1.0, false};
  RecommendOptions opt;
  opt.count = 5;
  auto r = recommend(user, s, {0.2, 0.2}, consumed, opt);
  REQUIRE(r.size() == 1);
  CHECK(r[0].source_id == "b");
  CHECK(r[0].novel);
  opt.exclude_consumed = false;
  r = recommend(user, s, {0.2, 0.2}, consumed, opt);
  CHECK(r.size() == 2);
}

TEST_CASE("draws are without replacement and seeded") {
  std::vector<ScoredEntity> s;
  for (int i = 0; i < 8; ++i) s.push_back(source("s" + std::to_string(i), 0.4 + 0.02 * i, 1.0 + 0.1 * i));
  const UserPosition user{"u", 0.5, 1.3, false};
  RecommendOptions opt;
  opt.count = 5;
  opt.seed = 99;
  const auto a = recommend(user, s, {0.5, 1.0}, {}, opt);
  const auto b = recommend(user, s, {0.5, 1.0}, {}, opt);
  REQUIRE(a.size() == 5);
  std::set<std::string> ids;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].source_id == b[i].source_id);
    ids.insert(a[i].source_id);
  }
  CHECK(ids.size() == 5);
  opt.count = 100;
  CHECK(recommend(user, s, {0.5, 1.0}, {}, opt).size() == 8);
  opt.count = 0;
  CHECK_THROWS_AS(recommend(user, s, {0.5, 1.0}, {}, opt), InputError);
}

TEST_CASE("growing theta never shrinks the candidate set") {
  Rng rng(3);
  std::vector<ScoredEntity> s;
  for (int i = 0; i < 40; ++i) s.push_back(source("s" + std::to_string(i), rng.uniform(), 3 * rng.uniform()));
  const UserPosition user{"u", 0.5, 1.5, false};
  std::size_t last = 0;
  for (double theta = 0.0; theta <= 0.6; theta += 0.05) {
    const auto c = candidates(user, s, {theta, 1.0}, {}, RecommendOptions{});
    CHECK(c.size() >= last);
    last = c.size();
  }
}

TEST_CASE("weights match the Gaussian product oracle up to a constant") {
  Rng rng(8);
  std::vector<ScoredEntity> s;
  for (int i = 0; i < 20; ++i) s.push_back(source("s" + std::to_string(i), rng.uniform(), 2 * rng.uniform()));
  const UserPosition user{"u", 0.45, 1.0, false};
  const ToleranceBox box{0.4, 0.8};
  const auto c = candidates(user, s, box, {}, RecommendOptions{});
  REQUIRE(c.size() > 3);
  const double ratio = c[0].sample_weight /
                       oracle::box_weight(c[0].ideology - 0.45, c[0].popularity - 1.0, 0.2, 0.4);
  for (const auto& r : c)
    CHECK(r.sample_weight ==
          doctest::Approx(ratio * oracle::box_weight(r.ideology - 0.45, r.popularity - 1.0, 0.2, 0.4)).epsilon(1e-12));
}

TEST_CASE("box validation") {
  CHECK_THROWS_AS((ToleranceBox{-0.1, 0.1}.validate()), InputError);
  CHECK_THROWS_AS((ToleranceBox{0.1, std::nan("")}.validate()), InputError);
}

}  // TEST_SUITE
