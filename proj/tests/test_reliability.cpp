#include "gaze/reliability.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "gaze/catalog.hpp"
#include "oracles.hpp"

using namespace gaze;

namespace {

using Pairs = std::vector<std::array<double, 2>>;

Pairs random_pairs(std::mt19937_64& rng, std::size_t n, double subject_sd, double noise_sd) {
  std::normal_distribution<double> subj(0, subject_sd);
  std::normal_distribution<double> noise(0, noise_sd);
  Pairs p(n);
  for (auto& row : p) {
    const double s = subj(rng);
    row = {s + noise(rng), s + noise(rng)};
  }
  return p;
}

}  // namespace

TEST_CASE("icc exact degenerate cases") {
  SUBCASE("duplicated sessions give 1") {
    Pairs p{{1, 1}, {2, 2}, {5, 5}, {9, 9}};
    CHECK(icc_2_1(p) == doctest::Approx(1.0));
  }
  SUBCASE("identical subjects with pure session noise give 0") {
    Pairs p{{1, 2}, {1, 2}, {1, 2}, {1, 2}, {1, 2}};
    CHECK(icc_2_1(p) == doctest::Approx(0.0));
  }
  SUBCASE("all values identical is undefined") {
    Pairs p{{3, 3}, {3, 3}, {3, 3}};
    CHECK(is_missing(icc_2_1(p)));
  }
  SUBCASE("fewer than three complete subjects rejected") {
    Pairs p{{1, 2}, {3, 4}};
    CHECK_THROWS_AS(icc_2_1(p), std::invalid_argument);
    Pairs with_missing{{1, 2}, {3, 4}, {missing(), 5}};
    CHECK_THROWS_AS(icc_2_1(with_missing), std::invalid_argument);
  }
}

TEST_CASE("icc matches the anova closed form on random balanced tables") {
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g(0, 1);
  double max_dev = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Pairs p(10);
    for (auto& row : p) row = {g(rng), g(rng)};
    const double mine = icc_2_1(p);
    const double ref = oracle::icc_anova(p);
    if (!is_missing(mine)) max_dev = std::max(max_dev, std::fabs(mine - ref));
  }
  CHECK(max_dev < 0.02);
}

TEST_CASE("icc matches anova when between-subject signal exists") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 100; ++trial) {
    const Pairs p = random_pairs(rng, 12, 2.0, 0.5);
    CHECK(icc_2_1(p) == doctest::Approx(oracle::icc_anova(p)).epsilon(0.02).scale(1));
    CHECK(icc_2_1(p) > 0.7);  // planted strong subject signal
  }
}

TEST_CASE("icc shift and scale invariance") {
  std::mt19937_64 rng(103);
  const Pairs p = random_pairs(rng, 15, 1.0, 0.7);
  const double base = icc_2_1(p);
  Pairs shifted = p, scaled = p;
  for (auto& row : shifted) {
    row[0] += 42.0;
    row[1] += 42.0;
  }
  for (auto& row : scaled) {
    row[0] *= 3.7;
    row[1] *= 3.7;
  }
  CHECK(icc_2_1(shifted) == doctest::Approx(base).epsilon(1e-6));
  CHECK(icc_2_1(scaled) == doctest::Approx(base).epsilon(1e-6));
}

TEST_CASE("icc listwise deletion of incomplete subjects") {
  std::mt19937_64 rng(104);
  Pairs p = random_pairs(rng, 10, 1.5, 0.5);
  Pairs with_holes = p;
  with_holes.push_back({missing(), 3.0});
  with_holes.push_back({2.0, missing()});
  CHECK(icc_2_1(with_holes) == doctest::Approx(icc_2_1(p)));
}

TEST_CASE("reml components are reported") {
  std::mt19937_64 rng(105);
  const Pairs p = random_pairs(rng, 30, 2.0, 0.5);
  VarianceComponents vc;
  const double icc = icc_2_1(p, &vc);
  CHECK(vc.reml_converged);
  CHECK(vc.subject >= 0);
  CHECK(vc.session >= 0);
  CHECK(vc.error >= 0);
  CHECK(icc == doctest::Approx(vc.subject / (vc.subject + vc.session + vc.error)));
}

TEST_CASE("kendalls w") {
  SUBCASE("identical rankings give 1") {
    Pairs p{{1, 10}, {2, 20}, {3, 30}, {4, 40}};
    CHECK(kendalls_w(p) == doctest::Approx(1.0));
  }
  SUBCASE("reversed rankings give 0 for two raters") {
    Pairs p{{1, 4}, {2, 3}, {3, 2}, {4, 1}};
    CHECK(kendalls_w(p) == doctest::Approx(0.0));
  }
  SUBCASE("monotone transforms leave w unchanged") {
    std::mt19937_64 rng(106);
    std::normal_distribution<double> g(0, 1);
    Pairs p(12);
    for (auto& row : p) row = {g(rng), g(rng)};
    const double base = kendalls_w(p);
    Pairs t = p;
    for (auto& row : t) {
      row[0] = std::exp(row[0]);
      row[1] = std::exp(row[1]);
    }
    CHECK(kendalls_w(t) == doctest::Approx(base).epsilon(1e-12));
  }
  SUBCASE("both sessions fully tied is undefined") {
    Pairs p{{1, 2}, {1, 2}, {1, 2}};
    CHECK(is_missing(kendalls_w(p)));
  }
  SUBCASE("matches the brute-force oracle including ties") {
    std::mt19937_64 rng(107);
    std::uniform_int_distribution<int> small(0, 4);  // integer values force ties
    for (int trial = 0; trial < 500; ++trial) {
      Pairs p(8);
      for (auto& row : p)
        row = {static_cast<double>(small(rng)), static_cast<double>(small(rng))};
      const double mine = kendalls_w(p);
      const double ref = oracle::kendalls_w(p);
      if (std::isnan(ref)) {
        CHECK(is_missing(mine));
      } else {
        CHECK(mine == doctest::Approx(ref).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("cicchetti bands") {
  CHECK(cicchetti_band(0.80) == CicchettiBand::Excellent);
  CHECK(cicchetti_band(0.75) == CicchettiBand::Excellent);
  CHECK(cicchetti_band(0.60) == CicchettiBand::Good);
  CHECK(cicchetti_band(0.59) == CicchettiBand::Fair);
  CHECK(cicchetti_band(0.40) == CicchettiBand::Fair);
  CHECK(cicchetti_band(0.39) == CicchettiBand::Poor);
  CHECK(cicchetti_band(0.0) == CicchettiBand::Poor);
  CHECK(cicchetti_band(1.0) == CicchettiBand::Excellent);
}

TEST_CASE("normality pipeline classifications") {
  SUBCASE("gaussian data is normal under the raw transform") {
    int ok = 0;
    for (int seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 1000);
      std::normal_distribution<double> g(5.0, 2.0);
      std::vector<double> v(10000);
      for (auto& x : v) x = g(rng);
      const NormalityAssessment na = assess_normality(v, FeatureKind::General);
      if (na.is_normal && na.transform == "raw") ++ok;
    }
    CHECK(ok >= 90);
  }
  SUBCASE("lognormal data normalizes via the log transform") {
    int ok = 0;
    for (int seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 2000);
      std::normal_distribution<double> g(6.0, 0.5);
      std::vector<double> v(10000);
      for (auto& x : v) x = std::exp(g(rng));
      const NormalityAssessment na = assess_normality(v, FeatureKind::General);
      if (na.is_normal && na.transform == "log") ++ok;
    }
    CHECK(ok >= 90);
  }
  SUBCASE("two-point mass stays non-normal under every transform") {
    int rejected = 0;
    for (int seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(seed) + 3000);
      std::bernoulli_distribution b(0.5);
      std::vector<double> v(10000);
      for (auto& x : v) x = b(rng) ? 1.0 : 2.0;
      if (!assess_normality(v, FeatureKind::General).is_normal) ++rejected;
    }
    CHECK(rejected >= 99);
  }
  SUBCASE("max_p never falls below the raw p") {
    std::mt19937_64 rng(108);
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(5000);
    for (auto& x : v) x = e(rng);
    const double raw_p = pearson_chi2_normality(v);
    const NormalityAssessment na = assess_normality(v, FeatureKind::General);
    CHECK(na.max_p >= raw_p);
  }
  SUBCASE("too few values are inconclusive and non-normal") {
    const std::vector<double> v(10, 1.0);
    const NormalityAssessment na = assess_normality(v, FeatureKind::General);
    CHECK(na.inconclusive);
    CHECK_FALSE(na.is_normal);
  }
  SUBCASE("chosen transform applies to new values") {
    std::mt19937_64 rng(109);
    std::normal_distribution<double> g(6.0, 0.5);
    std::vector<double> v(5000);
    for (auto& x : v) x = std::exp(g(rng));
    const NormalityAssessment na = assess_normality(v, FeatureKind::General);
    if (na.transform == "log") CHECK(na.apply(v[0]) == doctest::Approx(std::log1p(v[0])));
  }
}

TEST_CASE("population table stores and retrieves values") {
  PopulationTable t(feature_catalog().size());
  t.insert("s1", "1", 0, 1.5);
  t.insert("s1", "2", 0, 2.5);
  t.insert("s2", "1", 0, 3.5);
  CHECK(t.subjects().size() == 2);
  CHECK(t.sessions().size() == 2);
  CHECK(t.value(0, 0, 0) == doctest::Approx(1.5));
  CHECK(t.value(0, 1, 0) == doctest::Approx(2.5));
  CHECK(is_missing(t.value(1, 1, 0)));
  CHECK_THROWS_AS(t.insert("s1", "3", 0, 1.0), std::invalid_argument);
}

TEST_CASE("reliability report end to end") {
  std::mt19937_64 rng(110);
  std::normal_distribution<double> subj(0, 3.0);
  std::normal_distribution<double> noise(0, 0.3);

  const std::size_t n_subjects = 60;
  PopulationTable table(feature_catalog().size());
  const int f0 = catalog_index("F01");
  const int f1 = catalog_index("F02.MN");
  REQUIRE(f0 >= 0);
  REQUIRE(f1 >= 0);

  std::vector<double> signal(n_subjects);
  for (auto& s : signal) s = subj(rng);
  for (std::size_t s = 0; s < n_subjects; ++s) {
    const std::string id = "subj" + std::to_string(s);
    for (int sess = 1; sess <= 2; ++sess) {
      table.insert(id, std::to_string(sess), static_cast<std::size_t>(f0),
                   10.0 + signal[s] + noise(rng));
      table.insert(id, std::to_string(sess), static_cast<std::size_t>(f1),
                   200.0 + signal[s] + noise(rng));
    }
  }

  const auto reports = reliability_report(table);
  CHECK(reports.size() == feature_catalog().size());  // one row per catalog id

  const auto& r0 = reports[static_cast<std::size_t>(f0)];
  CHECK(r0.feature_id == "F01");
  CHECK_FALSE(is_missing(r0.median));
  REQUIRE_FALSE(is_missing(r0.value));
  CHECK(r0.value > 0.9);  // planted subject signal dominates
  if (r0.kind == ReliabilityKind::ICC) {
    REQUIRE(r0.band.has_value());
    CHECK(*r0.band == CicchettiBand::Excellent);
  }

  // features never filled stay missing without aborting the batch
  const auto& empty_row = reports[static_cast<std::size_t>(catalog_index("P01.MN"))];
  CHECK(is_missing(empty_row.value));

  // shuffling session 2 across subjects destroys the agreement
  PopulationTable shuffled(feature_catalog().size());
  std::vector<std::size_t> perm(n_subjects);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t s = 0; s < n_subjects; ++s) {
    const std::string id = "subj" + std::to_string(s);
    shuffled.insert(id, "1", static_cast<std::size_t>(f0),
                    10.0 + signal[s] + noise(rng));
    shuffled.insert(id, "2", static_cast<std::size_t>(f0),
                    10.0 + signal[perm[s]] + noise(rng));
  }
  const auto rs = reliability_report(shuffled);
  const auto& shuffled_row = rs[static_cast<std::size_t>(f0)];
  CHECK(shuffled_row.value < 0.6);
}

TEST_CASE("summary sessions configuration") {
  PopulationTable t(feature_catalog().size());
  const auto fi = static_cast<std::size_t>(catalog_index("F01"));
  for (int s = 0; s < 40; ++s) {
    t.insert("s" + std::to_string(s), "1", fi, 1.0);
    t.insert("s" + std::to_string(s), "2", fi, 3.0);
  }
  ReliabilityConfig first;
  const auto r1 = reliability_report(t, first);
  CHECK(r1[fi].median == doctest::Approx(1.0));

  ReliabilityConfig both;
  both.summary_sessions = SummarySessions::Both;
  const auto r2 = reliability_report(t, both);
  CHECK(r2[fi].median == doctest::Approx(2.0));
}
