#include "gaze/pso_features.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gaze/stats.hpp"
#include "oracles.hpp"

using namespace gaze;

namespace {

// a saccade [0, sac_end] immediately followed by an oscillation
struct PsoBox {
  KinematicTraces tr;
  std::vector<EventSegment> segs;
};

PsoBox make_pair(const std::vector<double>& sac_h, const std::vector<double>& pso_h,
                 const std::vector<double>& sac_vel, const std::vector<double>& pso_vel,
                 double rate = 1000) {
  PsoBox box;
  KinematicTraces& tr = box.tr;
  tr.sample_rate_hz = rate;
  tr.pos_h = sac_h;
  tr.pos_h.insert(tr.pos_h.end(), pso_h.begin(), pso_h.end());
  const std::size_t n = tr.pos_h.size();
  tr.pos_v.assign(n, 0.0);
  tr.raw_h = tr.pos_h;
  tr.raw_v = tr.pos_v;
  tr.vel_h = sac_vel;
  tr.vel_h.insert(tr.vel_h.end(), pso_vel.begin(), pso_vel.end());
  tr.vel_v.assign(n, 0.0);
  tr.acc_h.assign(n, 0.0);
  tr.acc_v.assign(n, 0.0);
  tr.valid.assign(n, 1);
  tr.pos_r.resize(n);
  tr.vel_r.resize(n);
  tr.acc_r.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tr.pos_r[i] = std::fabs(tr.pos_h[i]);
    tr.vel_r[i] = std::fabs(tr.vel_h[i]);
    tr.acc_r[i] = std::fabs(tr.acc_h[i]);
  }
  const std::size_t sac_end = sac_h.size() - 1;
  box.segs = {{EventKind::Saccade, 0, sac_end, std::nullopt},
              {EventKind::Pso, sac_end + 1, n - 1, 0}};
  return box;
}

std::vector<double> ramp(std::size_t n, double amp) {
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i)
    h[i] = amp * static_cast<double>(i) / static_cast<double>(n - 1);
  return h;
}

}  // namespace

TEST_CASE("pso views require a parent") {
  auto box = make_pair(ramp(31, 2.0), std::vector<double>(15, 2.0),
                       std::vector<double>(31, 60.0), std::vector<double>(15, 10.0));
  const auto views = build_pso_views(box.tr, box.segs);
  REQUIRE(views.size() == 1);
  CHECK(views[0].parent.start_idx == 0);
  CHECK(views[0].start_idx == views[0].parent.end_idx + 1);

  // orphaned oscillation (no matching saccade) is dropped
  auto orphan = box.segs;
  orphan[1].parent_start = 999;
  CHECK(build_pso_views(box.tr, orphan).empty());
}

TEST_CASE("temporal features") {
  // two saccade+pso pairs separated by a fixation
  KinematicTraces tr;
  tr.sample_rate_hz = 1000;
  const std::size_t n = 600;
  tr.pos_h.assign(n, 0.0);
  tr.pos_v.assign(n, 0.0);
  tr.raw_h = tr.pos_h;
  tr.raw_v = tr.pos_v;
  tr.vel_h.assign(n, 0.0);
  tr.vel_v.assign(n, 0.0);
  tr.acc_h.assign(n, 0.0);
  tr.acc_v.assign(n, 0.0);
  tr.valid.assign(n, 1);
  tr.pos_r = tr.pos_h;
  tr.vel_r.assign(n, 0.0);
  tr.acc_r.assign(n, 0.0);
  for (std::size_t i = 0; i < 31; ++i) tr.vel_r[30 + i] = 100.0;
  for (std::size_t i = 0; i < 15; ++i) tr.vel_r[61 + i] = 30.0;  // pso 1 peak 30
  for (std::size_t i = 0; i < 31; ++i) tr.vel_r[400 + i] = 100.0;
  for (std::size_t i = 0; i < 15; ++i) tr.vel_r[431 + i] = 30.0;  // pso 2 peak 30

  std::vector<EventSegment> segs{
      {EventKind::Saccade, 30, 60, std::nullopt}, {EventKind::Pso, 61, 75, 30},
      {EventKind::Saccade, 400, 430, std::nullopt}, {EventKind::Pso, 431, 445, 400}};
  const auto views = build_pso_views(tr, segs);
  REQUIRE(views.size() == 2);
  const auto f = compute_pso_features(views, 2, ClassifierConfig{});

  CHECK(f.pct_with_pso == doctest::Approx(100.0));
  REQUIRE(f.intervals_ms.size() == 1);
  // pso 1 ends at 75 ms, pso 2 starts at 431 ms
  CHECK(f.intervals_ms[0] == doctest::Approx(431.0 - 75.0));
  // both planted peaks are 30 deg/s -> all slow
  CHECK(f.pct_slow == doctest::Approx(100.0));
  CHECK(f.pct_moderate == doctest::Approx(0.0));
  CHECK(f.pct_fast == doctest::Approx(0.0));
}

TEST_CASE("pso shape") {
  SUBCASE("monotone slice has no reversals") {
    auto box = make_pair(ramp(31, 2.0), ramp(15, 0.3), std::vector<double>(31, 60.0),
                         std::vector<double>(15, 10.0));
    const auto views = build_pso_views(box.tr, box.segs);
    const PsoShape s = pso_shape(views[0]);
    CHECK(s.valleys[0] == 0.0);
    CHECK(s.peaks[0] == 0.0);
  }
  SUBCASE("one damped oscillation around the landing point: one valley, one peak") {
    // overshoot to 2.2, return through 2.0 twice, settle near 2.0
    std::vector<double> pso_h{2.0, 2.1, 2.2, 2.15, 2.05, 2.0, 1.95, 1.97, 2.0, 2.02};
    auto box = make_pair(ramp(31, 2.0), pso_h, std::vector<double>(31, 60.0),
                         std::vector<double>(pso_h.size(), 5.0));
    const auto views = build_pso_views(box.tr, box.segs);
    const PsoShape s = pso_shape(views[0]);
    CHECK(s.peaks[0] == 1.0);    // |h| crest at 2.2
    CHECK(s.valleys[0] == 1.0);  // |h| dip at 1.95
    CHECK(s.max_abs_dev[0] == doctest::Approx(0.25));
  }
  SUBCASE("range from min to max") {
    std::vector<double> pso_h{-0.1, 0.0, 0.25, 0.1};
    auto box = make_pair(ramp(31, 0.0), pso_h, std::vector<double>(31, 60.0),
                         std::vector<double>(pso_h.size(), 5.0));
    const auto views = build_pso_views(box.tr, box.segs);
    CHECK(pso_shape(views[0]).max_abs_dev[0] == doctest::Approx(0.35));
  }
}

TEST_CASE("pso dynamics and profile stats") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> g(0, 5);
  std::vector<double> pso_vel(20);
  for (auto& x : pso_vel) x = g(rng);
  auto box = make_pair(ramp(31, 2.0), std::vector<double>(20, 2.0),
                       std::vector<double>(31, 60.0), pso_vel);
  const auto views = build_pso_views(box.tr, box.segs);
  const auto f = compute_pso_features(views, 1, ClassifierConfig{});

  double pk = 0;
  std::vector<double> abs_vel;
  for (double x : pso_vel) {
    pk = std::max(pk, std::fabs(x));
    abs_vel.push_back(std::fabs(x));
  }
  CHECK(f.pk_vel.h[0] == doctest::Approx(pk));
  CHECK(f.pk_vel.h[0] >= f.vel_prof_mean.h[0]);  // max >= mean of absolutes
  const oracle::Moments m = oracle::moments(abs_vel);
  CHECK(f.vel_prof_mean.h[0] == doctest::Approx(m.mean).epsilon(1e-9));
  CHECK(f.vel_prof_sd.h[0] == doctest::Approx(m.sd).epsilon(1e-9));
  CHECK(f.vel_prof_skew.h[0] == doctest::Approx(m.skew).epsilon(1e-9));
  CHECK(f.vel_prof_kurt.h[0] == doctest::Approx(m.kurt).epsilon(1e-9));
}

TEST_CASE("parent ratios") {
  SUBCASE("durations 30 ms and 15 ms give ratio 2") {
    // saccade spans 31 samples (30 ms), pso 16 samples (15 ms)
    auto box = make_pair(ramp(31, 2.0), ramp(16, 0.2), std::vector<double>(31, 60.0),
                         std::vector<double>(16, 10.0));
    const auto views = build_pso_views(box.tr, box.segs);
    const PsoParentRatios r = pso_parent_ratios(views[0]);
    CHECK(r.sdur_pdur == doctest::Approx(2.0));
  }
  SUBCASE("planted peak velocities 180 and 30 give ratio 6") {
    auto box = make_pair(ramp(31, 2.0), ramp(16, 0.2), std::vector<double>(31, 180.0),
                         std::vector<double>(16, 30.0));
    const auto views = build_pso_views(box.tr, box.segs);
    const PsoParentRatios r = pso_parent_ratios(views[0]);
    CHECK(r.spkvel_ppkvel[0] == doctest::Approx(6.0));
  }
  SUBCASE("identical pairs have zero spread") {
    KinematicTraces tr;
    tr.sample_rate_hz = 1000;
    std::vector<EventSegment> segs;
    std::vector<double> h, vel;
    for (int k = 0; k < 4; ++k) {
      const std::size_t s0 = h.size();
      const auto sh = ramp(31, 2.0);
      for (std::size_t i = 0; i < sh.size(); ++i) {
        h.push_back(sh[i]);
        vel.push_back(120.0);
      }
      segs.push_back({EventKind::Saccade, s0, h.size() - 1, std::nullopt});
      const std::size_t p0 = h.size();
      for (int i = 0; i < 16; ++i) {
        h.push_back(2.0 + 0.01 * i);
        vel.push_back(20.0);
      }
      segs.push_back({EventKind::Pso, p0, h.size() - 1, s0});
      for (int i = 0; i < 100; ++i) {
        h.push_back(h.back());
        vel.push_back(0.0);
      }
    }
    const std::size_t n = h.size();
    tr.pos_h = h;
    tr.pos_v.assign(n, 0.0);
    tr.raw_h = h;
    tr.raw_v.assign(n, 0.0);
    tr.vel_h = vel;
    tr.vel_v.assign(n, 0.0);
    tr.acc_h.assign(n, 0.0);
    tr.acc_v.assign(n, 0.0);
    tr.valid.assign(n, 1);
    tr.pos_r = tr.pos_h;
    tr.vel_r = vel;
    tr.acc_r.assign(n, 0.0);

    const auto views = build_pso_views(tr, segs);
    REQUIRE(views.size() == 4);
    const auto f = compute_pso_features(views, 4, ClassifierConfig{});
    const DistrStats d = distr_stat(f.sdur_pdur);
    CHECK(d.sd == doctest::Approx(0.0));
  }
}

TEST_CASE("pso invariants on random oscillations") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0, 0.1);
  std::uniform_real_distribution<double> pk(5.0, 80.0);
  std::size_t checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> pso_h(12), pso_vel(12);
    for (std::size_t i = 0; i < pso_h.size(); ++i) {
      pso_h[i] = 2.0 + g(rng);
      pso_vel[i] = pk(rng) * std::sin(0.8 * static_cast<double>(i));
    }
    auto box = make_pair(ramp(31, 2.0), pso_h, std::vector<double>(31, 100.0), pso_vel);
    const auto views = build_pso_views(box.tr, box.segs);
    const auto f = compute_pso_features(views, 1, ClassifierConfig{});

    CHECK(f.pct_slow + f.pct_moderate + f.pct_fast <= 100.0 + 1e-12);
    const PsoShape s = pso_shape(views[0]);
    for (int c = 0; c < 3; ++c) {
      const auto& pos = c == 0 ? views[0].pos_h : (c == 1 ? views[0].pos_v : views[0].pos_r);
      CHECK(s.max_abs_dev[c] >= std::fabs(pos.back() - pos.front()) - 1e-12);
      CHECK(std::fabs(s.valleys[c] - s.peaks[c]) <= 1.0);  // reversals alternate
    }
    const PsoParentRatios r = pso_parent_ratios(views[0]);
    for (double x : {r.sdur_pdur, r.samp_pdur[2], r.samp_pdev[2], r.spkvel_ppkvel[2]}) {
      if (!is_missing(x)) {
        CHECK(x > 0.0);
        ++checked;
      }
    }
  }
  CHECK(checked > 100);  // the positivity checks did run
}

TEST_CASE("p22 uses amplitude over duration in seconds") {
  // parent amplitude 2 deg, pso duration 15 ms -> 133.3 deg/s
  auto box = make_pair(ramp(31, 2.0), ramp(16, 0.2), std::vector<double>(31, 60.0),
                       std::vector<double>(16, 10.0));
  const auto views = build_pso_views(box.tr, box.segs);
  const PsoParentRatios r = pso_parent_ratios(views[0]);
  CHECK(r.samp_pdur[0] == doctest::Approx(2.0 / 0.015));
}
