#ifndef GAZE_FIXATION_FEATURES_HPP
#define GAZE_FIXATION_FEATURES_HPP

#include <span>
#include <vector>

#include "gaze/events.hpp"
#include "gaze/series.hpp"
#include "gaze/stats.hpp"

namespace gaze {

// Per-fixation drift measures for one component pair: displacement between
// the first and last sample, path length, and displacement over duration.
struct DriftMeasures {
  SeriesHVR displacement;  // deg
  SeriesHVR distance;      // deg
  SeriesHVR avg_speed;     // deg/s
};

struct DriftFits {
  SeriesHV lin_slope;  // deg/s, time axis in seconds from fixation onset
  SeriesHV lin_r2;
  SeriesHV quad_r2;
};

// Shares of fixations whose stepwise drift model kept neither, only the
// quadratic, only the linear, or both terms. Sums to 100 per component over
// the fixations long enough to fit.
struct StepwiseShares {
  double l0q0, l0q1, l1q0, l1q1;
};

struct FixationFeatures {
  double rate = 0;                    // count / recording duration
  std::vector<double> durations_ms;
  SeriesHV centroid;
  DriftMeasures drift;
  DriftFits fits;
  StepwiseShares stepwise_h{}, stepwise_v{};
  bool stepwise_defined = false;
  SeriesHVR vel_prof_mean, vel_prof_median, vel_prof_sd, vel_prof_skew, vel_prof_kurt;
  std::vector<double> pct_above_p90;  // radial, per fixation
  std::vector<double> pct_cross_p90;
  SeriesHVR acc_prof_mean, acc_prof_median, acc_prof_sd, acc_prof_skew, acc_prof_kurt;
};

double fix_rate(std::size_t fixation_count, double recording_duration_s);

// Sample mean of the position slice, per component.
void fix_centroid(const FixationView& fix, double* h, double* v);

// Displacement, path distance and average drift speed; radial values come
// from the 2-D path. Requires >= 2 samples.
void drift_features(const FixationView& fix, double disp[3], double dist[3], double speed[3]);

// Linear slope / r2 and quadratic r2 of position against time (seconds from
// onset). Requires >= 4 samples.
void drift_fits(const FixationView& fix, double lin_slope[2], double lin_r2[2],
                double quad_r2[2]);

// Pooled 90th-percentile threshold of the radial fixation velocity, then
// per-fixation percentages of samples above it and of consecutive-sample
// crossings of it.
double pooled_vel_p90(std::span<const FixationView> fixations);
void fix_p90_features(std::span<const FixationView> fixations, double threshold,
                      std::vector<double>* pct_above, std::vector<double>* pct_cross);

FixationFeatures compute_fixation_features(std::span<const FixationView> fixations,
                                           double recording_duration_s);

}  // namespace gaze

#endif
