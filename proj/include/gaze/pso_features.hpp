#ifndef GAZE_PSO_FEATURES_HPP
#define GAZE_PSO_FEATURES_HPP

#include <span>
#include <vector>

#include "gaze/classify.hpp"
#include "gaze/events.hpp"
#include "gaze/series.hpp"

namespace gaze {

struct PsoShape {
  double max_abs_dev[3];  // position range per component
  double valleys[3];      // reversals of |position| differences, - to +
  double peaks[3];        // reversals + to -
};

PsoShape pso_shape(const PsoView& pso);

struct PsoParentRatios {
  double sdur_pdur;        // P21
  double samp_pdur[3];     // P22, deg/s
  double samp_pdev[3];     // P23
  double spkvel_ppkvel[3]; // P24
};

PsoParentRatios pso_parent_ratios(const PsoView& pso);

struct PsoFeatures {
  std::vector<double> durations_ms;       // P01
  std::vector<double> intervals_ms;       // P02, PsoNum - 1 entries
  double pct_with_pso;                    // P03
  double pct_slow, pct_moderate, pct_fast;// P04-P06
  SeriesHVR max_abs_dev;                  // P07
  SeriesHVR valleys, peaks;               // P08, P09
  SeriesHVR pk_vel;                       // P10
  SeriesHVR vel_prof_mean, vel_prof_median, vel_prof_sd, vel_prof_skew, vel_prof_kurt;
  SeriesHVR acc_prof_mean, acc_prof_median, acc_prof_sd, acc_prof_skew, acc_prof_kurt;
  std::vector<double> sdur_pdur;          // P21
  SeriesHVR samp_pdur;                    // P22
  SeriesHVR samp_pdev;                    // P23
  SeriesHVR spkvel_ppkvel;                // P24
};

PsoFeatures compute_pso_features(std::span<const PsoView> psos, std::size_t saccade_count,
                                 const ClassifierConfig& cfg);

}  // namespace gaze

#endif
