#ifndef GAZE_SACCADE_FEATURES_HPP
#define GAZE_SACCADE_FEATURES_HPP

#include <span>
#include <vector>

#include "gaze/events.hpp"
#include "gaze/series.hpp"
#include "gaze/stats.hpp"

namespace gaze {

// Saccade trajectory mapped into the chord frame: the start-to-end axis
// becomes the abscissa, rescaled so the first point is (-1, 0) and the last
// (+1, 0); the ordinate stays in degrees.
struct NormalizedSaccadeFrame {
  std::vector<double> x;  // in [-1, 1] at the endpoints
  std::vector<double> y;  // perpendicular deviation, deg
};

// Throws when the start and end coincide (zero-length chord).
NormalizedSaccadeFrame normalize_saccade_frame(const SaccadeView& sac);

struct AmplitudePath {
  double amp_h, amp_v, amp_r;       // |end - start|
  double travelled_r;               // 2-D path length
  double efficiency;                // amp_r / travelled_r
  double tail_efficiency;           // same ratio over the last 7 ms
  double tail_inconsistency_pct;    // raw-signal tail steps deviating >= 60 deg
};

AmplitudePath sac_amplitude_path(const SaccadeView& sac);

struct InitialDeviation {
  double init_dir_deg;   // signed angle between the +20 ms vector and the chord
  double init_avg_dev;   // mean orthogonal deviation over the first 10 ms
};

InitialDeviation sac_initial_deviation(const SaccadeView& sac);

struct RawCurvature {
  double max_dev;      // max |perpendicular distance| from the chord
  double max_dev_pct;  // its sample position as percent of duration
  double area;         // sum of along-chord progress x signed deviation
};

RawCurvature sac_raw_curvature(const SaccadeView& sac);

struct FitCurvature {
  double quad_coeff;                   // S13
  double cub_m1, cub_m1_pct;           // local max of the fitted cubic
  double cub_m2, cub_m2_pct;           // local min
  double cub_max, cub_max_pct;         // max of the two values / points
};

FitCurvature sac_fit_curvature(const NormalizedSaccadeFrame& frame);

struct SaccadeDynamics {
  double vel_local_minima;             // radial velocity valleys
  double pk_vel[3];                    // H, V, R
  double pk_acc[3], pk_dec[3];         // before / after the radial peak
  ProfileStats vel_prof[3], acc_prof[3];
};

SaccadeDynamics sac_dynamics(const SaccadeView& sac);

struct SaccadeRatios {
  double amp_dur[3];        // S34, deg/s
  double pkvel_amp[3];      // S35
  double pkvel_dur[3];      // S36
  double pkvel_mnvel[3];    // S37
  double pkvel_noise;       // S38, radial
  double acc_dec_dur;       // S39
  double pkacc_pkdec[3];    // S40
};

// noise_floor: mean |radial velocity| over the 20 ms before saccade onset
// (missing when the window is empty).
SaccadeRatios sac_ratios(const SaccadeView& sac, double noise_floor);

// Mean absolute radial velocity over the window_ms before the saccade,
// clipped at the previous saccade/oscillation end. Missing when no usable
// sample remains.
double local_noise_before(const SaccadeView& sac, const KinematicTraces& traces,
                          std::size_t prev_event_end_exclusive, double window_ms = 20.0);

struct MainSequenceFits {
  LinFit amp_dur;       // amplitude (deg) on duration (ms)
  LinFit log_pkvel_amp; // ln peak velocity on ln amplitude
};

// Collective fits over the per-saccade values; all fields missing when
// fewer than 3 saccades contribute.
MainSequenceFits main_sequence(std::span<const double> amp_r_deg,
                               std::span<const double> dur_ms,
                               std::span<const double> pkvel_r_deg_s);

struct ReadingBehavior {
  double small_right_rate, small_left_rate;  // amp <= bound
  double large_right_rate, large_left_rate;  // amp > bound
  double small_left_right_ratio;             // S51
  double small_all_large_left_ratio;         // S52
};

// Counts over the full classified saccade set (kept + large); direction from
// the sign of the horizontal displacement, exact ties count as rightward.
ReadingBehavior reading_behavior(std::span<const SaccadeView> all_saccades,
                                 double recording_duration_s,
                                 double amplitude_bound_deg = 8.0);

struct SaccadeFeatures {
  double rate = 0;                          // S01 over the kept set
  std::vector<double> durations_ms;         // S02
  SeriesHVR amplitude;                      // S03
  std::vector<double> travelled;            // S04
  std::vector<double> efficiency;           // S05
  std::vector<double> tail_efficiency;      // S06
  std::vector<double> tail_inconsistency;   // S07
  std::vector<double> init_dir;             // S08
  std::vector<double> init_avg_dev;         // S09
  std::vector<double> max_raw_dev;          // S10
  std::vector<double> max_raw_dev_pct;      // S11
  std::vector<double> area_curv;            // S12
  std::vector<double> quad_curv;            // S13
  std::vector<double> cub_m1, cub_m1_pct;   // S14, S15
  std::vector<double> cub_m2, cub_m2_pct;   // S16, S17
  std::vector<double> cub_max, cub_max_pct; // S18, S19
  std::vector<double> vel_local_minima;     // S20
  SeriesHVR pk_vel;                         // S21
  SeriesHVR vel_prof_mean, vel_prof_median, vel_prof_sd, vel_prof_skew, vel_prof_kurt;
  SeriesHVR pk_acc, pk_dec;                 // S27, S28
  SeriesHVR acc_prof_mean, acc_prof_median, acc_prof_sd, acc_prof_skew, acc_prof_kurt;
  SeriesHVR amp_dur_ratio;                  // S34
  SeriesHVR pkvel_amp_ratio;                // S35
  SeriesHVR pkvel_dur_ratio;                // S36
  SeriesHVR pkvel_mnvel_ratio;              // S37
  std::vector<double> pkvel_noise_ratio;    // S38
  std::vector<double> acc_dec_dur_ratio;    // S39
  SeriesHVR pkacc_pkdec_ratio;              // S40
  MainSequenceFits main_seq;                // S41-S46
  ReadingBehavior reading;                  // S47-S52
};

// `kept` feeds S01-S46; the reading-behavior rates see kept + large.
// `all_segments` (time-ordered, pre-filter) pins the local-noise windows to
// the previous saccade/oscillation boundary.
SaccadeFeatures compute_saccade_features(std::span<const SaccadeView> kept,
                                         std::span<const SaccadeView> large,
                                         const KinematicTraces& traces,
                                         std::span<const EventSegment> all_segments,
                                         double recording_duration_s,
                                         double amplitude_bound_deg = 8.0);

}  // namespace gaze

#endif
