#ifndef GAZE_SYNTH_HPP
#define GAZE_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "gaze/classify.hpp"
#include "gaze/signal.hpp"

namespace gaze {

// Reading-like scanpath generator: rows of word fixations with drift,
// minimum-jerk saccades whose amplitude/duration follow a planted law,
// damped-sinusoid oscillations with planted peak velocities, Gaussian
// sample noise. Deterministic under the seed; returns ground-truth event
// boundaries alongside the recording.
struct SynthSpec {
  std::uint64_t seed = 1;
  double sample_rate_hz = 1000.0;

  // layout
  int lines = 6;
  int words_per_line = 8;
  double word_step_deg = 2.0;
  double word_step_jitter_deg = 0.5;
  double line_width_deg = 14.0;
  double line_height_deg = 1.0;
  double min_total_duration_s = 0.0;  // final fixation extends to reach this

  // fixations
  double fix_dur_mean_ms = 200.0;
  double fix_dur_sd_ms = 30.0;
  double drift_speed_deg_s = 0.5;
  double quad_drift_fraction = 0.3;

  // saccades: duration from the amplitude-duration law unless a positive
  // peak-velocity exponent is given, in which case durations realize
  // pkvel = pkvel_coeff * amp^pkvel_exponent under the minimum-jerk profile
  double ms_slope_deg_per_ms = 0.14;
  double ms_intercept_deg = -1.45;
  double pkvel_exponent = 0.0;
  double pkvel_coeff = 0.0;

  // post-saccadic oscillations (after small saccades only)
  double pso_probability = 0.6;
  double pso_freq_hz = 80.0;
  double pso_damping_ms = 6.0;
  double pso_duration_ms = 15.0;
  double pso_peak_vel_lo_deg_s = 24.0;
  double pso_peak_vel_hi_deg_s = 58.0;

  double noise_sd_deg = 0.0;
};

struct PlantedSaccade {
  std::size_t start_idx = 0, end_idx = 0;
  double amp_deg = 0;        // exact planted radial amplitude
  double dur_ms = 0;         // exact planted duration
  double pkvel_deg_s = 0;    // continuous-profile peak velocity
  bool has_pso = false;
  double pso_pkvel_deg_s = 0;  // peak over the sampled oscillation profile
};

struct SynthResult {
  GazeRecording rec;
  std::vector<EventSegment> truth;     // time-ordered, covers the recording
  std::vector<PlantedSaccade> saccades;
};

SynthResult synthesize(const SynthSpec& spec);

}  // namespace gaze

#endif
