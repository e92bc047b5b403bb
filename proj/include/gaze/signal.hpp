#ifndef GAZE_SIGNAL_HPP
#define GAZE_SIGNAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gaze/missing.hpp"

namespace gaze {

// Uniformly sampled monocular gaze positions in degrees of visual angle.
// Timestamps are implicit: sample j is at j / sample_rate_hz seconds.
struct GazeRecording {
  double sample_rate_hz = 0;
  std::vector<double> h_pos;  // degrees
  std::vector<double> v_pos;  // degrees
  std::vector<std::uint8_t> valid;
  std::string subject_id;
  std::string session_id;

  std::size_t size() const { return h_pos.size(); }
  double duration_s() const {
    return static_cast<double>(size()) / sample_rate_hz;
  }
  double validity_fraction() const;
};

// Smoothed position plus velocity and acceleration traces for the
// horizontal, vertical and radial components. Radial kinematics are the
// Euclidean norm of the component traces, so vel_r >= |vel_h|, |vel_v| at
// every sample (likewise acceleration). Samples inside unfilled gaps are
// NaN in every trace.
struct KinematicTraces {
  double sample_rate_hz = 0;
  std::vector<double> pos_h, pos_v, pos_r;
  std::vector<double> vel_h, vel_v, vel_r;
  std::vector<double> acc_h, acc_v, acc_r;
  std::vector<std::uint8_t> valid;
  // unsmoothed positions, kept for the saccade tail-inconsistency feature
  std::vector<double> raw_h, raw_v;

  std::size_t size() const { return pos_h.size(); }
};

struct SmoothingConfig {
  // Savitzky-Golay differentiation window, scaled to the sample rate
  // (11 samples at 1000 Hz). Not a value from any reference dataset;
  // configurable because filtering influences how oscillations appear.
  double window_ms = 11.0;
  int poly_order = 2;
};

// Linearly fills invalid runs not longer than max_gap_ms that are bounded
// by valid samples on both sides; longer runs (and runs touching the
// recording edges) stay invalid. Throws on an empty recording.
GazeRecording interpolate_gaps(const GazeRecording& rec, double max_gap_ms);

// Savitzky-Golay smoothing and differentiation per maximal valid run, with
// one-sided stencils at run boundaries. Throws when the recording is
// shorter than the smoothing window or the sample rate is not positive.
KinematicTraces compute_kinematics(const GazeRecording& rec,
                                   const SmoothingConfig& cfg = {});

}  // namespace gaze

#endif
