#ifndef GAZE_EXTRACT_HPP
#define GAZE_EXTRACT_HPP

#include <string>
#include <vector>

#include "gaze/catalog.hpp"
#include "gaze/classify.hpp"
#include "gaze/signal.hpp"

namespace gaze {

// The flat per-recording feature set: one value per catalog slot, missing
// slots are NaN. `diagnostic` is non-empty when the pipeline fell back to an
// all-missing vector.
struct FeatureVector {
  std::string subject_id;
  std::string session_id;
  std::vector<double> values;  // parallel to feature_catalog()
  std::string diagnostic;

  double at(std::string_view id) const;
  void set(std::string_view id, double v);
};

struct ExtractConfig {
  double max_gap_ms = 75.0;
  SmoothingConfig smoothing;
  ClassifierConfig classifier;
  double saccade_max_duration_ms = 70.0;  // post-filter bounds
  double saccade_max_amplitude_deg = 8.0;
};

// Full pipeline: gap interpolation, kinematics, classification, post-filter,
// the three feature families, distributional expansion.
FeatureVector extract(const GazeRecording& rec, const ExtractConfig& cfg = {});

// Same pipeline with a caller-provided segmentation (e.g. reference event
// boundaries) instead of the classifier.
FeatureVector extract_with_segments(const GazeRecording& rec,
                                    const std::vector<EventSegment>& segments,
                                    const ExtractConfig& cfg = {});

}  // namespace gaze

#endif
