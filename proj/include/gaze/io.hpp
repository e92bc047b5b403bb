#ifndef GAZE_IO_HPP
#define GAZE_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaze/classify.hpp"
#include "gaze/extract.hpp"
#include "gaze/reliability.hpp"
#include "gaze/signal.hpp"
#include "gaze/synth.hpp"

namespace gaze {

// Recording CSV: header `t_ms,x_deg,y_deg,valid`, one row per sample,
// valid in {0,1}; position fields of invalid rows may be NA. The sample
// rate is inferred from the median timestamp delta; a configured rate that
// disagrees by more than 1% is an error, as are non-monotone timestamps.
GazeRecording load_recording(const std::string& path,
                             std::optional<double> expected_rate_hz = std::nullopt);
void write_recording(const std::string& path, const GazeRecording& rec);

// Segment CSV: `kind,start_idx,end_idx,parent_start_idx` with kind in
// {fixation, saccade, pso}; parent empty except for oscillations.
void write_segments(const std::string& path, const std::vector<EventSegment>& segments);
std::vector<EventSegment> read_segments(const std::string& path);

// Long-format feature CSV: `subject,session,feature_id,value`, missing
// written as NA. Reading rejects unknown feature ids.
void write_features(const std::string& path, const std::vector<FeatureVector>& vectors);
std::vector<FeatureVector> read_features(const std::string& path);

// Same rows loaded straight into the population table.
PopulationTable read_population_table(const std::string& path);

// Report CSV mirroring the analysis tables:
// `feature_id,median,iqr,max_p,transform,is_normal,reliability_kind,value,band`.
void write_report(const std::string& path,
                  const std::vector<FeatureReliabilityReport>& reports);

// Plain-text `key = value` configuration with '#' comments.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config(const std::map<std::string, std::string>& kv, ExtractConfig* cfg);
void apply_config(const std::map<std::string, std::string>& kv, ReliabilityConfig* cfg);
void apply_config(const std::map<std::string, std::string>& kv, SynthSpec* spec);

// number formatting shared by every CSV writer ("NA" for missing)
std::string format_value(double v);

}  // namespace gaze

#endif
