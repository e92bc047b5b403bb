#ifndef GAZE_RELIABILITY_HPP
#define GAZE_RELIABILITY_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gaze/missing.hpp"
#include "gaze/stats.hpp"

namespace gaze {

// Subjects x 2 sessions x feature values (missing entries NaN), the input
// of the test-retest analysis.
class PopulationTable {
 public:
  explicit PopulationTable(std::size_t feature_count) : feature_count_(feature_count) {}

  // sessions are labeled by first appearance; more than two is an error
  void insert(const std::string& subject, const std::string& session,
              std::size_t feature_index, double value);

  const std::vector<std::string>& subjects() const { return subjects_; }
  const std::vector<std::string>& sessions() const { return sessions_; }
  std::size_t feature_count() const { return feature_count_; }

  double value(std::size_t subject, std::size_t session, std::size_t feature) const;

 private:
  std::size_t feature_count_;
  std::vector<std::string> subjects_, sessions_;
  std::vector<std::vector<double>> rows_;  // one row per (subject, session) seen
  std::unordered_map<std::uint64_t, std::size_t> row_index_;
  std::unordered_map<std::string, std::size_t> subject_index_;
};

struct VarianceComponents {
  double subject = 0, session = 0, error = 0;
  bool reml_converged = false;
};

// ICC(2,1), absolute agreement under the two-way random-effects model.
// Variance components by REML (Fisher scoring on the stratified restricted
// likelihood, components truncated at zero, ANOVA fallback after 500
// iterations). Requires >= 3 complete subject pairs; missing when the total
// variance is zero.
double icc_2_1(std::span<const std::array<double, 2>> pairs,
               VarianceComponents* components = nullptr);

// Kendall's coefficient of concordance for two raters (sessions) ranking
// the subjects, with mid-ranks and the standard tie correction. Missing
// when both sessions are fully tied.
double kendalls_w(std::span<const std::array<double, 2>> pairs);

enum class CicchettiBand { Excellent, Good, Fair, Poor };

// [0.75, 1] excellent, [0.60, 0.75) good, [0.40, 0.60) fair, below poor.
CicchettiBand cicchetti_band(double icc);
std::string_view band_name(CicchettiBand b);

struct NormalityAssessment {
  double max_p = 0;
  std::string transform;  // "raw", "log", "win+sqrt_refl", ...
  bool is_normal = false;
  bool inconclusive = false;  // fewer than 30 values
  // chosen transform with frozen parameters, applicable to new values
  std::function<double(double)> apply;
};

// The normalization pipeline: raw test, transform battery, then the same on
// Winsorized values; best p wins, raw wins ties.
NormalityAssessment assess_normality(std::span<const double> values, FeatureKind kind);

enum class ReliabilityKind { ICC, KendallW };

struct FeatureReliabilityReport {
  std::string feature_id;
  double median = missing();
  double iqr = missing();
  double max_p = missing();
  std::string transform;
  bool is_normal = false;
  ReliabilityKind kind = ReliabilityKind::KendallW;
  double value = missing();
  std::optional<CicchettiBand> band;
  std::string note;
};

enum class SummarySessions { First, Both };

struct ReliabilityConfig {
  SummarySessions summary_sessions = SummarySessions::First;
};

// One report row per catalog feature; per-feature failures produce missing
// rows and never abort the batch.
std::vector<FeatureReliabilityReport> reliability_report(const PopulationTable& table,
                                                         const ReliabilityConfig& cfg = {});

}  // namespace gaze

#endif
