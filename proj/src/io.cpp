#include "gaze/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gaze/catalog.hpp"

namespace gaze {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\r') {
      // tolerate CRLF input; output is always LF
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& s, const std::string& what) {
  const std::string t = trim(s);
  if (t == "NA" || t.empty()) return missing();
  try {
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::invalid_argument("malformed " + what + ": '" + s + "'");
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // keep LF line endings everywhere
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::string format_value(double v) {
  if (is_missing(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

GazeRecording load_recording(const std::string& path, std::optional<double> expected_rate_hz) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty file");
  {
    auto header = split_csv_line(line);
    for (auto& h : header) h = trim(h);
    if (header.size() != 4 || header[0] != "t_ms" || header[1] != "x_deg" ||
        header[2] != "y_deg" || header[3] != "valid")
      throw std::invalid_argument(path + ": expected header t_ms,x_deg,y_deg,valid");
  }

  GazeRecording rec;
  std::vector<double> t_ms;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected 4 fields");
    const double t = parse_double(f[0], "t_ms");
    if (is_missing(t))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": missing timestamp");
    const std::string vs = trim(f[3]);
    if (vs != "0" && vs != "1")
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": valid must be 0 or 1");
    const bool valid = vs == "1";
    double x = parse_double(f[1], "x_deg");
    double y = parse_double(f[2], "y_deg");
    if (valid && (is_missing(x) || is_missing(y)))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": valid sample without position");
    if (is_missing(x)) x = 0;
    if (is_missing(y)) y = 0;
    t_ms.push_back(t);
    rec.h_pos.push_back(x);
    rec.v_pos.push_back(y);
    rec.valid.push_back(valid ? 1 : 0);
  }
  if (t_ms.size() < 2) throw std::invalid_argument(path + ": fewer than 2 samples");

  std::vector<double> dts(t_ms.size() - 1);
  for (std::size_t i = 1; i < t_ms.size(); ++i) {
    dts[i - 1] = t_ms[i] - t_ms[i - 1];
    if (dts[i - 1] <= 0)
      throw std::invalid_argument(path + ": non-monotone timestamps at row " +
                                  std::to_string(i + 1));
  }
  std::sort(dts.begin(), dts.end());
  const double med_dt = dts.size() % 2 == 1
                            ? dts[dts.size() / 2]
                            : 0.5 * (dts[dts.size() / 2 - 1] + dts[dts.size() / 2]);
  rec.sample_rate_hz = 1000.0 / med_dt;
  if (expected_rate_hz &&
      std::fabs(rec.sample_rate_hz - *expected_rate_hz) > 0.01 * (*expected_rate_hz))
    throw std::invalid_argument(path + ": sample rate " + format_value(rec.sample_rate_hz) +
                                " Hz disagrees with configured " +
                                format_value(*expected_rate_hz) + " Hz by more than 1%");
  return rec;
}

void write_recording(const std::string& path, const GazeRecording& rec) {
  std::ofstream out = open_output(path);
  out << "t_ms,x_deg,y_deg,valid\n";
  const double ms_per_sample = 1000.0 / rec.sample_rate_hz;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    out << format_value(static_cast<double>(i) * ms_per_sample) << ','
        << format_value(rec.h_pos[i]) << ',' << format_value(rec.v_pos[i]) << ','
        << (rec.valid[i] ? '1' : '0') << '\n';
  }
}

namespace {

std::string_view kind_name(EventKind k) {
  switch (k) {
    case EventKind::Fixation: return "fixation";
    case EventKind::Saccade: return "saccade";
    case EventKind::Pso: return "pso";
  }
  return "";
}

EventKind kind_from(const std::string& s) {
  if (s == "fixation") return EventKind::Fixation;
  if (s == "saccade") return EventKind::Saccade;
  if (s == "pso") return EventKind::Pso;
  throw std::invalid_argument("unknown event kind: " + s);
}

}  // namespace

void write_segments(const std::string& path, const std::vector<EventSegment>& segments) {
  std::ofstream out = open_output(path);
  out << "kind,start_idx,end_idx,parent_start_idx\n";
  for (const auto& s : segments) {
    out << kind_name(s.kind) << ',' << s.start_idx << ',' << s.end_idx << ',';
    if (s.parent_start) out << *s.parent_start;
    out << '\n';
  }
}

std::vector<EventSegment> read_segments(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "kind,start_idx,end_idx,parent_start_idx")
    throw std::invalid_argument(path + ": expected header kind,start_idx,end_idx,parent_start_idx");
  std::vector<EventSegment> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected 4 fields");
    EventSegment seg;
    seg.kind = kind_from(trim(f[0]));
    seg.start_idx = static_cast<std::size_t>(std::stoull(trim(f[1])));
    seg.end_idx = static_cast<std::size_t>(std::stoull(trim(f[2])));
    const std::string p = trim(f[3]);
    if (!p.empty()) seg.parent_start = static_cast<std::size_t>(std::stoull(p));
    out.push_back(seg);
  }
  return out;
}

void write_features(const std::string& path, const std::vector<FeatureVector>& vectors) {
  std::ofstream out = open_output(path);
  out << "subject,session,feature_id,value\n";
  const auto& catalog = feature_catalog();
  for (const auto& fv : vectors)
    for (std::size_t i = 0; i < catalog.size(); ++i)
      out << fv.subject_id << ',' << fv.session_id << ',' << catalog[i].id << ','
          << format_value(fv.values[i]) << '\n';
}

namespace {

struct FeatureRow {
  std::string subject, session;
  int feature;
  double value;
};

std::vector<FeatureRow> read_feature_rows(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "subject,session,feature_id,value")
    throw std::invalid_argument(path + ": expected header subject,session,feature_id,value");
  std::vector<FeatureRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected 4 fields");
    const std::string id = trim(f[2]);
    const int idx = catalog_index(id);
    if (idx < 0)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": unknown feature id '" + id + "'");
    rows.push_back({trim(f[0]), trim(f[1]), idx, parse_double(f[3], "value")});
  }
  return rows;
}

}  // namespace

std::vector<FeatureVector> read_features(const std::string& path) {
  std::vector<FeatureVector> out;
  const auto key_of = [&](const FeatureRow& r) { return r.subject + "\x1f" + r.session; };
  std::map<std::string, std::size_t> index;
  for (const auto& r : read_feature_rows(path)) {
    const std::string key = key_of(r);
    auto it = index.find(key);
    if (it == index.end()) {
      FeatureVector fv;
      fv.subject_id = r.subject;
      fv.session_id = r.session;
      fv.values.assign(feature_catalog().size(), missing());
      index.emplace(key, out.size());
      out.push_back(std::move(fv));
      it = index.find(key);
    }
    out[it->second].values[static_cast<std::size_t>(r.feature)] = r.value;
  }
  return out;
}

PopulationTable read_population_table(const std::string& path) {
  PopulationTable table(feature_catalog().size());
  for (const auto& r : read_feature_rows(path))
    table.insert(r.subject, r.session, static_cast<std::size_t>(r.feature), r.value);
  return table;
}

void write_report(const std::string& path,
                  const std::vector<FeatureReliabilityReport>& reports) {
  std::ofstream out = open_output(path);
  out << "feature_id,median,iqr,max_p,transform,is_normal,reliability_kind,value,band\n";
  for (const auto& r : reports) {
    out << r.feature_id << ',' << format_value(r.median) << ',' << format_value(r.iqr) << ','
        << format_value(r.max_p) << ',' << r.transform << ',' << (r.is_normal ? "1" : "0")
        << ',' << (r.kind == ReliabilityKind::ICC ? "ICC" : "W") << ','
        << format_value(r.value) << ',' << (r.band ? band_name(*r.band) : "") << '\n';
  }
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

namespace {

void get(const std::map<std::string, std::string>& kv, const std::string& key, double* dst) {
  const auto it = kv.find(key);
  if (it != kv.end()) *dst = parse_double(it->second, key);
}

void get(const std::map<std::string, std::string>& kv, const std::string& key, bool* dst) {
  const auto it = kv.find(key);
  if (it == kv.end()) return;
  if (it->second == "true" || it->second == "1")
    *dst = true;
  else if (it->second == "false" || it->second == "0")
    *dst = false;
  else
    throw std::invalid_argument(key + ": expected a boolean");
}

}  // namespace

void apply_config(const std::map<std::string, std::string>& kv, ExtractConfig* cfg) {
  get(kv, "signal.max_gap_ms", &cfg->max_gap_ms);
  get(kv, "signal.window_ms", &cfg->smoothing.window_ms);
  get(kv, "classifier.peak_threshold_init_deg_s", &cfg->classifier.peak_threshold_init_deg_s);
  get(kv, "classifier.peak_threshold_floor_deg_s", &cfg->classifier.peak_threshold_floor_deg_s);
  get(kv, "classifier.onset_offset_factor", &cfg->classifier.saccade_onset_offset_factor);
  get(kv, "classifier.min_fixation_ms", &cfg->classifier.min_fixation_ms);
  get(kv, "classifier.min_saccade_ms", &cfg->classifier.min_saccade_ms);
  get(kv, "classifier.max_pso_ms", &cfg->classifier.max_pso_ms);
  get(kv, "classifier.pso_slow_lo_deg_s", &cfg->classifier.pso_slow_lo_deg_s);
  get(kv, "classifier.pso_slow_hi_deg_s", &cfg->classifier.pso_slow_hi_deg_s);
  get(kv, "classifier.pso_mod_hi_deg_s", &cfg->classifier.pso_mod_hi_deg_s);
  get(kv, "classifier.drop_subthreshold_psos", &cfg->classifier.drop_subthreshold_psos);
  get(kv, "filter.max_saccade_duration_ms", &cfg->saccade_max_duration_ms);
  get(kv, "filter.max_saccade_amplitude_deg", &cfg->saccade_max_amplitude_deg);
}

void apply_config(const std::map<std::string, std::string>& kv, SynthSpec* spec) {
  if (const auto it = kv.find("synth.seed"); it != kv.end())
    spec->seed = std::stoull(it->second);
  double lines = static_cast<double>(spec->lines);
  double words = static_cast<double>(spec->words_per_line);
  get(kv, "synth.lines", &lines);
  get(kv, "synth.words_per_line", &words);
  spec->lines = static_cast<int>(lines);
  spec->words_per_line = static_cast<int>(words);
  get(kv, "synth.sample_rate_hz", &spec->sample_rate_hz);
  get(kv, "synth.word_step_deg", &spec->word_step_deg);
  get(kv, "synth.word_step_jitter_deg", &spec->word_step_jitter_deg);
  get(kv, "synth.line_width_deg", &spec->line_width_deg);
  get(kv, "synth.line_height_deg", &spec->line_height_deg);
  get(kv, "synth.min_total_duration_s", &spec->min_total_duration_s);
  get(kv, "synth.fix_dur_mean_ms", &spec->fix_dur_mean_ms);
  get(kv, "synth.fix_dur_sd_ms", &spec->fix_dur_sd_ms);
  get(kv, "synth.drift_speed_deg_s", &spec->drift_speed_deg_s);
  get(kv, "synth.quad_drift_fraction", &spec->quad_drift_fraction);
  get(kv, "synth.ms_slope_deg_per_ms", &spec->ms_slope_deg_per_ms);
  get(kv, "synth.ms_intercept_deg", &spec->ms_intercept_deg);
  get(kv, "synth.pkvel_exponent", &spec->pkvel_exponent);
  get(kv, "synth.pkvel_coeff", &spec->pkvel_coeff);
  get(kv, "synth.pso_probability", &spec->pso_probability);
  get(kv, "synth.pso_freq_hz", &spec->pso_freq_hz);
  get(kv, "synth.pso_damping_ms", &spec->pso_damping_ms);
  get(kv, "synth.pso_duration_ms", &spec->pso_duration_ms);
  get(kv, "synth.pso_peak_vel_lo_deg_s", &spec->pso_peak_vel_lo_deg_s);
  get(kv, "synth.pso_peak_vel_hi_deg_s", &spec->pso_peak_vel_hi_deg_s);
  get(kv, "synth.noise_sd_deg", &spec->noise_sd_deg);
}

void apply_config(const std::map<std::string, std::string>& kv, ReliabilityConfig* cfg) {
  const auto it = kv.find("reliability.summary_sessions");
  if (it != kv.end()) {
    if (it->second == "first")
      cfg->summary_sessions = SummarySessions::First;
    else if (it->second == "both")
      cfg->summary_sessions = SummarySessions::Both;
    else
      throw std::invalid_argument("reliability.summary_sessions: expected first|both");
  }
}

}  // namespace gaze
