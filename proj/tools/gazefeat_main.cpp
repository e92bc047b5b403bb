// gazefeat: batch extraction of eye-movement features from gaze recordings
// and test-retest reliability analysis of the resulting feature tables.

#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaze/io.hpp"
#include "gaze/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOpts {
  std::string config_path;
  double rate_hz = 0;  // 0 = infer from timestamps
};

std::map<std::string, std::string> load_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) return {};
  return gaze::parse_config_file(opts.config_path);
}

std::optional<double> expected_rate(const CommonOpts& opts) {
  if (opts.rate_hz > 0) return opts.rate_hz;
  return std::nullopt;
}

// subject/session from a file name like "sub04_2.csv"; a stem without the
// trailing _<number> becomes subject with session "1"
void infer_identity(const fs::path& path, std::string* subject, std::string* session) {
  const std::string stem = path.stem().string();
  const std::size_t us = stem.rfind('_');
  if (us != std::string::npos && us + 1 < stem.size() &&
      stem.find_first_not_of("0123456789", us + 1) == std::string::npos) {
    *subject = stem.substr(0, us);
    *session = stem.substr(us + 1);
  } else {
    *subject = stem;
    *session = "1";
  }
}

int run_classify(const std::string& input, const std::string& out_path,
                 const CommonOpts& opts) {
  gaze::ExtractConfig cfg;
  gaze::apply_config(load_config(opts), &cfg);
  gaze::GazeRecording rec = gaze::load_recording(input, expected_rate(opts));
  const auto filled = gaze::interpolate_gaps(rec, cfg.max_gap_ms);
  const auto traces = gaze::compute_kinematics(filled, cfg.smoothing);
  const auto segments = gaze::classify(traces, cfg.classifier);
  if (segments.empty())
    std::cerr << "warning: no events classified (recording too short or featureless)\n";
  gaze::write_segments(out_path, segments);
  std::cout << "wrote " << segments.size() << " segments to " << out_path << "\n";
  return 0;
}

int run_extract(const std::vector<std::string>& inputs, const std::string& out_path,
                std::string subject, std::string session, const CommonOpts& opts) {
  gaze::ExtractConfig cfg;
  gaze::apply_config(load_config(opts), &cfg);

  std::vector<fs::path> files;
  for (const auto& input : inputs) {
    const fs::path p(input);
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p))
        if (e.path().extension() == ".csv") files.push_back(e.path());
    } else {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::invalid_argument("extract: no input recordings");

  std::vector<gaze::FeatureVector> vectors;
  for (const auto& f : files) {
    gaze::GazeRecording rec = gaze::load_recording(f.string(), expected_rate(opts));
    if (!subject.empty() && files.size() == 1) {
      rec.subject_id = subject;
      rec.session_id = session.empty() ? "1" : session;
    } else {
      infer_identity(f, &rec.subject_id, &rec.session_id);
    }
    gaze::FeatureVector fv = gaze::extract(rec, cfg);
    if (!fv.diagnostic.empty())
      std::cerr << "warning: " << f.string() << ": " << fv.diagnostic
                << " (all features missing)\n";
    vectors.push_back(std::move(fv));
  }
  gaze::write_features(out_path, vectors);
  std::cout << "wrote features for " << vectors.size() << " recording(s) to " << out_path
            << "\n";
  return 0;
}

int run_aggregate(const std::vector<std::string>& inputs, const std::string& out_path) {
  std::vector<gaze::FeatureVector> all;
  for (const auto& input : inputs) {
    auto part = gaze::read_features(input);
    all.insert(all.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  gaze::write_features(out_path, all);
  std::cout << "aggregated " << all.size() << " recording(s) into " << out_path << "\n";
  return 0;
}

int run_reliability(const std::string& input, const std::string& out_path,
                    const CommonOpts& opts) {
  gaze::ReliabilityConfig cfg;
  gaze::apply_config(load_config(opts), &cfg);
  const gaze::PopulationTable table = gaze::read_population_table(input);
  if (table.sessions().size() < 2)
    std::cerr << "warning: table has " << table.sessions().size()
              << " session(s); reliability needs two\n";
  const auto reports = gaze::reliability_report(table, cfg);
  gaze::write_report(out_path, reports);
  std::cout << "wrote " << reports.size() << " report rows to " << out_path << "\n";
  return 0;
}

int run_synth(const std::string& out_path, const std::string& truth_path,
              std::uint64_t seed, bool seed_given, const CommonOpts& opts) {
  gaze::SynthSpec spec;
  gaze::apply_config(load_config(opts), &spec);
  if (seed_given) spec.seed = seed;
  const gaze::SynthResult result = gaze::synthesize(spec);
  gaze::write_recording(out_path, result.rec);
  if (!truth_path.empty()) gaze::write_segments(truth_path, result.truth);
  std::cout << "wrote " << result.rec.size() << " samples (" << result.saccades.size()
            << " planted saccades) to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eye-movement feature extraction and reliability analysis"};
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--config", common.config_path, "key = value configuration file");
  app.add_option("--rate", common.rate_hz, "expected sample rate in Hz (validated against the data)");

  std::string input, out_path, truth_path, subject, session;
  std::vector<std::string> inputs;
  std::uint64_t seed = 1;

  auto* c_classify = app.add_subcommand("classify", "segment one recording into events");
  c_classify->add_option("recording", input, "recording CSV")->required();
  c_classify->add_option("--out", out_path, "segment CSV path")->required();

  auto* c_extract = app.add_subcommand("extract", "extract the full feature set");
  c_extract->add_option("inputs", inputs, "recording CSV file(s) or directories")->required();
  c_extract->add_option("--out", out_path, "feature CSV path")->required();
  c_extract->add_option("--subject", subject, "subject id (single-file input)");
  c_extract->add_option("--session", session, "session id (single-file input)");

  auto* c_aggregate = app.add_subcommand("aggregate", "merge feature CSVs into one table");
  c_aggregate->add_option("inputs", inputs, "feature CSV files")->required();
  c_aggregate->add_option("--out", out_path, "table CSV path")->required();

  auto* c_reliability =
      app.add_subcommand("reliability", "population summary and test-retest report");
  c_reliability->add_option("table", input, "long-format feature table CSV")->required();
  c_reliability->add_option("--out", out_path, "report CSV path")->required();

  auto* c_synth = app.add_subcommand("synth", "generate a synthetic reading recording");
  c_synth->add_option("--out", out_path, "recording CSV path")->required();
  c_synth->add_option("--truth", truth_path, "ground-truth segment CSV path");
  auto* seed_opt = c_synth->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_classify->parsed()) return run_classify(input, out_path, common);
    if (c_extract->parsed()) return run_extract(inputs, out_path, subject, session, common);
    if (c_aggregate->parsed()) return run_aggregate(inputs, out_path);
    if (c_reliability->parsed()) return run_reliability(input, out_path, common);
    if (c_synth->parsed())
      return run_synth(out_path, truth_path, seed, seed_opt->count() > 0, common);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
