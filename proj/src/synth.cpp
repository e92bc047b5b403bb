#include "gaze/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace gaze {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// minimum-jerk position profile, s(0) = 0, s(1) = 1, velocity 0 at both ends
double min_jerk(double t) {
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

struct Generator {
  const SynthSpec& spec;
  std::mt19937_64 rng;
  std::vector<double> h, v;
  std::vector<EventSegment> truth;
  std::vector<PlantedSaccade> saccades;
  double cur_h = 0, cur_v = 0;

  explicit Generator(const SynthSpec& s) : spec(s), rng(s.seed) {}

  double rate() const { return spec.sample_rate_hz; }

  void append_fixation(std::size_t n_samples) {
    if (n_samples == 0) return;
    std::normal_distribution<double> mag(spec.drift_speed_deg_s, spec.drift_speed_deg_s / 2);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double speed = std::clamp(mag(rng), 0.0, 3.0 * spec.drift_speed_deg_s);
    const double dir = angle(rng);
    const double dvh = speed * std::cos(dir);
    const double dvv = speed * std::sin(dir);
    double qh = 0, qv = 0;
    if (unit(rng) < spec.quad_drift_fraction) {
      const double qdir = angle(rng);
      const double dur_s = static_cast<double>(n_samples) / rate();
      const double q = 0.05 / std::max(dur_s * dur_s, 1e-6);  // ~0.05 deg of curvature
      qh = q * std::cos(qdir);
      qv = q * std::sin(qdir);
    }
    const std::size_t start = h.size();
    const double ah = cur_h, av = cur_v;
    for (std::size_t k = 0; k < n_samples; ++k) {
      const double u = static_cast<double>(k) / rate();
      h.push_back(ah + dvh * u + qh * u * u);
      v.push_back(av + dvv * u + qv * u * u);
    }
    truth.push_back({EventKind::Fixation, start, h.size() - 1, std::nullopt});
    const double u_end = static_cast<double>(n_samples) / rate();
    cur_h = ah + dvh * u_end + qh * u_end * u_end;
    cur_v = av + dvv * u_end + qv * u_end * u_end;
  }

  // returns the index of the planted saccade
  std::size_t append_saccade(double target_h, double target_v) {
    double dh = target_h - cur_h;
    double dv = target_v - cur_v;
    double amp = std::hypot(dh, dv);
    if (amp <= 0) throw std::invalid_argument("synthesize: zero-amplitude saccade");

    // duration in whole samples, then the amplitude re-solved so the planted
    // law holds exactly for the rounded duration
    std::size_t n;
    if (spec.pkvel_exponent > 0) {
      const double pk = spec.pkvel_coeff * std::pow(amp, spec.pkvel_exponent);
      const double dur_s = 1.875 * amp / pk;  // minimum-jerk peak = 1.875*amp/T
      n = std::max<std::size_t>(static_cast<std::size_t>(std::lround(dur_s * rate())), 6);
      const double t_s = static_cast<double>(n) / rate();
      amp = std::pow(1.875 / (spec.pkvel_coeff * t_s), 1.0 / (spec.pkvel_exponent - 1.0));
    } else {
      const double dur_ms = (amp - spec.ms_intercept_deg) / spec.ms_slope_deg_per_ms;
      n = std::max<std::size_t>(static_cast<std::size_t>(std::lround(dur_ms * rate() / 1000.0)), 6);
      amp = spec.ms_slope_deg_per_ms * (static_cast<double>(n) * 1000.0 / rate()) +
            spec.ms_intercept_deg;
      if (amp <= 0) throw std::invalid_argument("synthesize: planted law gives non-positive amplitude");
    }
    const double scale = amp / std::hypot(dh, dv);
    dh *= scale;
    dv *= scale;

    const std::size_t start = h.size();
    const double ah = cur_h, av = cur_v;
    for (std::size_t k = 0; k <= n; ++k) {
      const double s = min_jerk(static_cast<double>(k) / static_cast<double>(n));
      h.push_back(ah + dh * s);
      v.push_back(av + dv * s);
    }
    truth.push_back({EventKind::Saccade, start, h.size() - 1, std::nullopt});
    cur_h = ah + dh;
    cur_v = av + dv;

    PlantedSaccade ps;
    ps.start_idx = start;
    ps.end_idx = h.size() - 1;
    ps.amp_deg = amp;
    ps.dur_ms = static_cast<double>(n) * 1000.0 / rate();
    ps.pkvel_deg_s = 1.875 * amp / (static_cast<double>(n) / rate());
    saccades.push_back(ps);
    return saccades.size() - 1;
  }

  void append_pso(std::size_t parent_index, double dir_h, double dir_v) {
    std::uniform_real_distribution<double> pk_dist(spec.pso_peak_vel_lo_deg_s,
                                                   spec.pso_peak_vel_hi_deg_s);
    const double planted_pk = pk_dist(rng);
    const double omega = kTwoPi * spec.pso_freq_hz;
    const double tau = spec.pso_damping_ms / 1000.0;
    // scale the damped sine so its continuous peak equals the planted value
    const double u_star = std::atan(omega * tau) / omega;
    const double profile_peak = std::sin(omega * u_star) * std::exp(-u_star / tau);
    const double A = planted_pk / profile_peak;

    const double norm = std::hypot(dir_h, dir_v);
    const double uh = dir_h / norm, uv = dir_v / norm;
    const std::size_t n = std::max<std::size_t>(
        static_cast<std::size_t>(std::lround(spec.pso_duration_ms * rate() / 1000.0)), 4);

    const std::size_t start = h.size();
    const std::size_t parent_start = truth.back().start_idx;
    const double dt = 1.0 / rate();
    double prev_speed = 0, pos = 0, sampled_peak = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double u = static_cast<double>(k) * dt;
      const double speed = A * std::sin(omega * u) * std::exp(-u / tau);
      pos += 0.5 * (prev_speed + speed) * dt;
      prev_speed = speed;
      sampled_peak = std::max(sampled_peak, std::fabs(speed));
      h.push_back(cur_h + pos * uh);
      v.push_back(cur_v + pos * uv);
    }
    truth.push_back({EventKind::Pso, start, h.size() - 1, parent_start});
    cur_h += pos * uh;
    cur_v += pos * uv;
    saccades[parent_index].has_pso = true;
    saccades[parent_index].pso_pkvel_deg_s = sampled_peak;
  }

  std::size_t fixation_samples() {
    std::normal_distribution<double> dur(spec.fix_dur_mean_ms, spec.fix_dur_sd_ms);
    const double ms = std::clamp(dur(rng), 100.0, 450.0);
    return static_cast<std::size_t>(std::lround(ms * rate() / 1000.0));
  }
};

}  // namespace

SynthResult synthesize(const SynthSpec& spec) {
  if (spec.sample_rate_hz <= 0 || spec.lines < 1 || spec.words_per_line < 1)
    throw std::invalid_argument("synthesize: infeasible layout");
  if (spec.pso_probability < 0 || spec.pso_probability > 1)
    throw std::invalid_argument("synthesize: bad pso probability");
  if (spec.pkvel_exponent > 0 && (spec.pkvel_exponent >= 1.0 || spec.pkvel_coeff <= 0))
    throw std::invalid_argument("synthesize: peak-velocity law needs exponent in (0,1) and a positive coefficient");

  Generator gen(spec);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, spec.word_step_jitter_deg);

  gen.cur_h = -spec.line_width_deg / 2;
  gen.cur_v = 0;

  for (int line = 0; line < spec.lines; ++line) {
    for (int word = 0; word < spec.words_per_line; ++word) {
      gen.append_fixation(gen.fixation_samples());
      const bool last_word = word + 1 == spec.words_per_line;
      const bool last_line = line + 1 == spec.lines;
      if (last_word && last_line) break;
      double th, tv;
      if (last_word) {
        th = -spec.line_width_deg / 2;  // return sweep to the next line
        tv = -static_cast<double>(line + 1) * spec.line_height_deg;
      } else {
        th = gen.cur_h + std::max(spec.word_step_deg + jitter(gen.rng), 0.8);
        tv = -static_cast<double>(line) * spec.line_height_deg + 0.2 * jitter(gen.rng);
      }
      const double dir_h = th - gen.cur_h, dir_v = tv - gen.cur_v;
      const std::size_t si = gen.append_saccade(th, tv);
      const bool small = gen.saccades[si].amp_deg <= 8.0;
      if (small && unit(gen.rng) < spec.pso_probability) gen.append_pso(si, dir_h, dir_v);
    }
  }

  const std::size_t min_samples =
      static_cast<std::size_t>(spec.min_total_duration_s * spec.sample_rate_hz);
  const std::size_t tail = gen.h.size() < min_samples ? min_samples - gen.h.size()
                                                      : gen.fixation_samples();
  gen.append_fixation(std::max<std::size_t>(tail, 50));

  SynthResult out;
  out.rec.sample_rate_hz = spec.sample_rate_hz;
  out.rec.h_pos = std::move(gen.h);
  out.rec.v_pos = std::move(gen.v);
  out.rec.valid.assign(out.rec.h_pos.size(), 1);
  out.truth = std::move(gen.truth);
  out.saccades = std::move(gen.saccades);

  if (spec.noise_sd_deg > 0) {
    std::normal_distribution<double> noise(0.0, spec.noise_sd_deg);
    for (std::size_t i = 0; i < out.rec.size(); ++i) {
      out.rec.h_pos[i] += noise(gen.rng);
      out.rec.v_pos[i] += noise(gen.rng);
    }
  }
  return out;
}

}  // namespace gaze
