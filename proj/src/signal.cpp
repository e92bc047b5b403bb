#include "gaze/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace gaze {

double GazeRecording::validity_fraction() const {
  if (valid.empty()) return 0;
  std::size_t n = 0;
  for (auto v : valid) n += v ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(valid.size());
}

GazeRecording interpolate_gaps(const GazeRecording& rec, double max_gap_ms) {
  if (rec.size() < 2) throw std::invalid_argument("interpolate_gaps: empty recording");
  if (rec.sample_rate_hz <= 0) throw std::invalid_argument("interpolate_gaps: bad sample rate");
  if (max_gap_ms < 0) throw std::invalid_argument("interpolate_gaps: negative max_gap_ms");
  if (rec.v_pos.size() != rec.size() || rec.valid.size() != rec.size())
    throw std::invalid_argument("interpolate_gaps: inconsistent trace lengths");

  GazeRecording out = rec;
  const std::size_t n = rec.size();
  const double ms_per_sample = 1000.0 / rec.sample_rate_hz;

  std::size_t i = 0;
  while (i < n) {
    if (out.valid[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !out.valid[j]) ++j;
    // invalid run [i, j)
    const double gap_ms = static_cast<double>(j - i) * ms_per_sample;
    const bool bounded = i > 0 && j < n;
    if (bounded && gap_ms <= max_gap_ms) {
      const double h0 = out.h_pos[i - 1], h1 = out.h_pos[j];
      const double v0 = out.v_pos[i - 1], v1 = out.v_pos[j];
      const double span = static_cast<double>(j - (i - 1));
      for (std::size_t k = i; k < j; ++k) {
        const double f = static_cast<double>(k - (i - 1)) / span;
        out.h_pos[k] = h0 + f * (h1 - h0);
        out.v_pos[k] = v0 + f * (v1 - v0);
        out.valid[k] = 1;
      }
    }
    i = j;
  }
  return out;
}

namespace {

// Savitzky-Golay weights for one window shape: rows are the fitted value
// and first derivative at the evaluation point (offset `left` inside a
// window of `len` samples).
struct SgWeights {
  std::vector<double> value;
  std::vector<double> deriv;
};

SgWeights sg_weights(int left, int len, int order) {
  Eigen::MatrixXd X(len, order + 1);
  for (int i = 0; i < len; ++i) {
    const double t = static_cast<double>(i - left);
    double p = 1;
    for (int j = 0; j <= order; ++j) {
      X(i, j) = p;
      p *= t;
    }
  }
  // (X^T X)^-1 X^T; row 0 evaluates the fit at t=0, row 1 its derivative
  Eigen::MatrixXd pinv = (X.transpose() * X).ldlt().solve(X.transpose());
  SgWeights w;
  w.value.assign(len, 0.0);
  w.deriv.assign(len, 0.0);
  for (int i = 0; i < len; ++i) {
    w.value[i] = pinv(0, i);
    w.deriv[i] = pinv(1, i);
  }
  return w;
}

class SgFilter {
 public:
  SgFilter(int half, int order) : half_(half), order_(order) {
    table_.resize((half + 1) * (half + 1));
    for (int l = 0; l <= half; ++l)
      for (int r = 0; r <= half; ++r)
        if (l + r + 1 > order) table_[l * (half + 1) + r] = sg_weights(l, l + r + 1, order);
  }

  // smooth + differentiate one valid run [a, b] of src, writing the fitted
  // value and scaled derivative; windows clip at the run boundaries
  void run(const std::vector<double>& src, std::size_t a, std::size_t b, double deriv_scale,
           std::vector<double>* smooth, std::vector<double>* deriv) const {
    for (std::size_t j = a; j <= b; ++j) {
      const int l = static_cast<int>(std::min<std::size_t>(j - a, half_));
      const int r = static_cast<int>(std::min<std::size_t>(b - j, half_));
      if (l + r + 1 <= order_) {
        if (smooth) (*smooth)[j] = missing();
        if (deriv) (*deriv)[j] = missing();
        continue;
      }
      const SgWeights& w = table_[l * (half_ + 1) + r];
      double sv = 0, sd = 0;
      for (int i = -l; i <= r; ++i) {
        const double x = src[j + i];
        sv += w.value[i + l] * x;
        sd += w.deriv[i + l] * x;
      }
      if (smooth) (*smooth)[j] = sv;
      if (deriv) (*deriv)[j] = sd * deriv_scale;
    }
  }

 private:
  int half_;
  int order_;
  std::vector<SgWeights> table_;
};

}  // namespace

KinematicTraces compute_kinematics(const GazeRecording& rec, const SmoothingConfig& cfg) {
  if (rec.sample_rate_hz <= 0) throw std::invalid_argument("compute_kinematics: bad sample rate");
  if (rec.size() < 2) throw std::invalid_argument("compute_kinematics: empty recording");
  if (rec.v_pos.size() != rec.size() || rec.valid.size() != rec.size())
    throw std::invalid_argument("compute_kinematics: inconsistent trace lengths");
  if (cfg.poly_order < 2) throw std::invalid_argument("compute_kinematics: poly order too low");

  int window = static_cast<int>(std::lround(cfg.window_ms * rec.sample_rate_hz / 1000.0));
  if (window % 2 == 0) ++window;
  window = std::max(window, cfg.poly_order + 3);
  if (static_cast<std::size_t>(window) > rec.size())
    throw std::invalid_argument("compute_kinematics: window larger than recording");

  const std::size_t n = rec.size();
  KinematicTraces tr;
  tr.sample_rate_hz = rec.sample_rate_hz;
  tr.valid = rec.valid;
  tr.raw_h = rec.h_pos;
  tr.raw_v = rec.v_pos;
  for (auto* v : {&tr.pos_h, &tr.pos_v, &tr.pos_r, &tr.vel_h, &tr.vel_v, &tr.vel_r,
                  &tr.acc_h, &tr.acc_v, &tr.acc_r})
    v->assign(n, missing());

  const SgFilter filter(window / 2, cfg.poly_order);
  const double rate = rec.sample_rate_hz;

  std::size_t i = 0;
  while (i < n) {
    if (!rec.valid[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && rec.valid[j + 1]) ++j;
    // valid run [i, j]
    filter.run(rec.h_pos, i, j, rate, &tr.pos_h, &tr.vel_h);
    filter.run(rec.v_pos, i, j, rate, &tr.pos_v, &tr.vel_v);
    filter.run(tr.vel_h, i, j, rate, nullptr, &tr.acc_h);
    filter.run(tr.vel_v, i, j, rate, nullptr, &tr.acc_v);
    i = j + 1;
  }

  for (std::size_t k = 0; k < n; ++k) {
    if (!is_missing(tr.pos_h[k])) tr.pos_r[k] = std::hypot(tr.pos_h[k], tr.pos_v[k]);
    if (!is_missing(tr.vel_h[k])) tr.vel_r[k] = std::hypot(tr.vel_h[k], tr.vel_v[k]);
    if (!is_missing(tr.acc_h[k])) tr.acc_r[k] = std::hypot(tr.acc_h[k], tr.acc_v[k]);
  }
  return tr;
}

}  // namespace gaze
