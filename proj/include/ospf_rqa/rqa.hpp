#pragma once

// Recurrence plots and recurrence quantification measures over delay
// embedded scalar series. Everything here is a pure function of its inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ospf_rqa/errors.hpp"

namespace ospf_rqa {

enum class Norm { euclidean, maximum };

inline std::string_view to_string(Norm n) {
  return n == Norm::euclidean ? "euclidean" : "maximum";
}

inline Norm parse_norm(std::string_view s) {
  if (s == "euclidean") return Norm::euclidean;
  if (s == "maximum" || s == "max") return Norm::maximum;
  throw std::invalid_argument("unknown norm: " + std::string(s));
}

struct EmbedParams {
  int tau = 1;
  int m = 2;
  double epsilon = 0.2;  // in z-normalized units
  Norm norm = Norm::euclidean;
  int theiler = 1;  // diagonals with |i-j| < theiler are excluded from line stats
  int l_min = 2;
  int v_min = 2;

  void validate() const {
    if (tau < 1) throw std::invalid_argument("tau must be >= 1");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
      throw std::invalid_argument("epsilon must be a positive finite number");
    if (theiler < 0) throw std::invalid_argument("theiler must be >= 0");
    if (l_min < 2 || v_min < 2)
      throw std::invalid_argument("l_min and v_min must be >= 2");
  }

  // Smallest series length usable with these parameters.
  std::size_t min_series_length() const {
    return static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(tau) + 2;
  }

  bool operator==(const EmbedParams&) const = default;
};

/// Finite, non-empty scalar series. Immutable once built.
class Series {
 public:
  explicit Series(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("series must be non-empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]))
        throw std::invalid_argument("series value at index " +
                                    std::to_string(i) + " is not finite");
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

struct NormalizedSeries {
  Series series;
  bool degenerate = false;  // input had zero variance; output is all zeros
};

/// Shift to zero mean and scale to unit population standard deviation.
inline NormalizedSeries znormalize(const Series& s) {
  const auto v = s.values();
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / n);
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi || !(sd > 0.0)) {
    return {Series(std::vector<double>(v.size(), 0.0)), true};
  }
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(),
                 [&](double x) { return (x - mean) / sd; });
  return {Series(std::move(out)), false};
}

/// Row-major storage of N points of dimension `dim`.
class EmbeddedTrajectory {
 public:
  EmbeddedTrajectory(std::size_t dim, std::vector<double> coords)
      : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0 || coords_.size() % dim_ != 0)
      throw std::invalid_argument("trajectory coordinates do not match dimension");
  }

  std::size_t size() const noexcept { return coords_.size() / dim_; }
  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

inline EmbeddedTrajectory embed(const Series& s, int tau, int m) {
  if (tau < 1 || m < 1) throw std::invalid_argument("tau and m must be >= 1");
  const std::size_t span = static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(tau);
  const std::size_t required = span + 2;
  if (s.size() < required) {
    throw SizingError("series of length " + std::to_string(s.size()) +
                          " is too short to embed with m=" + std::to_string(m) +
                          ", tau=" + std::to_string(tau) +
                          "; at least " + std::to_string(required) +
                          " values are required",
                      required);
  }
  const std::size_t n = s.size() - span;
  std::vector<double> coords;
  coords.reserve(n * static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) coords.push_back(s[i + static_cast<std::size_t>(k * tau)]);
  return {static_cast<std::size_t>(m), std::move(coords)};
}

inline double distance(std::span<const double> a, std::span<const double> b, Norm norm) {
  double acc = 0.0;
  if (norm == Norm::maximum) {
    for (std::size_t k = 0; k < a.size(); ++k) acc = std::max(acc, std::abs(a[k] - b[k]));
    return acc;
  }
  for (std::size_t k = 0; k < a.size(); ++k) acc += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(acc);
}

/// Symmetric, reflexive N x N boolean matrix.
class RecurrenceMatrix {
 public:
  RecurrenceMatrix(std::size_t n, std::vector<std::uint8_t> bits, EmbedParams params = {})
      : n_(n), bits_(std::move(bits)), params_(params) {
    if (bits_.size() != n_ * n_) throw std::invalid_argument("recurrence bits must be n*n");
  }

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * n_ + j] != 0; }
  const EmbedParams& params() const noexcept { return params_; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t recurrence_count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> bits_;
  EmbedParams params_;
};

/// R(i,j) = 1 iff ||x_i - x_j|| <= epsilon. Ties count as recurrent.
inline RecurrenceMatrix recurrence_matrix(const EmbeddedTrajectory& traj, double epsilon,
                                          Norm norm, EmbedParams params = {}) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const std::size_t n = traj.size();
  if (n < 2) throw SizingError("recurrence matrix needs at least 2 points", 2);
  params.epsilon = epsilon;
  params.norm = norm;
  std::vector<std::uint8_t> bits(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bits[i * n + i] = 1;
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint8_t r = distance(traj.point(i), traj.point(j), norm) <= epsilon ? 1 : 0;
      bits[i * n + j] = r;
      bits[j * n + i] = r;
    }
  }
  return {n, std::move(bits), params};
}

enum class LineKind { diagonal, vertical, white_vertical };

struct LineHistogram {
  LineKind kind = LineKind::diagonal;
  std::map<std::size_t, std::size_t> counts;  // length -> multiplicity

  void add(std::size_t length) {
    if (length > 0) ++counts[length];
  }
  bool empty() const noexcept { return counts.empty(); }
};

struct LineHistograms {
  LineHistogram diagonal{LineKind::diagonal, {}};
  LineHistogram vertical{LineKind::vertical, {}};
  LineHistogram white{LineKind::white_vertical, {}};
};

/// Diagonal runs skip every diagonal with |i-j| < max(theiler, 1), so the
/// line of identity never contributes. Vertical runs use the full matrix.
/// White runs touching row 0 or row N-1 are censored and dropped.
inline LineHistograms line_histograms(const RecurrenceMatrix& rm, int theiler) {
  LineHistograms h;
  const std::size_t n = rm.size();
  const std::size_t first_offset = static_cast<std::size_t>(std::max(theiler, 1));

  for (std::size_t d = first_offset; d < n; ++d) {
    // Upper (j = i + d) and lower (i = j + d) triangles.
    for (int side = 0; side < 2; ++side) {
      std::size_t run = 0;
      for (std::size_t k = 0; k + d < n; ++k) {
        const bool r = side == 0 ? rm(k, k + d) : rm(k + d, k);
        if (r) {
          ++run;
        } else {
          h.diagonal.add(run);
          run = 0;
        }
      }
      h.diagonal.add(run);
    }
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t ones = 0;
    std::size_t zeros = 0;
    bool zero_run_touches_top = false;
    for (std::size_t row = 0; row < n; ++row) {
      if (rm(row, col)) {
        if (zeros > 0 && !zero_run_touches_top) h.white.add(zeros);
        zeros = 0;
        ++ones;
      } else {
        h.vertical.add(ones);
        ones = 0;
        if (zeros == 0) zero_run_touches_top = (row == 0);
        ++zeros;
      }
    }
    h.vertical.add(ones);
    // A trailing zero run touches the bottom border and is dropped.
  }
  return h;
}

struct RqaMeasures {
  double rr = 0.0;
  double det = 0.0;
  double l_max = 0.0;
  double l_mean = 0.0;
  double l_entr = 0.0;
  double tt = 0.0;
  double v_entr = 0.0;
  double t2 = 0.0;
  double w_entr = 0.0;

  bool operator==(const RqaMeasures&) const = default;
};

inline constexpr std::size_t kMeasureCount = 9;

inline constexpr std::array<std::string_view, kMeasureCount> kMeasureNames = {
    "rr", "det", "l_max", "l_mean", "l_entr", "tt", "v_entr", "t2", "w_entr"};

inline std::array<double, kMeasureCount> as_array(const RqaMeasures& m) {
  return {m.rr, m.det, m.l_max, m.l_mean, m.l_entr, m.tt, m.v_entr, m.t2, m.w_entr};
}

namespace detail {

struct HistogramStats {
  double weighted = 0.0;  // sum of l * P(l)
  double lines = 0.0;     // sum of P(l)
  double entropy = 0.0;
};

// Statistics over lengths >= min_length. Entropy is normalized over the
// restricted set and uses the natural logarithm.
inline HistogramStats restricted_stats(const LineHistogram& h, std::size_t min_length) {
  HistogramStats s;
  for (const auto& [len, count] : h.counts) {
    if (len < min_length) continue;
    s.weighted += static_cast<double>(len) * static_cast<double>(count);
    s.lines += static_cast<double>(count);
  }
  if (s.lines > 0.0) {
    for (const auto& [len, count] : h.counts) {
      if (len < min_length) continue;
      const double p = static_cast<double>(count) / s.lines;
      s.entropy -= p * std::log(p);
    }
    s.entropy = std::max(0.0, s.entropy);
  }
  return s;
}

inline double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace detail

inline RqaMeasures rqa_measures(const RecurrenceMatrix& rm, const LineHistograms& h,
                                int l_min, int v_min) {
  if (l_min < 2 || v_min < 2) throw std::invalid_argument("l_min and v_min must be >= 2");
  const double n = static_cast<double>(rm.size());
  RqaMeasures out;
  out.rr = static_cast<double>(rm.recurrence_count()) / (n * n);

  const auto all_diag = detail::restricted_stats(h.diagonal, 1);
  const auto long_diag = detail::restricted_stats(h.diagonal, static_cast<std::size_t>(l_min));
  out.det = detail::ratio(long_diag.weighted, all_diag.weighted);
  out.l_max = h.diagonal.empty() ? 0.0 : static_cast<double>(h.diagonal.counts.rbegin()->first);
  out.l_mean = detail::ratio(long_diag.weighted, long_diag.lines);
  out.l_entr = long_diag.entropy;

  const auto long_vert = detail::restricted_stats(h.vertical, static_cast<std::size_t>(v_min));
  out.tt = detail::ratio(long_vert.weighted, long_vert.lines);
  out.v_entr = long_vert.entropy;

  const auto white = detail::restricted_stats(h.white, 1);
  out.t2 = detail::ratio(white.weighted, white.lines);
  out.w_entr = white.entropy;
  return out;
}

inline RqaMeasures rqa_measures(const RecurrenceMatrix& rm, int l_min, int v_min, int theiler) {
  return rqa_measures(rm, line_histograms(rm, theiler), l_min, v_min);
}

/// Largest pairwise distance between trajectory points.
inline double phase_space_diameter(const EmbeddedTrajectory& traj, Norm norm) {
  const std::size_t n = traj.size();
  if (n < 2) throw SizingError("diameter needs at least 2 points", 2);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      best = std::max(best, distance(traj.point(i), traj.point(j), norm));
  return best;
}

/// True when epsilon respects the 10%-of-diameter guideline.
inline bool threshold_within_guideline(double epsilon, double diameter) {
  return epsilon <= 0.1 * diameter;
}

/// Full pipeline for one series: normalize, embed, threshold, quantify.
inline RqaMeasures analyze_series(const Series& raw, const EmbedParams& p) {
  p.validate();
  const auto norm = znormalize(raw);
  const auto traj = embed(norm.series, p.tau, p.m);
  const auto rm = recurrence_matrix(traj, p.epsilon, p.norm, p);
  auto m = rqa_measures(rm, p.l_min, p.v_min, p.theiler);
  // A flat window is fully deterministic by convention. The all-ones matrix
  // alone gives det < 1 because its corner diagonals are shorter than l_min.
  if (norm.degenerate) m.det = 1.0;
  return m;
}

}  // namespace ospf_rqa
