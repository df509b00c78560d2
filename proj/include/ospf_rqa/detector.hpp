#pragma once

// Sliding-window RQA over a count series and a rolling median/MAD change
// detector on the resulting measure series.

#include <algorithm>
#include <array>
#include <bitset>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ospf_rqa/errors.hpp"
#include "ospf_rqa/lsa.hpp"
#include "ospf_rqa/rqa.hpp"

namespace ospf_rqa {

inline constexpr double kMadFloor = 1e-6;

struct DetectorConfig {
  std::size_t window_bins = 200;
  std::size_t step_bins = 1;
  EmbedParams embed{};
  std::size_t baseline_bins = 60;  // prior windows in the rolling baseline
  double k_mad = 6.0;
  std::bitset<kMeasureCount> measures_enabled = std::bitset<kMeasureCount>().set();
  unsigned threads = 0;  // 0 = hardware concurrency; output does not depend on it

  void validate() const {
    if (window_bins < 10) throw std::invalid_argument("window must be >= 10 bins");
    if (step_bins < 1) throw std::invalid_argument("step must be >= 1 bin");
    if (baseline_bins < 10) throw std::invalid_argument("baseline must be >= 10 windows");
    if (!(k_mad > 0.0) || !std::isfinite(k_mad)) throw std::invalid_argument("k_mad must be > 0");
    if (measures_enabled.none()) throw std::invalid_argument("at least one measure must be enabled");
    embed.validate();
    if (window_bins < embed.min_series_length())
      throw SizingError("window of " + std::to_string(window_bins) + " bins is too short to embed with tau=" +
                            std::to_string(embed.tau) + ", m=" + std::to_string(embed.m),
                        embed.min_series_length());
  }
};

inline std::optional<std::size_t> measure_index(std::string_view name) {
  for (std::size_t k = 0; k < kMeasureCount; ++k)
    if (kMeasureNames[k] == name) return k;
  return std::nullopt;
}

/// Comma-separated measure names; "all" enables everything.
inline std::bitset<kMeasureCount> parse_measure_set(std::string_view text) {
  std::bitset<kMeasureCount> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    if (item == "all") {
      out.set();
      continue;
    }
    auto k = measure_index(item);
    if (!k) throw std::invalid_argument("unknown RQA measure '" + item + "'");
    out.set(*k);
  }
  return out;
}

inline std::string format_measure_set(const std::bitset<kMeasureCount>& set) {
  if (set.all()) return "all";
  std::string out;
  for (std::size_t k = 0; k < kMeasureCount; ++k)
    if (set.test(k)) out += (out.empty() ? "" : ",") + std::string(kMeasureNames[k]);
  return out;
}

struct MeasureSeries {
  std::size_t first_bin = 0;  // bin index at which the first window ends
  std::size_t step_bins = 1;
  double start_s = 0.0;
  int bin_size_s = 10;
  std::vector<RqaMeasures> values;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t window_end_bin(std::size_t w) const { return first_bin + w * step_bins; }
  double time_s(std::size_t w) const {
    return start_s + static_cast<double>(window_end_bin(w)) * bin_size_s;
  }
  std::vector<double> column(std::size_t measure) const {
    std::vector<double> out(values.size());
    for (std::size_t w = 0; w < values.size(); ++w) out[w] = as_array(values[w])[measure];
    return out;
  }
};

/// Windows are analyzed independently, in parallel when allowed.
inline MeasureSeries sliding_rqa(const CountSeries& series, const DetectorConfig& cfg) {
  cfg.validate();
  if (series.size() < cfg.window_bins)
    throw SizingError("series of " + std::to_string(series.size()) + " bins is shorter than one window (" +
                          std::to_string(cfg.window_bins) + " bins)",
                      cfg.window_bins);
  MeasureSeries out;
  out.first_bin = cfg.window_bins - 1;
  out.step_bins = cfg.step_bins;
  out.start_s = static_cast<double>(series.start_us) / 1e6;
  out.bin_size_s = series.bin_size_s;
  const std::size_t count = (series.size() - cfg.window_bins) / cfg.step_bins + 1;
  out.values.resize(count);

  const auto data = series.as_doubles();
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t w = begin; w < end; ++w) {
      const auto first = data.begin() + static_cast<std::ptrdiff_t>(w * cfg.step_bins);
      Series window(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(cfg.window_bins)));
      out.values[w] = analyze_series(window, cfg.embed);
    }
  };

  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, count / 64)));
  if (threads <= 1) {
    work(0, count);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();
  return out;
}

struct TriggeredMeasure {
  std::string name;
  double value = 0.0;
  double baseline_median = 0.0;
  double deviation = 0.0;
};

struct Alert {
  std::size_t bin_index = 0;
  double time_s = 0.0;
  std::vector<TriggeredMeasure> triggered;
  double severity = 0.0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double hi = *mid;
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Deviation score of `value` against `baseline` (median / MAD, floored).
inline std::pair<double, double> deviation_score(const std::vector<double>& baseline, double value) {
  const double med = detail::median_of(baseline);
  std::vector<double> abs_dev(baseline.size());
  for (std::size_t i = 0; i < baseline.size(); ++i) abs_dev[i] = std::abs(baseline[i] - med);
  const double mad = detail::median_of(std::move(abs_dev));
  return {med, std::abs(value - med) / std::max(mad, kMadFloor)};
}

/// One alert per contiguous run of deviant windows, stamped at the run's
/// first window. The baseline for window w is windows [w - baseline, w).
inline std::vector<Alert> detect(const MeasureSeries& ms, const DetectorConfig& cfg) {
  std::vector<Alert> alerts;
  if (ms.size() <= cfg.baseline_bins) return alerts;
  std::array<std::vector<double>, kMeasureCount> cols;
  for (std::size_t k = 0; k < kMeasureCount; ++k)
    if (cfg.measures_enabled.test(k)) cols[k] = ms.column(k);

  bool in_run = false;
  for (std::size_t w = cfg.baseline_bins; w < ms.size(); ++w) {
    Alert candidate;
    for (std::size_t k = 0; k < kMeasureCount; ++k) {
      if (!cfg.measures_enabled.test(k)) continue;
      const auto& col = cols[k];
      const std::vector<double> base(col.begin() + static_cast<std::ptrdiff_t>(w - cfg.baseline_bins),
                                     col.begin() + static_cast<std::ptrdiff_t>(w));
      const auto [med, score] = deviation_score(base, col[w]);
      if (score >= cfg.k_mad) {
        candidate.triggered.push_back({std::string(kMeasureNames[k]), col[w], med, score});
        candidate.severity = std::max(candidate.severity, score);
      }
    }
    const bool deviant = !candidate.triggered.empty();
    if (deviant && !in_run) {
      candidate.bin_index = ms.window_end_bin(w);
      candidate.time_s = ms.time_s(w);
      alerts.push_back(std::move(candidate));
    }
    in_run = deviant;
  }
  return alerts;
}

struct RunAnalysis {
  CountSeries series;
  std::size_t dropped = 0;
  MeasureSeries measures;
  std::vector<Alert> alerts;
};

/// Bin the filtered events over [0, duration) and run the detector.
inline RunAnalysis analyze_run(const std::vector<LsaEvent>& events, const EventFilter& filter,
                               const DetectorConfig& cfg, double duration_s, int bin_size_s = 10) {
  RunAnalysis out;
  auto binned = bin_series(events, filter, bin_size_s, 0, static_cast<std::int64_t>(std::llround(duration_s * 1e6)));
  out.series = std::move(binned.series);
  out.dropped = binned.dropped;
  out.measures = sliding_rqa(out.series, cfg);
  out.alerts = detect(out.measures, cfg);
  return out;
}

// ---------------------------------------------------------------------------
// Output formats

inline void write_measure_csv(std::ostream& out, const MeasureSeries& ms) {
  out << "window_end_bin,t_s";
  for (auto name : kMeasureNames) out << ',' << name;
  out << '\n';
  out << std::setprecision(17);
  for (std::size_t w = 0; w < ms.size(); ++w) {
    out << ms.window_end_bin(w) << ',' << format_seconds(ms.time_s(w));
    for (double v : as_array(ms.values[w])) out << ',' << v;
    out << '\n';
  }
}

inline nlohmann::ordered_json to_json(const Alert& a) {
  nlohmann::ordered_json j;
  j["bin_index"] = a.bin_index;
  j["time_s"] = a.time_s;
  auto& list = j["triggered_measures"] = nlohmann::ordered_json::array();
  for (const auto& t : a.triggered)
    list.push_back({{"name", t.name}, {"value", t.value}, {"baseline_median", t.baseline_median},
                    {"deviation_score", t.deviation}});
  j["severity"] = a.severity;
  return j;
}

inline void write_alerts_jsonl(std::ostream& out, const std::vector<Alert>& alerts) {
  for (const auto& a : alerts) out << to_json(a).dump() << '\n';
}

}  // namespace ospf_rqa
