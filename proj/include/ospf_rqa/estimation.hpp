#pragma once

// Embedding-parameter estimation: delay from the first minimum of the
// mutual information curve, dimension from the false-nearest-neighbour
// fraction.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "ospf_rqa/errors.hpp"
#include "ospf_rqa/rqa.hpp"

namespace ospf_rqa {

struct MiCurve {
  std::vector<double> values;  // values[k] is MI at delay k + 1, in nats
  bool degenerate = false;     // constant series; all values are zero

  double at(int tau) const { return values.at(static_cast<std::size_t>(tau - 1)); }
};

inline MiCurve mutual_information(const Series& s, int tau_max, int bins = 16) {
  if (tau_max < 1) throw std::invalid_argument("tau_max must be >= 1");
  if (bins < 2) throw std::invalid_argument("bins must be >= 2");
  if (s.size() <= static_cast<std::size_t>(tau_max) + 1) {
    const std::size_t required = static_cast<std::size_t>(tau_max) + 2;
    throw SizingError("mutual information up to tau=" + std::to_string(tau_max) +
                          " needs at least " + std::to_string(required) + " values",
                      required);
  }
  MiCurve curve;
  curve.values.assign(static_cast<std::size_t>(tau_max), 0.0);
  const auto v = s.values();
  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double width = *hi_it - lo;
  if (!(width > 0.0)) {
    curve.degenerate = true;
    return curve;
  }

  const auto nb = static_cast<std::size_t>(bins);
  std::vector<std::size_t> cell(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto c = static_cast<std::size_t>((v[i] - lo) / width * static_cast<double>(bins));
    cell[i] = std::min(c, nb - 1);
  }

  std::vector<double> joint(nb * nb);
  std::vector<double> pa(nb);
  std::vector<double> pb(nb);
  for (int tau = 1; tau <= tau_max; ++tau) {
    std::fill(joint.begin(), joint.end(), 0.0);
    std::fill(pa.begin(), pa.end(), 0.0);
    std::fill(pb.begin(), pb.end(), 0.0);
    const std::size_t pairs = v.size() - static_cast<std::size_t>(tau);
    for (std::size_t t = 0; t < pairs; ++t) {
      const std::size_t a = cell[t];
      const std::size_t b = cell[t + static_cast<std::size_t>(tau)];
      joint[a * nb + b] += 1.0;
      pa[a] += 1.0;
      pb[b] += 1.0;
    }
    const double total = static_cast<double>(pairs);
    double mi = 0.0;
    for (std::size_t a = 0; a < nb; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        const double c = joint[a * nb + b];
        if (c == 0.0) continue;
        mi += (c / total) * std::log(c * total / (pa[a] * pb[b]));
      }
    }
    curve.values[static_cast<std::size_t>(tau - 1)] = std::max(0.0, mi);
  }
  return curve;
}

struct DelayEstimate {
  int tau = 1;
  bool fallback = false;  // no interior minimum; tau defaulted to 1
};

/// First local minimum of the MI curve. MI(0) counts as +infinity; the last
/// point has no right neighbour and is never chosen.
inline DelayEstimate estimate_delay(std::span<const double> mi) {
  if (mi.empty()) throw std::invalid_argument("mi curve must be non-empty");
  for (std::size_t k = 0; k + 1 < mi.size(); ++k) {
    const double prev = k == 0 ? std::numeric_limits<double>::infinity() : mi[k - 1];
    if (mi[k] < prev && mi[k] <= mi[k + 1]) return {static_cast<int>(k) + 1, false};
  }
  return {1, true};
}

struct FnnOptions {
  double r_tol = 15.0;
  double a_tol = 2.0;
};

/// Fraction of false nearest neighbours for m = 1..m_max (index m - 1).
/// Neighbours use the euclidean norm; ties go to the lowest index.
inline constexpr double kZeroDistance = 1e-9;  // relative to the series sd

inline std::vector<double> false_nearest_neighbors(const Series& s, int tau, int m_max,
                                                   FnnOptions opt = {}) {
  if (tau < 1 || m_max < 1) throw std::invalid_argument("tau and m_max must be >= 1");
  if (!(opt.r_tol > 0.0) || !(opt.a_tol > 0.0))
    throw std::invalid_argument("r_tol and a_tol must be > 0");
  const std::size_t reach = static_cast<std::size_t>(m_max) * static_cast<std::size_t>(tau);
  if (s.size() < reach + 2) {
    throw SizingError("false nearest neighbours up to m=" + std::to_string(m_max) +
                          " need at least " + std::to_string(reach + 2) + " values",
                      reach + 2);
  }
  const auto x = s.values();
  const double n_all = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n_all;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n_all);

  std::vector<double> fractions;
  fractions.reserve(static_cast<std::size_t>(m_max));
  for (int m = 1; m <= m_max; ++m) {
    const std::size_t shift = static_cast<std::size_t>(m) * static_cast<std::size_t>(tau);
    const std::size_t n = x.size() - shift;  // points that extend to dimension m + 1
    std::size_t false_pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t nn = i;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        double d2 = 0.0;
        for (int k = 0; k < m; ++k) {
          const double diff = x[i + static_cast<std::size_t>(k * tau)] -
                              x[j + static_cast<std::size_t>(k * tau)];
          d2 += diff * diff;
          if (d2 >= best) break;
        }
        if (d2 < best) {
          best = d2;
          nn = j;
        }
      }
      const double dm = std::sqrt(best);
      const double growth = std::abs(x[i + shift] - x[nn + shift]);
      const double d_next = std::sqrt(best + growth * growth);
      bool is_false = d_next > opt.a_tol * sd;
      // Distances at rounding level count as zero: periodic samples that
      // repeat exactly on paper differ by ~1e-16 and would make the ratio noise.
      if (dm > kZeroDistance * sd && growth > opt.r_tol * dm) is_false = true;
      if (is_false) ++false_pairs;
    }
    fractions.push_back(static_cast<double>(false_pairs) / static_cast<double>(n));
  }
  return fractions;
}

struct DimensionEstimate {
  int m = 1;
  bool saturated = false;  // neither criterion met; m is m_max
};

/// Smallest m whose FNN fraction drops below `drop_threshold` or is an
/// interior local minimum. The first entry has no left neighbour, so it can
/// only qualify through the threshold.
inline DimensionEstimate estimate_dimension(std::span<const double> fnn,
                                            double drop_threshold = 0.01) {
  if (fnn.empty()) throw std::invalid_argument("fnn curve must be non-empty");
  if (!(drop_threshold > 0.0 && drop_threshold < 1.0))
    throw std::invalid_argument("drop_threshold must lie in (0, 1)");
  for (std::size_t k = 0; k < fnn.size(); ++k) {
    if (fnn[k] < drop_threshold) return {static_cast<int>(k) + 1, false};
    const bool interior = k > 0 && k + 1 < fnn.size();
    if (interior && fnn[k] < fnn[k - 1] && fnn[k] <= fnn[k + 1])
      return {static_cast<int>(k) + 1, false};
  }
  return {static_cast<int>(fnn.size()), true};
}

}  // namespace ospf_rqa
