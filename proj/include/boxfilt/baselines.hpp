#pragma once

// Vietoris-Rips and distance-to-measure (weighted Rips, p = 1) filtrations.
// Both produce flag complexes and share the persistence pipeline.

#include <cmath>

#include "boxfilt/filtration.hpp"

namespace boxfilt {

namespace detail {

inline double euclidean(const point& a, const point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace detail

// Rips filtration: vertices at 0, edges at Euclidean distance up to
// max_scale, flag completion up to max_dim.
inline filtration_complex vr_filtration(const point_cloud& pcd, double max_scale, int max_dim) {
  if (max_scale <= 0) throw std::invalid_argument("vr_filtration: max_scale must be positive");
  const int n = static_cast<int>(pcd.size());
  std::vector<std::array<double, 3>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double d = detail::euclidean(pcd.points[a], pcd.points[b]);
      if (d <= max_scale)
        edges.push_back({static_cast<double>(a), static_cast<double>(b), d});
    }
  return flag_complex(n, std::vector<double>(n, 0.0), edges, max_dim);
}

struct dtm_params {
  double m = 0.1;  // mass parameter in (0, 1); k = ceil(m * |X|) neighbors
};

// Empirical distance to measure: root mean squared distance to the k nearest
// other points, k = ceil(m * |X|).
inline std::vector<double> dtm_values(const point_cloud& pcd, double m) {
  if (m <= 0.0 || m >= 1.0) throw std::invalid_argument("dtm: mass parameter must be in (0,1)");
  const int n = static_cast<int>(pcd.size());
  const int k = static_cast<int>(std::ceil(m * n));
  if (k >= n) throw std::invalid_argument("dtm: k = ceil(m|X|) must be below |X|");

  std::vector<double> f(n);
  std::vector<double> d2(n);
  for (int a = 0; a < n; ++a) {
    d2.clear();
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      double s = 0.0;
      for (std::size_t i = 0; i < pcd.points[a].size(); ++i) {
        const double diff = pcd.points[a][i] - pcd.points[b][i];
        s += diff * diff;
      }
      d2.push_back(s);
    }
    std::nth_element(d2.begin(), d2.begin() + (k - 1), d2.end());
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += d2[i];
    f[a] = std::sqrt(acc / k);
  }
  return f;
}

// Weighted Rips with the p = 1 mix: vertex enters at f(x), the edge {x, y}
// at max(f(x), f(y), (|x - y| + f(x) + f(y)) / 2).
inline filtration_complex dtm_filtration(const point_cloud& pcd, const dtm_params& params,
                                         double max_scale, int max_dim) {
  const std::vector<double> f = dtm_values(pcd, params.m);
  const int n = static_cast<int>(pcd.size());
  std::vector<std::array<double, 3>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double d = detail::euclidean(pcd.points[a], pcd.points[b]);
      const double val = std::max({f[a], f[b], 0.5 * (d + f[a] + f[b])});
      if (val <= max_scale)
        edges.push_back({static_cast<double>(a), static_cast<double>(b), val});
    }
  return flag_complex(n, f, edges, max_dim);
}

}  // namespace boxfilt
