#pragma once

// Axis-aligned boxes, point clouds, pixel grids, coverage weights and the
// grid rounding maps. Everything here is a plain value type; all functions
// are pure and safe to call concurrently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxfilt {

using point = std::vector<double>;

struct point_cloud {
  std::vector<point> points;
  int dim = 0;

  point_cloud() = default;
  explicit point_cloud(std::vector<point> pts) : points(std::move(pts)) {
    if (!points.empty()) dim = static_cast<int>(points.front().size());
    for (const auto& p : points)
      if (static_cast<int>(p.size()) != dim)
        throw std::invalid_argument("point_cloud: inconsistent point dimension");
  }

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// Closed axis-aligned hyperrectangle; zero width in any subset of dimensions
// is allowed (degenerate faces).
struct box {
  point lo, hi;

  box() = default;
  box(point lower, point upper) : lo(std::move(lower)), hi(std::move(upper)) {
    if (lo.size() != hi.size()) throw std::invalid_argument("box: lower/upper dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (lo[i] > hi[i]) throw std::invalid_argument("box: lower bound exceeds upper bound");
  }

  static box degenerate(const point& x) { return box(x, x); }

  int dim() const { return static_cast<int>(lo.size()); }

  double total_width() const {
    double w = 0;
    for (std::size_t i = 0; i < lo.size(); ++i) w += hi[i] - lo[i];
    return w;
  }

  // Closed membership.
  bool contains(const point& x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }

  // Open membership, used when the box stands for a pi-neighborhood.
  bool strictly_contains(const point& x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (x[i] <= lo[i] || x[i] >= hi[i]) return false;
    return true;
  }

  bool contains(const box& other) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (other.lo[i] < lo[i] || other.hi[i] > hi[i]) return false;
    return true;
  }

  bool on_boundary(const point& x) const { return contains(x) && !strictly_contains(x); }

  friend bool operator==(const box& a, const box& b) { return a.lo == b.lo && a.hi == b.hi; }
};

inline void require_same_dim(const box& a, const box& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("box dimension mismatch");
}

// Smallest box containing both inputs (coordinate-wise min/max).
inline box box_union(const box& a, const box& b) {
  require_same_dim(a, b);
  point lo(a.lo), hi(a.hi);
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::min(lo[i], b.lo[i]);
    hi[i] = std::max(hi[i], b.hi[i]);
  }
  return box(std::move(lo), std::move(hi));
}

// Intersection of closed boxes; touching faces count as non-empty.
inline std::optional<box> box_intersection(const box& a, const box& b) {
  require_same_dim(a, b);
  point lo(a.dim()), hi(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    lo[i] = std::max(a.lo[i], b.lo[i]);
    hi[i] = std::min(a.hi[i], b.hi[i]);
    if (lo[i] > hi[i]) return std::nullopt;
  }
  return box(std::move(lo), std::move(hi));
}

inline bool boxes_intersect(const box& a, const box& b) {
  require_same_dim(a, b);
  for (int i = 0; i < a.dim(); ++i)
    if (std::max(a.lo[i], b.lo[i]) > std::min(a.hi[i], b.hi[i])) return false;
  return true;
}

// Tight coverage weight of a point: min over the per-face signed distances
// and zero. Zero exactly when x lies in V, strictly negative otherwise.
inline double point_weight(const point& x, const box& v) {
  if (static_cast<int>(x.size()) != v.dim())
    throw std::invalid_argument("point_weight: dimension mismatch");
  double w = 0.0;
  for (int i = 0; i < v.dim(); ++i) {
    w = std::min(w, x[i] - v.lo[i]);
    w = std::min(w, v.hi[i] - x[i]);
  }
  return w;
}

// Pixel-centroid weight, capped at half the pixel width.
inline double pixel_weight(const point& centroid, const box& v, double pixel_width) {
  if (pixel_width <= 0) throw std::invalid_argument("pixel_weight: pixel width must be positive");
  if (static_cast<int>(centroid.size()) != v.dim())
    throw std::invalid_argument("pixel_weight: dimension mismatch");
  double w = 0.5 * pixel_width;
  for (int i = 0; i < v.dim(); ++i) {
    w = std::min(w, centroid[i] - v.lo[i]);
    w = std::min(w, v.hi[i] - centroid[i]);
  }
  return w;
}

// The pi-neighborhood box B(V, pi). Stored with closed bounds; callers that
// need the open region use strictly_contains.
inline box neighborhood(const box& v, double pi) {
  if (pi <= 0) throw std::invalid_argument("neighborhood: pi must be positive");
  point lo(v.lo), hi(v.hi);
  for (int i = 0; i < v.dim(); ++i) {
    lo[i] -= pi;
    hi[i] += pi;
  }
  return box(std::move(lo), std::move(hi));
}

using pixel_index = std::vector<std::int64_t>;

struct pixel_cell {
  std::int64_t count = 0;
  point centroid;
};

struct pixel_grid {
  double pixel_width = 1.0;
  point origin;
  // Ordered map so that iteration (and hence every downstream id assignment)
  // is deterministic.
  std::map<pixel_index, pixel_cell> cells;

  std::int64_t total_count() const {
    std::int64_t t = 0;
    for (const auto& [idx, cell] : cells) t += cell.count;
    return t;
  }

  box cell_box(const pixel_index& idx) const {
    point lo(idx.size()), hi(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      lo[i] = origin[i] + static_cast<double>(idx[i]) * pixel_width;
      hi[i] = lo[i] + pixel_width;
    }
    return box(std::move(lo), std::move(hi));
  }
};

// Assign every point to the pixel given by plain floor indexing; a point on a
// pixel boundary belongs to the pixel whose lower face it lies on.
inline pixel_grid pixelize(const point_cloud& pcd, double pixel_width, point origin = {}) {
  if (pixel_width <= 0) throw std::invalid_argument("pixelize: pixel width must be positive");
  if (origin.empty()) origin.assign(pcd.dim, 0.0);
  if (static_cast<int>(origin.size()) != pcd.dim)
    throw std::invalid_argument("pixelize: origin dimension mismatch");

  pixel_grid grid;
  grid.pixel_width = pixel_width;
  grid.origin = origin;
  for (const auto& p : pcd.points) {
    pixel_index idx(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
      idx[i] = static_cast<std::int64_t>(std::floor((p[i] - origin[i]) / pixel_width));
    auto& cell = grid.cells[idx];
    if (cell.count == 0) {
      cell.centroid.resize(p.size());
      for (std::size_t i = 0; i < p.size(); ++i)
        cell.centroid[i] = origin[i] + (static_cast<double>(idx[i]) + 0.5) * pixel_width;
    }
    cell.count += 1;
  }
  return grid;
}

enum class rounding { psi1, psi2, psi3 };

namespace detail {

inline double frac(double x) { return x - std::floor(x); }

inline double psi_lower(double l, rounding kind) {
  const double f = frac(l);
  switch (kind) {
    case rounding::psi1: return std::ceil(l);
    case rounding::psi2:
      if (f == 0.0) return std::floor(l);
      return f > 0.5 ? std::ceil(l) : std::floor(l) + 0.5;
    case rounding::psi3: return f > 0.5 ? std::ceil(l) : std::floor(l);
  }
  return l;
}

inline double psi_upper(double u, rounding kind) {
  const double f = frac(u);
  switch (kind) {
    case rounding::psi1: return std::floor(u);
    case rounding::psi2: return f >= 0.5 ? std::floor(u) + 0.5 : std::floor(u);
    case rounding::psi3: return f >= 0.5 ? std::ceil(u) : std::floor(u);
  }
  return u;
}

}  // namespace detail

struct rounded_box {
  box value;
  bool clamped = false;  // set when an inverted interval was collapsed
};

// Per-coordinate snapping of a box to the grid (psi1, psi3) or half-grid
// (psi2) lattice, computed in grid coordinates (x - origin) / H. Rounding a
// box thinner than one pixel can invert an interval; such coordinates are
// collapsed to the lattice line nearest the interval midpoint and flagged.
inline rounded_box round_box(const box& v, rounding kind, double pixel_width = 1.0,
                             point origin = {}) {
  if (pixel_width <= 0) throw std::invalid_argument("round_box: pixel width must be positive");
  if (origin.empty()) origin.assign(v.dim(), 0.0);
  if (static_cast<int>(origin.size()) != v.dim())
    throw std::invalid_argument("round_box: origin dimension mismatch");

  rounded_box out;
  point lo(v.dim()), hi(v.dim());
  for (int i = 0; i < v.dim(); ++i) {
    const double gl = (v.lo[i] - origin[i]) / pixel_width;
    const double gu = (v.hi[i] - origin[i]) / pixel_width;
    double rl = detail::psi_lower(gl, kind);
    double ru = detail::psi_upper(gu, kind);
    if (rl > ru) {
      const double mid = 0.5 * (gl + gu);
      const double snapped = kind == rounding::psi2 ? std::floor(2.0 * mid + 0.5) / 2.0
                                                    : std::floor(mid + 0.5);
      rl = ru = snapped;
      out.clamped = true;
    }
    lo[i] = origin[i] + rl * pixel_width;
    hi[i] = origin[i] + ru * pixel_width;
  }
  out.value = box(std::move(lo), std::move(hi));
  return out;
}

}  // namespace boxfilt
