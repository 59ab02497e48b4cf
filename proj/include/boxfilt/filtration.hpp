#pragma once

// Cover sequences, nerve filtrations and the end-to-end box filtration.
//
// Each pivot box V grows through m steps; the step-j problem expands the
// previous box inside the neighborhood B(V, j*pi) anchored at the original
// pivot. Nerves are flag complexes: boxes satisfy the Helly property, so
// pairwise intersections determine all higher-order ones, and a simplex
// enters the filtration at the largest index among its edges.

#include <array>
#include <cstdint>

#include "boxfilt/box.hpp"
#include "boxfilt/expansion.hpp"
#include "boxfilt/parallel.hpp"
#include "boxfilt/persistence.hpp"

namespace boxfilt {

struct expand_mode {
  bool largest = true;
  int k = 0;

  static expand_mode largest_optimal() { return {true, 0}; }
  static expand_mode k_optimal(int k) {
    if (k < 1) throw std::invalid_argument("expand_mode: k must be at least 1");
    return {false, k};
  }
};

struct cover_sequence {
  std::vector<box> pivots;
  int steps = 0;  // m
  double pi = 0.0;
  std::vector<std::vector<box>> expansions;  // [pivot][j], j = 0..steps
  bool truncated = false;                    // set when the step cap cut m
};

namespace detail {

// Smallest m with m*pi strictly exceeding every pivot-to-target face
// distance (open neighborhood membership), and at least 1.
inline int steps_to_cover(const std::vector<box>& pivots, const std::vector<const double*>& targets,
                          int dim, double pi) {
  if (pi <= 0) throw std::invalid_argument("compute_m: pi must be positive");
  if (pivots.empty()) throw std::invalid_argument("compute_m: no pivots");
  double worst = 0.0;
  for (const auto& v : pivots)
    for (const double* x : targets)
      for (int i = 0; i < dim; ++i) worst = std::max({worst, v.lo[i] - x[i], x[i] - v.hi[i]});
  if (worst <= 0.0) return 1;
  return std::max(1, static_cast<int>(std::floor(worst / pi)) + 1);
}

}  // namespace detail

inline int compute_m(const std::vector<box>& pivots, const point_cloud& pcd, double pi) {
  std::vector<const double*> targets;
  targets.reserve(pcd.size());
  for (const auto& p : pcd.points) targets.push_back(p.data());
  return detail::steps_to_cover(pivots, targets, pcd.dim, pi);
}

inline int compute_m(const std::vector<box>& pivots, const pixel_grid& grid, double pi) {
  std::vector<const double*> targets;
  targets.reserve(grid.cells.size());
  for (const auto& [idx, cell] : grid.cells) targets.push_back(cell.centroid.data());
  return detail::steps_to_cover(pivots, targets, static_cast<int>(grid.origin.size()), pi);
}

namespace detail {

template <class MakeProblem>
cover_sequence expand_cover_impl(const std::vector<box>& pivots, int m, double pi, expand_mode mode,
                                 const solver_config& cfg, int threads, MakeProblem&& make) {
  cover_sequence cover;
  cover.pivots = pivots;
  cover.steps = m;
  cover.pi = pi;
  cover.expansions.assign(pivots.size(), {});

  parallel_for(static_cast<int>(pivots.size()), resolve_threads(threads), [&](int pv) {
    auto& seq = cover.expansions[pv];
    seq.reserve(m + 1);
    seq.push_back(pivots[pv]);
    for (int j = 1; j <= m; ++j) {
      try {
        expansion_problem prob = make(pv, seq.back(), j);
        expansion_solution sol = mode.largest ? largest_optimal_expansion(prob, cfg)
                                              : k_optimal_expansion(prob, cfg, mode.k);
        if (!sol.grown.contains(seq.back()))
          throw std::logic_error("expansion lost monotonicity");
        seq.push_back(std::move(sol.grown));
      } catch (const std::exception& e) {
        throw std::runtime_error("pivot " + std::to_string(pv) + ", step " + std::to_string(j) +
                                 ": " + e.what());
      }
    }
  });
  return cover;
}

}  // namespace detail

inline cover_sequence expand_cover(const std::vector<box>& pivots, const point_cloud& pcd,
                                   double pi, double alpha, expand_mode mode,
                                   const solver_config& cfg = {}, int max_steps = 256,
                                   int threads = 0) {
  int m = compute_m(pivots, pcd, pi);
  const bool truncated = m > max_steps;
  if (truncated) m = max_steps;
  cover_sequence cover = detail::expand_cover_impl(
      pivots, m, pi, mode, cfg, threads, [&](int pv, const box& prev, int j) {
        return expansion_problem::point_cover_in(prev, pcd, alpha, pi,
                                                 neighborhood(pivots[pv], j * pi));
      });
  cover.truncated = truncated;
  return cover;
}

inline cover_sequence expand_cover(const std::vector<box>& pivots, const pixel_grid& grid,
                                   double pi, double alpha, expand_mode mode,
                                   const solver_config& cfg = {}, int max_steps = 256,
                                   int threads = 0) {
  int m = compute_m(pivots, grid, pi);
  const bool truncated = m > max_steps;
  if (truncated) m = max_steps;
  cover_sequence cover = detail::expand_cover_impl(
      pivots, m, pi, mode, cfg, threads, [&](int pv, const box& prev, int j) {
        return expansion_problem::pixel_cover_in(prev, grid, alpha, pi,
                                                 neighborhood(pivots[pv], j * pi));
      });
  cover.truncated = truncated;
  return cover;
}

// Flag complex over weighted vertices and edges; the value of a simplex is
// the maximum over its vertices and edges.
inline filtration_complex flag_complex(int vertex_count, const std::vector<double>& vertex_values,
                                       const std::vector<std::array<double, 3>>& edges,
                                       int max_dim) {
  if (max_dim < 1) throw std::invalid_argument("flag_complex: max_dim must be at least 1");
  filtration_complex out;
  out.vertex_count = vertex_count;
  out.max_dim = max_dim;

  for (int v = 0; v < vertex_count; ++v) out.simplices.push_back({{v}, vertex_values[v]});

  // Higher-index neighbors; the stored value already folds in the endpoint
  // vertex values, so candidate lists can carry running maxima.
  std::vector<std::vector<std::pair<int, double>>> adj(vertex_count);
  for (const auto& e : edges) {
    const int a = std::min(static_cast<int>(e[0]), static_cast<int>(e[1]));
    const int b = std::max(static_cast<int>(e[0]), static_cast<int>(e[1]));
    const double val = std::max({e[2], vertex_values[a], vertex_values[b]});
    out.simplices.push_back({{a, b}, val});
    adj[a].push_back({b, val});
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());

  // Depth-indexed candidate buffers; cliques are enumerated with strictly
  // increasing vertex indices.
  std::vector<std::vector<std::pair<int, double>>> cands(max_dim + 2);
  std::vector<int> clique;
  auto grow = [&](auto&& self, int depth, double value) -> void {
    if (static_cast<int>(clique.size()) >= 3) out.simplices.push_back({clique, value});
    if (static_cast<int>(clique.size()) == max_dim + 1) return;
    const auto& frontier = cands[depth];
    for (std::size_t ci = 0; ci < frontier.size(); ++ci) {
      const auto [u, uval] = frontier[ci];
      auto& next = cands[depth + 1];
      next.clear();
      const auto& nu = adj[u];
      for (std::size_t cj = ci + 1; cj < frontier.size(); ++cj) {
        const int w = frontier[cj].first;
        auto it = std::lower_bound(nu.begin(), nu.end(), std::make_pair(w, 0.0),
                                   [](const auto& x, const auto& y) { return x.first < y.first; });
        if (it != nu.end() && it->first == w)
          next.push_back({w, std::max(frontier[cj].second, it->second)});
      }
      clique.push_back(u);
      self(self, depth + 1, std::max(value, uval));
      clique.pop_back();
    }
  };
  for (int v = 0; v < vertex_count; ++v) {
    clique.assign(1, v);
    cands[0] = adj[v];
    grow(grow, 0, vertex_values[v]);
  }
  return out;
}

// Nerve of a cover sequence: the edge {a, b} enters at the first step where
// the expansions intersect; higher simplices follow their edges (Helly).
inline filtration_complex nerve_filtration(const cover_sequence& cover, int max_dim) {
  if (max_dim < 1) throw std::invalid_argument("nerve_filtration: max_dim must be at least 1");
  const int nv = static_cast<int>(cover.pivots.size());
  std::vector<std::array<double, 3>> edges;
  for (int a = 0; a < nv; ++a)
    for (int b = a + 1; b < nv; ++b)
      for (int j = 0; j <= cover.steps; ++j)
        if (boxes_intersect(cover.expansions[a][j], cover.expansions[b][j])) {
          edges.push_back({static_cast<double>(a), static_cast<double>(b),
                           static_cast<double>(j)});
          break;
        }
  return flag_complex(nv, std::vector<double>(nv, 0.0), edges, max_dim);
}

struct box_filtration_params {
  double alpha = 0.5;
  double pi = 1.0;
  bool use_pixels = false;
  double pixel_width = 1.0;
  point grid_origin;  // zeros when empty
  expand_mode mode = expand_mode::largest_optimal();
  int max_dim = 2;
  double merge_radius = 0.0;
  int max_steps = 256;
  int max_homology_dim = 1;
  int threads = 0;
  solver_config config;
};

// Initial point cover: one degenerate box per distinct point; with a merge
// radius, points are grouped greedily in input order onto the first group
// whose seed point is within the given sup-norm distance, and the pivot is
// the bounding box of the group.
inline std::vector<box> initial_point_cover(const point_cloud& pcd, double merge_radius = 0.0) {
  if (pcd.empty()) throw std::invalid_argument("initial_point_cover: empty point cloud");
  std::vector<box> pivots;
  if (merge_radius <= 0.0) {
    std::vector<point> seen;
    for (const auto& x : pcd.points) {
      if (std::find(seen.begin(), seen.end(), x) != seen.end()) continue;
      seen.push_back(x);
      pivots.push_back(box::degenerate(x));
    }
    return pivots;
  }
  std::vector<point> seeds;
  for (const auto& x : pcd.points) {
    bool placed = false;
    for (std::size_t g = 0; g < seeds.size() && !placed; ++g) {
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::fabs(x[i] - seeds[g][i]));
      if (d <= merge_radius) {
        pivots[g] = box_union(pivots[g], box::degenerate(x));
        placed = true;
      }
    }
    if (!placed) {
      seeds.push_back(x);
      pivots.push_back(box::degenerate(x));
    }
  }
  return pivots;
}

inline std::vector<box> initial_pixel_cover(const pixel_grid& grid) {
  std::vector<box> pivots;
  for (const auto& [idx, cell] : grid.cells) pivots.push_back(grid.cell_box(idx));
  return pivots;
}

struct box_filtration_result {
  cover_sequence cover;
  filtration_complex complex;
  persistence_diagram diagram;
};

inline box_filtration_result box_filtration(const point_cloud& pcd,
                                            const box_filtration_params& params) {
  box_filtration_result out;
  if (params.use_pixels) {
    pixel_grid grid = pixelize(pcd, params.pixel_width, params.grid_origin);
    out.cover = expand_cover(initial_pixel_cover(grid), grid, params.pi, params.alpha, params.mode,
                             params.config, params.max_steps, params.threads);
  } else {
    out.cover = expand_cover(initial_point_cover(pcd, params.merge_radius), pcd, params.pi,
                             params.alpha, params.mode, params.config, params.max_steps,
                             params.threads);
  }
  out.complex = nerve_filtration(out.cover, params.max_dim);
  out.diagram = persistence(out.complex, params.max_homology_dim, params.pi);
  return out;
}

}  // namespace boxfilt
