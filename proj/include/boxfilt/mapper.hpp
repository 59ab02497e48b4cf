#pragma once

// Box mapper: k-means pivot boxes, one largest-optimal expansion step, nerve
// graph of the expanded boxes.

#include <string>

#include "boxfilt/expansion.hpp"
#include "boxfilt/metrics.hpp"
#include "boxfilt/parallel.hpp"

namespace boxfilt {

struct mapper_node {
  box b;
  std::vector<int> members;  // indices of points inside the box
};

struct mapper_graph {
  std::vector<mapper_node> nodes;
  std::vector<std::pair<int, int>> edges;
};

struct mapper_params {
  int k = 8;
  double pi = 1.0;
  double alpha = 0.1;
  std::uint64_t seed = 0;
  bool use_pixels = false;
  double pixel_width = 1.0;
  point grid_origin;
  solver_config config;
  int threads = 0;
};

// Clusters the cloud, encloses each cluster in its minimal box, expands each
// pivot once in its pi-neighborhood, then takes the nerve. Node membership
// is cover-based: every point inside an expanded box belongs to that node.
inline mapper_graph box_mapper(const point_cloud& pcd, const mapper_params& params) {
  if (params.k < 1 || params.k > static_cast<int>(pcd.size()))
    throw std::invalid_argument("box_mapper: k must be in [1, |X|]");
  if (params.pi <= 0) throw std::invalid_argument("box_mapper: pi must be positive");

  const std::vector<int> labels = kmeans(pcd.points, params.k, params.seed);
  std::vector<box> pivots(params.k);
  std::vector<bool> seen(params.k, false);
  for (std::size_t i = 0; i < pcd.points.size(); ++i) {
    const int c = labels[i];
    const box pt = box::degenerate(pcd.points[i]);
    pivots[c] = seen[c] ? box_union(pivots[c], pt) : pt;
    seen[c] = true;
  }

  pixel_grid grid;
  if (params.use_pixels) grid = pixelize(pcd, params.pixel_width, params.grid_origin);

  mapper_graph out;
  out.nodes.resize(params.k);
  parallel_for(params.k, resolve_threads(params.threads), [&](int c) {
    expansion_problem prob =
        params.use_pixels
            ? expansion_problem::pixel_cover(pivots[c], grid, params.alpha, params.pi)
            : expansion_problem::point_cover(pivots[c], pcd, params.alpha, params.pi);
    expansion_solution sol = largest_optimal_expansion(prob, params.config);
    out.nodes[c].b = std::move(sol.grown);
  });

  for (int c = 0; c < params.k; ++c)
    for (std::size_t i = 0; i < pcd.points.size(); ++i)
      if (out.nodes[c].b.contains(pcd.points[i])) out.nodes[c].members.push_back(static_cast<int>(i));

  for (int a = 0; a < params.k; ++a)
    for (int b = a + 1; b < params.k; ++b)
      if (boxes_intersect(out.nodes[a].b, out.nodes[b].b)) out.edges.push_back({a, b});
  return out;
}

// Cycle rank E - V + C of the mapper graph.
inline int graph_cycle_rank(const mapper_graph& g) {
  const int nv = static_cast<int>(g.nodes.size());
  std::vector<int> parent(nv);
  for (int i = 0; i < nv; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = nv;
  for (const auto& [a, b] : g.edges) {
    const int ra = find(a), rb = find(b);
    if (ra != rb) {
      parent[ra] = rb;
      --components;
    }
  }
  return static_cast<int>(g.edges.size()) - nv + components;
}

}  // namespace boxfilt
