#pragma once

// Filtered simplicial complexes and persistent homology over Z/2 by plain
// boundary-matrix column reduction.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace boxfilt {

struct filt_simplex {
  std::vector<int> verts;  // sorted ascending
  double value = 0.0;
};

struct filtration_complex {
  int vertex_count = 0;
  int max_dim = 1;  // construction bound, not necessarily realized
  std::vector<filt_simplex> simplices;
};

struct pd_pair {
  int dim = 0;
  double birth = 0.0;
  double death = std::numeric_limits<double>::infinity();

  bool essential() const { return std::isinf(death); }
  double lifetime() const { return death - birth; }
};

struct persistence_diagram {
  double scale = 1.0;
  std::vector<pd_pair> pairs;

  std::vector<pd_pair> in_dim(int d) const {
    std::vector<pd_pair> out;
    for (const auto& p : pairs)
      if (p.dim == d) out.push_back(p);
    return out;
  }

  int essential_count(int d) const {
    int c = 0;
    for (const auto& p : pairs)
      if (p.dim == d && p.essential()) ++c;
    return c;
  }
};

namespace detail {

struct vert_hash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace detail

// Persistent homology in dimensions 0..max_homology_dim; diagram values are
// filtration values times `scale`. Zero-persistence pairs are dropped,
// essential classes get an infinite death.
inline persistence_diagram persistence(const filtration_complex& complex, int max_homology_dim,
                                       double scale = 1.0) {
  if (max_homology_dim < 0) throw std::invalid_argument("persistence: negative homology dimension");
  if (max_homology_dim >= complex.max_dim)
    throw std::invalid_argument(
        "persistence: homology dimension requires simplices one dimension higher; raise the nerve "
        "max_dim");

  const auto& sx = complex.simplices;
  const int n = static_cast<int>(sx.size());

  // filtration order: by value, then dimension, then vertex tuple
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (sx[a].value != sx[b].value) return sx[a].value < sx[b].value;
    if (sx[a].verts.size() != sx[b].verts.size()) return sx[a].verts.size() < sx[b].verts.size();
    return sx[a].verts < sx[b].verts;
  });
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;

  std::unordered_map<std::vector<int>, int, detail::vert_hash> index_of;
  index_of.reserve(n * 2);
  for (int i = 0; i < n; ++i) index_of[sx[order[i]].verts] = i;

  std::vector<std::vector<int>> columns(n);
  std::vector<int> low_of_col(n, -1);
  std::vector<int> col_with_low(n, -1);
  std::vector<char> is_death(n, 0);

  std::vector<int> face, merged;
  for (int i = 0; i < n; ++i) {
    const auto& verts = sx[order[i]].verts;
    if (verts.size() == 1) continue;
    std::vector<int> col;
    col.reserve(verts.size());
    for (std::size_t skip = 0; skip < verts.size(); ++skip) {
      face.clear();
      for (std::size_t k = 0; k < verts.size(); ++k)
        if (k != skip) face.push_back(verts[k]);
      auto it = index_of.find(face);
      if (it == index_of.end() || it->second >= i)
        throw std::invalid_argument("persistence: complex is missing a face or violates order");
      col.push_back(it->second);
    }
    std::sort(col.begin(), col.end());

    while (!col.empty()) {
      const int low = col.back();
      const int other = col_with_low[low];
      if (other < 0) break;
      // col ^= columns[other]
      merged.clear();
      std::set_symmetric_difference(col.begin(), col.end(), columns[other].begin(),
                                    columns[other].end(), std::back_inserter(merged));
      col.swap(merged);
    }
    if (!col.empty()) {
      const int low = col.back();
      col_with_low[low] = i;
      low_of_col[i] = low;
      is_death[i] = 1;
      columns[i] = std::move(col);
    }
  }

  persistence_diagram dgm;
  dgm.scale = scale;
  std::vector<char> paired(n, 0);
  for (int i = 0; i < n; ++i) {
    if (low_of_col[i] < 0) continue;
    const int birth = low_of_col[i];
    paired[birth] = 1;
    paired[i] = 1;
    const int d = static_cast<int>(sx[order[birth]].verts.size()) - 1;
    if (d > max_homology_dim) continue;
    const double b = sx[order[birth]].value, dth = sx[order[i]].value;
    if (b == dth) continue;  // zero persistence
    dgm.pairs.push_back({d, b * scale, dth * scale});
  }
  for (int i = 0; i < n; ++i) {
    if (paired[i] || is_death[i]) continue;
    const int d = static_cast<int>(sx[order[i]].verts.size()) - 1;
    if (d > max_homology_dim) continue;
    dgm.pairs.push_back({d, sx[order[i]].value * scale,
                         std::numeric_limits<double>::infinity()});
  }
  std::sort(dgm.pairs.begin(), dgm.pairs.end(), [](const pd_pair& a, const pd_pair& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death < b.death;
  });
  return dgm;
}

}  // namespace boxfilt
