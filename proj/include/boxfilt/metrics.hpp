#pragma once

// Diagram and clustering metrics: bottleneck distance, Rand score, classical
// (Torgerson) multidimensional scaling and seeded k-means.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "boxfilt/box.hpp"
#include "boxfilt/persistence.hpp"
#include "boxfilt/rng.hpp"

namespace boxfilt {

struct distance_matrix {
  int size = 0;
  std::vector<double> d;  // row-major size x size

  distance_matrix() = default;
  explicit distance_matrix(int n) : size(n), d(static_cast<std::size_t>(n) * n, 0.0) {}

  double& at(int i, int j) { return d[static_cast<std::size_t>(i) * size + j]; }
  double at(int i, int j) const { return d[static_cast<std::size_t>(i) * size + j]; }

  void validate() const {
    for (int i = 0; i < size; ++i) {
      if (at(i, i) != 0.0) throw std::invalid_argument("distance_matrix: nonzero diagonal");
      for (int j = 0; j < i; ++j) {
        if (std::fabs(at(i, j) - at(j, i)) > 1e-12)
          throw std::invalid_argument("distance_matrix: asymmetric");
        if (at(i, j) < 0) throw std::invalid_argument("distance_matrix: negative entry");
      }
    }
  }
};

namespace detail {

// Hopcroft-Karp maximum matching on a bipartite graph given as adjacency
// lists from the left side.
class bipartite_matcher {
 public:
  bipartite_matcher(int n_left, int n_right)
      : nl_(n_left), nr_(n_right), adj_(n_left) {}

  void add_edge(int l, int r) { adj_[l].push_back(r); }

  int max_matching() {
    match_l_.assign(nl_, -1);
    match_r_.assign(nr_, -1);
    int matching = 0;
    for (;;) {
      if (!bfs()) break;
      for (int l = 0; l < nl_; ++l)
        if (match_l_[l] < 0 && dfs(l)) ++matching;
    }
    return matching;
  }

 private:
  static constexpr int inf_ = std::numeric_limits<int>::max();

  bool bfs() {
    std::queue<int> q;
    dist_.assign(nl_, inf_);
    for (int l = 0; l < nl_; ++l)
      if (match_l_[l] < 0) {
        dist_[l] = 0;
        q.push(l);
      }
    bool found = false;
    while (!q.empty()) {
      const int l = q.front();
      q.pop();
      for (int r : adj_[l]) {
        const int l2 = match_r_[r];
        if (l2 < 0)
          found = true;
        else if (dist_[l2] == inf_) {
          dist_[l2] = dist_[l] + 1;
          q.push(l2);
        }
      }
    }
    return found;
  }

  bool dfs(int l) {
    for (int r : adj_[l]) {
      const int l2 = match_r_[r];
      if (l2 < 0 || (dist_[l2] == dist_[l] + 1 && dfs(l2))) {
        match_l_[l] = r;
        match_r_[r] = l;
        return true;
      }
    }
    dist_[l] = inf_;
    return false;
  }

  int nl_, nr_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_l_, match_r_, dist_;
};

}  // namespace detail

// Bottleneck distance between the dimension-d parts of two diagrams.
// Essential classes must match in count (otherwise the distance is infinite)
// and are matched by sorted births; finite points are matched with diagonal
// augmentation, exactly over the finite set of candidate costs.
inline double bottleneck_distance(const persistence_diagram& d1, const persistence_diagram& d2,
                                  int dim) {
  std::vector<pd_pair> f1, f2;
  std::vector<double> e1, e2;
  for (const auto& p : d1.pairs) {
    if (p.dim != dim) continue;
    if (p.essential())
      e1.push_back(p.birth);
    else
      f1.push_back(p);
  }
  for (const auto& p : d2.pairs) {
    if (p.dim != dim) continue;
    if (p.essential())
      e2.push_back(p.birth);
    else
      f2.push_back(p);
  }

  if (e1.size() != e2.size()) return std::numeric_limits<double>::infinity();
  double essential_cost = 0.0;
  std::sort(e1.begin(), e1.end());
  std::sort(e2.begin(), e2.end());
  for (std::size_t i = 0; i < e1.size(); ++i)
    essential_cost = std::max(essential_cost, std::fabs(e1[i] - e2[i]));

  const int n1 = static_cast<int>(f1.size()), n2 = static_cast<int>(f2.size());
  if (n1 == 0 && n2 == 0) return essential_cost;

  const auto pair_cost = [&](int i, int j) {
    return std::max(std::fabs(f1[i].birth - f2[j].birth), std::fabs(f1[i].death - f2[j].death));
  };
  const auto diag1 = [&](int i) { return 0.5 * (f1[i].death - f1[i].birth); };
  const auto diag2 = [&](int j) { return 0.5 * (f2[j].death - f2[j].birth); };

  std::vector<double> candidates{0.0};
  for (int i = 0; i < n1; ++i) candidates.push_back(diag1(i));
  for (int j = 0; j < n2; ++j) candidates.push_back(diag2(j));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) candidates.push_back(pair_cost(i, j));
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Feasible at threshold t iff the bipartite graph on (points1 + diagonal
  // proxies) x (points2 + diagonal proxies) has a perfect matching.
  const int total = n1 + n2;
  const auto feasible = [&](double t) {
    detail::bipartite_matcher matcher(total, total);
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j)
        if (pair_cost(i, j) <= t) matcher.add_edge(i, j);
      if (diag1(i) <= t)
        for (int j = n2; j < total; ++j) matcher.add_edge(i, j);
    }
    for (int i = n1; i < total; ++i) {
      const int j2 = i - n1;
      if (diag2(j2) <= t) matcher.add_edge(i, j2);
      for (int j = n2; j < total; ++j) matcher.add_edge(i, j);
    }
    return matcher.max_matching() == total;
  };

  // the largest candidate is always feasible: it dominates every diagonal cost
  int lo = 0, hi = static_cast<int>(candidates.size()) - 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return std::max(essential_cost, candidates[lo]);
}

// Fraction of unordered pairs on which two labelings agree.
inline double rand_score(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rand_score: label length mismatch");
  if (a.size() < 2) throw std::invalid_argument("rand_score: need at least two items");
  std::int64_t agree = 0, total = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      ++total;
      if ((a[i] == a[j]) == (b[i] == b[j])) ++agree;
    }
  return static_cast<double>(agree) / static_cast<double>(total);
}

namespace detail {

// Cyclic Jacobi eigendecomposition of a symmetric matrix.
inline void jacobi_eigen(std::vector<double>& a, int n, std::vector<double>& eigvals,
                         std::vector<double>& eigvecs) {
  eigvecs.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eigvecs[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  auto V = [&](int i, int j) -> double& { return eigvecs[static_cast<std::size_t>(i) * n + j]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(A(p, q)) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  eigvals.resize(n);
  for (int i = 0; i < n; ++i) eigvals[i] = A(i, i);
}

}  // namespace detail

// Classical (Torgerson) MDS: double-center -D^2/2, take the top out_dim
// eigenpairs, truncate negative eigenvalues to zero. Exact up to rigid
// motion when the input distances are Euclidean of matching rank.
inline std::vector<point> classical_mds(const distance_matrix& dm, int out_dim) {
  const int n = dm.size;
  if (n < out_dim) throw std::invalid_argument("classical_mds: fewer points than output dims");
  std::vector<double> b(static_cast<std::size_t>(n) * n);
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double s = dm.at(i, j) * dm.at(i, j);
      b[static_cast<std::size_t>(i) * n + j] = s;
      row_mean[i] += s / n;
      grand += s / (static_cast<double>(n) * n);
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b[static_cast<std::size_t>(i) * n + j] =
          -0.5 * (b[static_cast<std::size_t>(i) * n + j] - row_mean[i] - row_mean[j] + grand);

  std::vector<double> eigvals, eigvecs;
  detail::jacobi_eigen(b, n, eigvals, eigvecs);

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int x, int y) {
    if (eigvals[x] != eigvals[y]) return eigvals[x] > eigvals[y];
    return x < y;
  });

  std::vector<point> coords(n, point(out_dim, 0.0));
  for (int d = 0; d < out_dim; ++d) {
    const int e = idx[d];
    const double lambda = std::max(eigvals[e], 0.0);
    const double scale = std::sqrt(lambda);
    // canonical sign: largest-magnitude component non-negative
    int arg = 0;
    for (int i = 1; i < n; ++i)
      if (std::fabs(eigvecs[static_cast<std::size_t>(i) * n + e]) >
          std::fabs(eigvecs[static_cast<std::size_t>(arg) * n + e]))
        arg = i;
    const double sign = eigvecs[static_cast<std::size_t>(arg) * n + e] < 0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i)
      coords[i][d] = sign * scale * eigvecs[static_cast<std::size_t>(i) * n + e];
  }
  return coords;
}

// Lloyd iterations from k-means++ seeding; deterministic for a fixed seed.
// An emptied cluster is re-seeded to the point farthest from its centroid.
inline std::vector<int> kmeans(const std::vector<point>& pts, int k, std::uint64_t seed,
                               int max_iters = 100) {
  const int n = static_cast<int>(pts.size());
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: k must be in [1, #points]");
  const int dim = static_cast<int>(pts[0].size());
  rng gen(seed);

  const auto sq_dist = [&](const point& a, const point& b) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  };

  // k-means++ seeding
  std::vector<point> centers;
  centers.push_back(pts[gen.below(n)]);
  std::vector<double> best(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      best[i] = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) best[i] = std::min(best[i], sq_dist(pts[i], c));
      total += best[i];
    }
    int chosen = 0;
    if (total > 0) {
      const double u = gen.uniform01() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += best[i];
        if (acc > u) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = static_cast<int>(gen.below(n));
    }
    centers.push_back(pts[chosen]);
  }

  std::vector<int> labels(n, 0);
  for (int iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int arg = 0;
      double bd = sq_dist(pts[i], centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(pts[i], centers[c]);
        if (d < bd) {
          bd = d;
          arg = c;
        }
      }
      if (labels[i] != arg) {
        labels[i] = arg;
        changed = true;
      }
    }
    std::vector<point> sums(k, point(dim, 0.0));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      ++counts[labels[i]];
      for (int d = 0; d < dim; ++d) sums[labels[i]][d] += pts[i][d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // farthest point overall from its current center restarts the cluster
        int far = 0;
        double fd = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d = sq_dist(pts[i], centers[labels[i]]);
          if (d > fd) {
            fd = d;
            far = i;
          }
        }
        centers[c] = pts[far];
        labels[far] = c;
        changed = true;
        continue;
      }
      for (int d = 0; d < dim; ++d) centers[c][d] = sums[c][d] / counts[c];
    }
    if (!changed && iter > 0) break;
  }
  return labels;
}

}  // namespace boxfilt
