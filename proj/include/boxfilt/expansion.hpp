#pragma once

// Box-expansion linear program and the largest-optimal / k-optimal
// expansion steps.
//
// A problem fixes a pivot box V, a neighborhood N (an open box strictly
// containing V), a trade-off parameter alpha and the cover entities: either
// the data points inside N, or the occupied-pixel centroids inside N with
// their point counts. The LP minimizes
//
//     -alpha * sum_e theta_e * w_e  +  (1 - alpha) * total_width(V~)
//
// over boxes V~ with V <= V~ <= closure(N), where each weight obeys
// w_e <= min over dimensions of the face distances and w_e <= cap
// (cap = 0 for points, half the pixel width for pixel centroids).
//
// Internally the LP is rewritten in the non-negative variables
// a_i = l_i - l~_i, b_i = u~_i - u_i and t_e = cap - w_e. Constraints with a
// non-positive right-hand side can never bind and are dropped, and for each
// entity the row with the largest residual starts with t_e basic, which
// yields a feasible starting basis without a phase-I pass. Only the extra
// minimum-width row (used by the binary search for the largest optimum)
// requires one artificial variable.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "boxfilt/box.hpp"
#include "boxfilt/simplex.hpp"

namespace boxfilt {

enum class cover_kind { points, pixels };

struct solver_config {
  double cost_tolerance = 1e-6;        // relative cost-equality tolerance
  double binary_search_epsilon = 0.1;  // resolution of the width search
  long max_simplex_iterations = 0;     // 0: 10 * (#variables + #constraints)
};

class expansion_problem {
 public:
  box pivot;
  double alpha = 0.0;
  double pi = 0.0;
  box nbhd;  // open region; bounds stored closed
  cover_kind kind = cover_kind::points;
  double pixel_width = 0.0;  // 0 for point covers
  double cap = 0.0;          // weight upper bound

  // Entities strictly inside the neighborhood, flattened row-major.
  std::vector<double> coords;
  std::vector<double> theta;
  std::vector<int> ids;

  int dim() const { return pivot.dim(); }
  int entity_count() const { return static_cast<int>(theta.size()); }
  const double* entity(int e) const { return coords.data() + static_cast<std::size_t>(e) * dim(); }

  static expansion_problem point_cover(box pivot, const point_cloud& pcd, double alpha, double pi) {
    box n = neighborhood(pivot, pi);
    return point_cover_in(std::move(pivot), pcd, alpha, pi, std::move(n));
  }

  static expansion_problem point_cover_in(box pivot, const point_cloud& pcd, double alpha,
                                          double pi, box nbhd) {
    expansion_problem p;
    p.kind = cover_kind::points;
    p.cap = 0.0;
    p.init(std::move(pivot), alpha, pi, std::move(nbhd));
    for (std::size_t i = 0; i < pcd.points.size(); ++i)
      if (p.nbhd.strictly_contains(pcd.points[i]))
        p.push_entity(pcd.points[i], 1.0, static_cast<int>(i));
    return p;
  }

  static expansion_problem pixel_cover(box pivot, const pixel_grid& grid, double alpha, double pi) {
    box n = neighborhood(pivot, pi);
    return pixel_cover_in(std::move(pivot), grid, alpha, pi, std::move(n));
  }

  static expansion_problem pixel_cover_in(box pivot, const pixel_grid& grid, double alpha,
                                          double pi, box nbhd) {
    expansion_problem p;
    p.kind = cover_kind::pixels;
    p.pixel_width = grid.pixel_width;
    p.cap = 0.5 * grid.pixel_width;
    p.init(std::move(pivot), alpha, pi, std::move(nbhd));
    int ordinal = 0;
    for (const auto& [idx, cell] : grid.cells) {
      if (p.nbhd.strictly_contains(cell.centroid))
        p.push_entity(cell.centroid, static_cast<double>(cell.count), ordinal);
      ++ordinal;
    }
    return p;
  }

 private:
  void init(box pv, double a, double step, box n) {
    if (a < 0.0 || a > 1.0) throw std::invalid_argument("expansion_problem: alpha outside [0,1]");
    if (step <= 0.0) throw std::invalid_argument("expansion_problem: pi must be positive");
    require_same_dim(pv, n);
    for (int i = 0; i < pv.dim(); ++i)
      if (!(n.lo[i] < pv.lo[i] && pv.hi[i] < n.hi[i]))
        throw std::invalid_argument("expansion_problem: pivot must lie strictly inside the neighborhood");
    pivot = std::move(pv);
    alpha = a;
    pi = step;
    nbhd = std::move(n);
  }

  void push_entity(const point& x, double weight, int id) {
    coords.insert(coords.end(), x.begin(), x.end());
    theta.push_back(weight);
    ids.push_back(id);
  }
};

enum class expansion_status { optimal, infeasible };

struct expansion_solution {
  expansion_status status = expansion_status::optimal;
  box grown;
  double cost = 0.0;
  std::vector<std::pair<int, double>> weights;  // entity id -> tight weight
  bool is_largest = false;
};

namespace detail {

inline bool approx_ge(double a, double b, double tol) { return a >= b - tol * (1.0 + std::fabs(b)); }

// Tight weights and objective value of a candidate box.
inline void tight_cost(const expansion_problem& p, const box& candidate, double& cost_out,
                       std::vector<std::pair<int, double>>* weights_out) {
  const int n = p.dim();
  double acc = 0.0;
  if (weights_out) {
    weights_out->clear();
    weights_out->reserve(p.entity_count());
  }
  for (int e = 0; e < p.entity_count(); ++e) {
    const double* x = p.entity(e);
    double w = p.cap;
    for (int i = 0; i < n; ++i) {
      w = std::min(w, x[i] - candidate.lo[i]);
      w = std::min(w, candidate.hi[i] - x[i]);
    }
    acc += p.theta[e] * w;
    if (weights_out) weights_out->emplace_back(p.ids[e], w);
  }
  cost_out = -p.alpha * acc + (1.0 - p.alpha) * candidate.total_width();
}

// Core solve; min_total_width, when given, adds the binary-search constraint
// total_width(V~) >= min_total_width.
inline expansion_solution solve_box_lp(const expansion_problem& p, const solver_config& cfg,
                                       const double* min_total_width) {
  const int n = p.dim();
  const int ne = p.entity_count();

  std::vector<double> amax(n), bmax(n);
  double room = 0.0;
  for (int i = 0; i < n; ++i) {
    amax[i] = p.pivot.lo[i] - p.nbhd.lo[i];
    bmax[i] = p.nbhd.hi[i] - p.pivot.hi[i];
    room += amax[i] + bmax[i];
  }

  double width_rhs = 0.0;
  bool want_width = false;
  if (min_total_width) {
    width_rhs = *min_total_width - p.pivot.total_width();
    want_width = width_rhs > 0.0;
    if (width_rhs > room + 1e-9 * (1.0 + room)) {
      expansion_solution out;
      out.status = expansion_status::infeasible;
      return out;
    }
  }

  // Collect binding constraint rows per entity: (expansion column, residual).
  struct crow {
    int y;
    double r;
  };
  std::vector<std::vector<crow>> kept(ne);
  int n_rows_entities = 0, n_t = 0;
  for (int e = 0; e < ne; ++e) {
    const double* x = p.entity(e);
    auto& rows = kept[e];
    for (int i = 0; i < n; ++i) {
      const double rl = p.cap + (p.pivot.lo[i] - x[i]);
      if (rl > 0.0) rows.push_back({i, rl});
      const double rh = p.cap + (x[i] - p.pivot.hi[i]);
      if (rh > 0.0) rows.push_back({n + i, rh});
    }
    if (!rows.empty()) {
      ++n_t;
      n_rows_entities += static_cast<int>(rows.size());
    }
  }

  const int rows = n_rows_entities + 2 * n + (want_width ? 1 : 0);
  const int col_t0 = 2 * n;
  const int col_s0 = col_t0 + n_t;
  const int col_bnd0 = col_s0 + n_rows_entities;
  const int col_g = col_bnd0 + 2 * n;
  const int col_z = col_g + 1;
  const int cols = want_width ? col_z + 1 : col_bnd0 + 2 * n;

  simplex_tableau t(rows, cols);
  double* obj = t.objective();
  for (int i = 0; i < 2 * n; ++i) obj[i] = 1.0 - p.alpha;

  int row = 0, tcol = col_t0, scol = col_s0;
  for (int e = 0; e < ne; ++e) {
    const auto& rws = kept[e];
    if (rws.empty()) continue;
    int star = 0;
    for (int k = 1; k < static_cast<int>(rws.size()); ++k)
      if (rws[k].r > rws[star].r) star = k;
    const int s_star = scol + star;
    // Row of the dominating constraint: t_e + y* - s* = r*, with t_e basic.
    t.at(row, tcol) = 1.0;
    t.at(row, rws[star].y) += 1.0;
    t.at(row, s_star) = -1.0;
    t.rhs(row) = rws[star].r;
    t.set_basis(row, tcol);
    const int star_row = row;
    ++row;
    // Remaining constraints, pre-eliminated against the dominating row:
    // y* - y_k + s_k - s* = r* - r_k >= 0, with s_k basic.
    for (int k = 0; k < static_cast<int>(rws.size()); ++k) {
      if (k == star) continue;
      t.at(row, rws[star].y) += 1.0;
      t.at(row, rws[k].y) -= 1.0;
      t.at(row, scol + k) = 1.0;
      t.at(row, s_star) = -1.0;
      t.rhs(row) = rws[star].r - rws[k].r;
      t.set_basis(row, scol + k);
      ++row;
    }
    // Canonicalize the objective against the basic t_e.
    const double ct = p.alpha * p.theta[e];
    if (ct != 0.0) {
      const double* sr = t.row(star_row);
      for (int j = 0; j <= cols; ++j) obj[j] -= ct * sr[j];
      obj[tcol] = 0.0;
    }
    scol += static_cast<int>(rws.size());
    ++tcol;
  }

  // Per-face expansion bounds keep the box inside the neighborhood closure.
  for (int i = 0; i < 2 * n; ++i) {
    t.at(row, i) = 1.0;
    t.at(row, col_bnd0 + i) = 1.0;
    t.rhs(row) = i < n ? amax[i] : bmax[i - n];
    t.set_basis(row, col_bnd0 + i);
    ++row;
  }

  simplex_options sopt;
  sopt.max_iterations =
      cfg.max_simplex_iterations > 0 ? cfg.max_simplex_iterations : 10L * (cols + rows);

  if (want_width) {
    for (int i = 0; i < 2 * n; ++i) t.at(row, i) = 1.0;
    t.at(row, col_g) = -1.0;
    t.at(row, col_z) = 1.0;
    t.rhs(row) = width_rhs;
    t.set_basis(row, col_z);
    double* p1 = t.phase1_objective();
    const double* wr = t.row(row);
    for (int j = 0; j <= cols; ++j) p1[j] -= wr[j];
    p1[col_z] = 0.0;
    ++row;

    const lp_status st = t.minimize(true, sopt);
    if (st == lp_status::iteration_limit)
      throw std::runtime_error("expansion LP exceeded the simplex iteration limit (" +
                               std::to_string(sopt.max_iterations) + ")");
    if (t.phase1_objective()[cols] < -1e-7) {
      expansion_solution out;
      out.status = expansion_status::infeasible;
      return out;
    }
    t.block_column(col_z);
  }

  const lp_status st = t.minimize(false, sopt);
  if (st == lp_status::iteration_limit)
    throw std::runtime_error("expansion LP exceeded the simplex iteration limit (" +
                             std::to_string(sopt.max_iterations) + ")");
  if (st != lp_status::optimal)
    throw std::logic_error("expansion LP is bounded by construction; solver disagreed");

  std::vector<double> x;
  t.extract(x);
  point lo(p.pivot.lo), hi(p.pivot.hi);
  for (int i = 0; i < n; ++i) {
    lo[i] -= std::clamp(x[i], 0.0, amax[i]);
    hi[i] += std::clamp(x[n + i], 0.0, bmax[i]);
  }

  expansion_solution out;
  out.grown = box(std::move(lo), std::move(hi));
  tight_cost(p, out.grown, out.cost, &out.weights);
  return out;
}

}  // namespace detail

// Objective value of an explicit candidate box, using tight weights.
inline double objective_cost(const box& candidate, const expansion_problem& p) {
  require_same_dim(candidate, p.pivot);
  const double tol = 1e-9;
  for (int i = 0; i < p.dim(); ++i) {
    const double s = 1.0 + std::fabs(p.pivot.lo[i]) + std::fabs(p.pivot.hi[i]);
    if (candidate.lo[i] > p.pivot.lo[i] + tol * s || candidate.hi[i] < p.pivot.hi[i] - tol * s)
      throw std::invalid_argument("objective_cost: candidate does not contain the pivot");
    if (candidate.lo[i] < p.nbhd.lo[i] - tol * s || candidate.hi[i] > p.nbhd.hi[i] + tol * s)
      throw std::invalid_argument("objective_cost: candidate leaves the neighborhood closure");
  }
  double cost;
  detail::tight_cost(p, candidate, cost, nullptr);
  return cost;
}

// Plain LP solve; with extra_min_width = P the solution is additionally
// required to satisfy total_width >= total_width(plain optimum) + P.
inline expansion_solution solve_expansion_lp(const expansion_problem& p, const solver_config& cfg,
                                             std::optional<double> extra_min_width = std::nullopt) {
  expansion_solution base = detail::solve_box_lp(p, cfg, nullptr);
  if (!extra_min_width) return base;
  if (*extra_min_width < 0.0)
    throw std::invalid_argument("solve_expansion_lp: extra_min_width must be non-negative");
  const double target = base.grown.total_width() + *extra_min_width;
  return detail::solve_box_lp(p, cfg, &target);
}

namespace detail {

// Push every face outward to the farthest cost-equal breakpoint. The cost is
// convex piecewise linear in each face coordinate with breakpoints where an
// entity's weight switches to this face, so the acceptable positions form an
// interval and scanning outward candidates in order is exact. Run after the
// width search converges: it lands on the true largest optimum instead of
// stopping binary_search_epsilon short of it.
inline void widen_exact(const expansion_problem& p, expansion_solution& sol, double c_star,
                        double tol) {
  const int n = p.dim();
  box& b = sol.grown;
  std::vector<double> cand;
  for (int sweep = 0; sweep < 32; ++sweep) {
    bool moved = false;
    for (int f = 0; f < 2 * n; ++f) {
      const int i = f % n;
      const bool lower = f < n;
      const double face = lower ? b.lo[i] : b.hi[i];
      const double limit = lower ? p.nbhd.lo[i] : p.nbhd.hi[i];
      cand.clear();
      for (int e = 0; e < p.entity_count(); ++e) {
        const double* x = p.entity(e);
        double rest = p.cap;
        for (int j = 0; j < n; ++j) {
          if (j != i) {
            rest = std::min(rest, x[j] - b.lo[j]);
            rest = std::min(rest, b.hi[j] - x[j]);
          }
        }
        rest = std::min(rest, lower ? b.hi[i] - x[i] : x[i] - b.lo[i]);
        const double pos = lower ? x[i] - rest : x[i] + rest;
        if (lower ? (pos < face && pos >= limit) : (pos > face && pos <= limit))
          cand.push_back(pos);
      }
      cand.push_back(limit);
      std::sort(cand.begin(), cand.end());
      if (lower) std::reverse(cand.begin(), cand.end());
      for (double pos : cand) {
        if (lower ? pos >= face : pos <= face) continue;
        const double keep = lower ? b.lo[i] : b.hi[i];
        (lower ? b.lo[i] : b.hi[i]) = pos;
        double c;
        tight_cost(p, b, c, nullptr);
        if (std::fabs(c - c_star) <= tol * (1.0 + std::fabs(c_star))) {
          moved = true;
        } else {
          (lower ? b.lo[i] : b.hi[i]) = keep;
          break;
        }
      }
    }
    if (!moved) break;
  }
}

inline expansion_solution widen_to_largest(const expansion_problem& p, const solver_config& cfg,
                                           long max_probes) {
  expansion_solution best = solve_box_lp(p, cfg, nullptr);
  const double c_star = best.cost;
  const double w_star = best.grown.total_width();

  double lo = p.kind == cover_kind::pixels ? p.pixel_width : 0.0;
  double hi = p.nbhd.total_width() - w_star;
  long probes = 0;
  while (hi - lo > cfg.binary_search_epsilon && probes < max_probes) {
    const double probe = 0.5 * (lo + hi);
    const double target = w_star + probe;
    expansion_solution cand = solve_box_lp(p, cfg, &target);
    if (cand.status == expansion_status::optimal &&
        std::fabs(cand.cost - c_star) <= cfg.cost_tolerance * (1.0 + std::fabs(c_star))) {
      // Optima are closed under union, so merging accepted probes keeps the
      // running box optimal and guarantees it contains the plain optimum.
      box merged = box_union(best.grown, cand.grown);
      if (merged == cand.grown) {
        best = std::move(cand);
      } else {
        best.grown = std::move(merged);
        tight_cost(p, best.grown, best.cost, &best.weights);
      }
      lo = probe;
    } else {
      hi = probe;
    }
    ++probes;
  }
  best.is_largest = hi - lo <= cfg.binary_search_epsilon;
  if (best.is_largest) {
    widen_exact(p, best, c_star, cfg.cost_tolerance);
    tight_cost(p, best.grown, best.cost, &best.weights);
  }
  return best;
}

}  // namespace detail

inline expansion_solution largest_optimal_expansion(const expansion_problem& p,
                                                    const solver_config& cfg) {
  return detail::widen_to_largest(p, cfg, 256);
}

inline expansion_solution k_optimal_expansion(const expansion_problem& p, const solver_config& cfg,
                                              int k) {
  if (k < 1) throw std::invalid_argument("k_optimal_expansion: k must be at least 1");
  return detail::widen_to_largest(p, cfg, k);
}

struct facet_bound_report {
  bool applicable = false;
  bool holds = false;
  double gamma = 0.0;
  int facets_off_pivot = 0;     // p: facets of M not meeting V
  int facets_off_nbhd = 0;      // q: facets of M strictly inside N
  double theta_outside = 0.0;   // mass strictly outside M
  double theta_boundary = 0.0;  // mass within the weight cap of a facet of M
};

// Sanity bounds on the largest optimal solution M relating gamma = 1/alpha - 1
// to the uncovered mass and the number of free facets:
//
//     (theta(N \ M) + theta_boundary) / p  >=  gamma  >=  theta(N \ M) / q.
//
// The boundary mass is the entities inside M whose weight would drop under an
// inward facet offset: for point covers these are exactly the points on the
// facets of M; for pixel covers also whole pixels whose centroid sits at the
// cap distance from a facet, since their weight is capped rather than zero.
inline facet_bound_report verify_facet_bounds(const expansion_problem& p, const box& m) {
  facet_bound_report rep;
  if (p.alpha <= 0.0 || p.alpha >= 1.0) return rep;

  const auto near = [](double a, double b) {
    return std::fabs(a - b) <= 1e-9 * (1.0 + std::max(std::fabs(a), std::fabs(b)));
  };

  bool same = true;
  for (int i = 0; i < p.dim(); ++i) {
    if (!near(m.lo[i], p.pivot.lo[i])) {
      same = false;
      ++rep.facets_off_pivot;
    }
    if (!near(m.hi[i], p.pivot.hi[i])) {
      same = false;
      ++rep.facets_off_pivot;
    }
    if (m.lo[i] > p.nbhd.lo[i] && !near(m.lo[i], p.nbhd.lo[i])) ++rep.facets_off_nbhd;
    if (m.hi[i] < p.nbhd.hi[i] && !near(m.hi[i], p.nbhd.hi[i])) ++rep.facets_off_nbhd;
  }
  if (same) return rep;  // M == V: not applicable
  rep.applicable = true;
  rep.gamma = 1.0 / p.alpha - 1.0;

  for (int e = 0; e < p.entity_count(); ++e) {
    point x(p.entity(e), p.entity(e) + p.dim());
    if (!m.contains(x)) {
      rep.theta_outside += p.theta[e];
      continue;
    }
    double face_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p.dim(); ++i)
      face_dist = std::min({face_dist, x[i] - m.lo[i], m.hi[i] - x[i]});
    if (face_dist <= p.cap + 1e-9) rep.theta_boundary += p.theta[e];
  }

  const double slack = 1e-9;
  const bool upper_ok =
      rep.facets_off_pivot > 0 &&
      (rep.theta_outside + rep.theta_boundary) / rep.facets_off_pivot >= rep.gamma - slack;
  const bool lower_ok =
      rep.theta_outside == 0.0 ||
      (rep.facets_off_nbhd > 0 &&
       rep.theta_outside / rep.facets_off_nbhd <= rep.gamma + slack);
  rep.holds = upper_ok && lower_ok;
  return rep;
}

}  // namespace boxfilt
