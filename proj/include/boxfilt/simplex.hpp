#pragma once

// Dense primal simplex over an explicit tableau. Entering column: most
// negative reduced cost, ties broken by lowest column index; after a run of
// degenerate pivots the rule switches to Bland's (lowest eligible index)
// until the objective moves again, which prevents cycling. Leaving row: min
// ratio, ties broken by lowest basis variable index. All rules are
// index-based, so identical inputs pivot identically.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace boxfilt {

enum class lp_status { optimal, infeasible, unbounded, iteration_limit };

struct simplex_options {
  long max_iterations = 0;  // 0: defaults to 10 * (#variables + #constraints)
  double reduced_cost_tol = 1e-9;
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-7;
  int stall_limit = 64;
};

// Constraint rows come first; row `rows()` is the phase-II objective and row
// `rows() + 1` the phase-I objective. The last column is the right-hand
// side. Objective rows store reduced costs with the rhs cell holding the
// negated objective value.
class simplex_tableau {
 public:
  simplex_tableau(int rows, int cols)
      : rows_(rows),
        cols_(cols),
        width_(cols + 1),
        data_(static_cast<std::size_t>(rows + 2) * static_cast<std::size_t>(cols + 1), 0.0),
        basis_(rows, -1),
        blocked_(cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * width_; }
  const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * width_; }
  double& at(int r, int c) { return row(r)[c]; }
  double& rhs(int r) { return row(r)[cols_]; }
  double* objective() { return row(rows_); }
  double* phase1_objective() { return row(rows_ + 1); }

  void set_basis(int r, int var) { basis_[r] = var; }
  int basis(int r) const { return basis_[r]; }
  void block_column(int c) { blocked_[c] = 1; }

  void extract(std::vector<double>& x) const {
    x.assign(cols_, 0.0);
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] >= 0) x[basis_[r]] = row(r)[cols_];
  }

  long iterations() const { return iterations_; }

  lp_status minimize(bool phase1, const simplex_options& opt) {
    const int obj = phase1 ? rows_ + 1 : rows_;
    const long max_iter =
        opt.max_iterations > 0 ? opt.max_iterations : 10L * (cols_ + rows_);
    bool bland = false;
    int stall = 0;
    double last = row(obj)[cols_];

    for (;;) {
      if (iterations_ >= max_iter) return lp_status::iteration_limit;

      const double* c = row(obj);
      int enter = -1;
      double best = -opt.reduced_cost_tol;
      if (bland) {
        for (int j = 0; j < cols_; ++j)
          if (!blocked_[j] && c[j] < -opt.reduced_cost_tol) {
            enter = j;
            break;
          }
      } else {
        for (int j = 0; j < cols_; ++j)
          if (!blocked_[j] && c[j] < best) {
            best = c[j];
            enter = j;
          }
      }
      if (enter < 0) return lp_status::optimal;

      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        const double a = row(r)[enter];
        if (a <= opt.pivot_tol) continue;
        const double ratio = row(r)[cols_] / a;
        const double tie = 1e-12 * (1.0 + std::fabs(best_ratio));
        if (leave < 0 || ratio < best_ratio - tie) {
          leave = r;
          best_ratio = ratio;
        } else if (ratio < best_ratio + tie && basis_[r] < basis_[leave]) {
          leave = r;
        }
      }
      if (leave < 0) return lp_status::unbounded;

      pivot(leave, enter);
      ++iterations_;

      const double cur = row(obj)[cols_];
      if (cur > last + 1e-12 * (1.0 + std::fabs(last))) {
        bland = false;
        stall = 0;
      } else if (++stall >= opt.stall_limit) {
        bland = true;
      }
      last = cur;
    }
  }

  void pivot(int r0, int c0) {
    double* pr = row(r0);
    const double p = pr[c0];
    const double inv = 1.0 / p;
    for (int j = 0; j <= cols_; ++j) pr[j] *= inv;
    pr[c0] = 1.0;
    for (int r = 0; r < rows_ + 2; ++r) {
      if (r == r0) continue;
      double* rr = row(r);
      const double f = rr[c0];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols_; ++j) rr[j] -= f * pr[j];
      rr[c0] = 0.0;
    }
    basis_[r0] = c0;
  }

 private:
  int rows_, cols_;
  std::size_t width_;
  std::vector<double> data_;
  std::vector<int> basis_;
  std::vector<char> blocked_;
  long iterations_ = 0;
};

enum class lp_rel { le, ge, eq };

struct lp_constraint {
  std::vector<double> coeffs;
  lp_rel rel;
  double rhs;
};

struct lp_result {
  lp_status status = lp_status::optimal;
  std::vector<double> x;
  double objective = 0.0;
  long iterations = 0;
};

// General-form solver: minimize c.x subject to the given rows and x >= 0.
// Builds slack/surplus columns, runs phase I over artificials when needed,
// then phase II.
inline lp_result solve_lp(const std::vector<double>& c, const std::vector<lp_constraint>& rows,
                          const simplex_options& opt = {}) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(rows.size());

  // Normalize rhs >= 0, count extra columns.
  std::vector<double> sign(m, 1.0);
  int n_slack = 0, n_art = 0;
  for (int r = 0; r < m; ++r) {
    lp_rel rel = rows[r].rel;
    if (rows[r].rhs < 0) {
      sign[r] = -1.0;
      rel = rel == lp_rel::le ? lp_rel::ge : (rel == lp_rel::ge ? lp_rel::le : lp_rel::eq);
    }
    if (rel != lp_rel::eq) ++n_slack;
    if (rel != lp_rel::le) ++n_art;
  }

  const int total = n + n_slack + n_art;
  simplex_tableau t(m, total);
  int slack_at = n, art_at = n + n_slack;
  bool need_phase1 = n_art > 0;

  for (int r = 0; r < m; ++r) {
    lp_rel rel = rows[r].rel;
    if (sign[r] < 0) rel = rel == lp_rel::le ? lp_rel::ge : (rel == lp_rel::ge ? lp_rel::le : lp_rel::eq);
    if (static_cast<int>(rows[r].coeffs.size()) != n)
      throw std::invalid_argument("solve_lp: constraint width mismatch");
    for (int j = 0; j < n; ++j) t.at(r, j) = sign[r] * rows[r].coeffs[j];
    t.rhs(r) = sign[r] * rows[r].rhs;
    if (rel == lp_rel::le) {
      t.at(r, slack_at) = 1.0;
      t.set_basis(r, slack_at++);
    } else if (rel == lp_rel::ge) {
      t.at(r, slack_at++) = -1.0;
      t.at(r, art_at) = 1.0;
      t.set_basis(r, art_at++);
    } else {
      t.at(r, art_at) = 1.0;
      t.set_basis(r, art_at++);
    }
  }

  // Phase-II objective; slack and artificial costs are zero, so this row is
  // canonical for the starting basis.
  for (int j = 0; j < n; ++j) t.objective()[j] = c[j];

  lp_result out;
  if (need_phase1) {
    // Phase-I objective: sum of artificials, canonicalized by subtracting
    // every artificial's row.
    double* p1 = t.phase1_objective();
    for (int r = 0; r < m; ++r) {
      if (t.basis(r) < n + n_slack) continue;
      const double* rr = t.row(r);
      for (int j = 0; j <= total; ++j) p1[j] -= rr[j];
      p1[t.basis(r)] = 0.0;
    }
    const lp_status st = t.minimize(true, opt);
    out.iterations = t.iterations();
    if (st == lp_status::iteration_limit) {
      out.status = st;
      return out;
    }
    if (t.phase1_objective()[total] < -opt.feasibility_tol) {
      out.status = lp_status::infeasible;
      return out;
    }
    for (int j = n + n_slack; j < total; ++j) t.block_column(j);
  }

  out.status = t.minimize(false, opt);
  out.iterations = t.iterations();
  if (out.status == lp_status::optimal) {
    std::vector<double> full;
    t.extract(full);
    out.x.assign(full.begin(), full.begin() + n);
    out.objective = 0.0;
    for (int j = 0; j < n; ++j) out.objective += c[j] * out.x[j];
  }
  return out;
}

}  // namespace boxfilt
