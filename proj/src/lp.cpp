#include "eadarp/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace eadarp {

int LinearProgram::add_variable(double cost) {
  cost_.push_back(cost);
  return static_cast<int>(cost_.size()) - 1;
}

void LinearProgram::add_constraint(std::vector<Term> terms, Sense sense, double rhs) {
  for (const auto& [var, coef] : terms) {
    if (var < 0 || var >= num_variables()) throw std::out_of_range("LinearProgram: unknown variable");
    (void)coef;
  }
  rows_.push_back({std::move(terms), sense, rhs});
}

namespace {

// Tableau over columns [structural | slack/surplus | artificial | rhs].
struct Tableau {
  int m = 0;
  int cols = 0;  // excluding rhs
  std::vector<double> a;  // (m + 1) x (cols + 1), last row is the objective
  std::vector<int> basis;

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols + 1) + static_cast<std::size_t>(c)]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols + 1) + static_cast<std::size_t>(c)]; }
  double& rhs(int r) { return at(r, cols); }

  void pivot(int pr, int pc) {
    const double p = at(pr, pc);
    for (int c = 0; c <= cols; ++c) at(pr, c) /= p;
    for (int r = 0; r <= m; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      for (int c = 0; c <= cols; ++c) at(r, c) -= f * at(pr, c);
    }
    basis[static_cast<std::size_t>(pr)] = pc;
  }

  // Minimizes the objective row (stored as reduced costs, row m). Columns at
  // or beyond `limit` may not enter. Returns false when unbounded.
  bool run(int limit, double tol) {
    for (int guard = 0; guard < 100000; ++guard) {
      int enter = -1;
      for (int c = 0; c < limit; ++c) {
        if (at(m, c) < -tol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m; ++r) {
        const double v = at(r, enter);
        if (v > tol) {
          const double ratio = at(r, cols) / v;
          if (ratio < best - tol ||
              (ratio <= best + tol && leave >= 0 && basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("LinearProgram: iteration limit reached");
  }
};

}  // namespace

LpResult LinearProgram::solve() const {
  const int n = num_variables();
  const int m = num_constraints();

  int extra = 0;
  int artificial = 0;
  for (const auto& row : rows_) {
    // Normalize to rhs >= 0 below; count columns after normalization.
    Sense s = row.sense;
    if (row.rhs < 0) s = s == Sense::le ? Sense::ge : (s == Sense::ge ? Sense::le : Sense::eq);
    if (s != Sense::eq) ++extra;
    if (s != Sense::le) ++artificial;
  }

  Tableau t;
  t.m = m;
  t.cols = n + extra + artificial;
  t.a.assign(static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(t.cols + 1), 0.0);
  t.basis.assign(static_cast<std::size_t>(m), -1);

  int slack_col = n;
  int art_col = n + extra;
  for (int r = 0; r < m; ++r) {
    const auto& row = rows_[static_cast<std::size_t>(r)];
    const double sign = row.rhs < 0 ? -1.0 : 1.0;
    Sense s = row.sense;
    if (sign < 0) s = s == Sense::le ? Sense::ge : (s == Sense::ge ? Sense::le : Sense::eq);
    for (const auto& [var, coef] : row.terms) t.at(r, var) += sign * coef;
    t.rhs(r) = sign * row.rhs;
    if (s == Sense::le) {
      t.at(r, slack_col) = 1.0;
      t.basis[static_cast<std::size_t>(r)] = slack_col++;
    } else {
      if (s == Sense::ge) t.at(r, slack_col++) = -1.0;
      t.at(r, art_col) = 1.0;
      t.basis[static_cast<std::size_t>(r)] = art_col++;
    }
  }

  LpResult result;
  const int first_art = n + extra;
  if (artificial > 0) {
    // Phase 1: minimize the sum of artificials.
    for (int c = first_art; c < t.cols; ++c) t.at(m, c) = 1.0;
    for (int r = 0; r < m; ++r) {
      if (t.basis[static_cast<std::size_t>(r)] >= first_art) {
        for (int c = 0; c <= t.cols; ++c) t.at(m, c) -= t.at(r, c);
      }
    }
    t.run(t.cols, tol_);
    if (-t.at(m, t.cols) > 1e-7) {
      result.status = LpStatus::infeasible;
      return result;
    }
    // Drive remaining artificials out of the basis where possible.
    for (int r = 0; r < m; ++r) {
      if (t.basis[static_cast<std::size_t>(r)] < first_art) continue;
      for (int c = 0; c < first_art; ++c) {
        if (std::abs(t.at(r, c)) > tol_) {
          t.pivot(r, c);
          break;
        }
      }
    }
  }

  // Phase 2 objective row: reduced costs c_j - c_B B^-1 A_j.
  for (int c = 0; c <= t.cols; ++c) t.at(m, c) = 0.0;
  for (int c = 0; c < n; ++c) t.at(m, c) = cost_[static_cast<std::size_t>(c)];
  for (int r = 0; r < m; ++r) {
    const int b = t.basis[static_cast<std::size_t>(r)];
    if (b < n && cost_[static_cast<std::size_t>(b)] != 0.0) {
      const double cb = cost_[static_cast<std::size_t>(b)];
      for (int c = 0; c <= t.cols; ++c) t.at(m, c) -= cb * t.at(r, c);
    }
  }
  if (!t.run(first_art, tol_)) {
    result.status = LpStatus::unbounded;
    return result;
  }

  result.status = LpStatus::optimal;
  result.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int r = 0; r < m; ++r) {
    const int b = t.basis[static_cast<std::size_t>(r)];
    if (b < n) result.x[static_cast<std::size_t>(b)] = t.at(r, t.cols);
  }
  double obj = 0;
  for (int c = 0; c < n; ++c) obj += cost_[static_cast<std::size_t>(c)] * result.x[static_cast<std::size_t>(c)];
  result.objective = obj;
  return result;
}

}  // namespace eadarp
