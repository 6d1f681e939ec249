// Copyright 2026 The budgetmech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "budgetmech/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace budgetmech {

int LinearProgram::add_variable(double objective, double lb, double ub) {
  if (!std::isfinite(objective) || !std::isfinite(lb) || std::isnan(ub) || ub < lb) {
    throw std::invalid_argument("add_variable: need finite objective and lower bound, ub >= lb");
  }
  objective_.push_back(objective);
  lower_.push_back(lb);
  upper_.push_back(ub);
  return num_variables() - 1;
}

int LinearProgram::add_row(std::vector<LpTerm> terms, Sense sense, double rhs) {
  if (!std::isfinite(rhs)) throw std::invalid_argument("add_row: rhs must be finite");
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= num_variables()) throw std::invalid_argument("add_row: unknown variable");
    if (!std::isfinite(t.coef)) throw std::invalid_argument("add_row: coefficient must be finite");
  }
  rows_.push_back({std::move(terms), sense, rhs});
  return num_rows() - 1;
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
  }
  return "unknown";
}

namespace {

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), a_(static_cast<std::size_t>(rows + 1) * (cols + 1), 0.0) {}

  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * (n_ + 1) + j]; }
  double& rhs(int i) { return at(i, n_); }
  // Row m_ holds reduced costs; its rhs cell holds minus the objective.
  double& cost(int j) { return at(m_, j); }

  int rows() const { return m_; }
  int cols() const { return n_; }

  void pivot(int r, int c) {
    double* pr = &at(r, 0);
    const double inv = 1.0 / pr[c];
    for (int j = 0; j <= n_; ++j) pr[j] *= inv;
    pr[c] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* pi = &at(i, 0);
      const double f = pi[c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) pi[j] -= f * pr[j];
      pi[c] = 0.0;
    }
  }

 private:
  int m_;
  int n_;
  std::vector<double> a_;
};

constexpr double kFeasTol = 1e-9;
constexpr double kRelativePivot = 1e-2;

enum class Step { kOptimal, kUnbounded, kLimit };

struct Simplex {
  Tableau& t;
  std::vector<int>& basis;
  const std::vector<char>& enterable;
  const LpOptions& opt;
  int& iterations;

  Step run() {
    bool bland = false;
    int degenerate = 0;
    for (;;) {
      if (iterations >= opt.max_iterations) return Step::kLimit;
      int c = -1;
      double best = opt.pivot_tol;
      for (int j = 0; j < t.cols(); ++j) {
        if (!enterable[static_cast<std::size_t>(j)]) continue;
        const double rc = t.cost(j);
        if (rc > best) {
          c = j;
          if (bland) break;
          best = rc;
        }
      }
      if (c < 0) return Step::kOptimal;

      const int r = bland ? bland_row(c) : harris_row(c);
      if (r < 0) return Step::kUnbounded;

      const double ratio = level(r) / t.at(r, c);
      if (ratio <= 1e-12) {
        if (++degenerate >= opt.degenerate_limit) bland = true;
      } else {
        degenerate = 0;
      }
      t.pivot(r, c);
      basis[static_cast<std::size_t>(r)] = c;
      // Roundoff can leave basic levels slightly negative.
      for (int i = 0; i < t.rows(); ++i) {
        if (t.rhs(i) < 0.0 && t.rhs(i) > -kFeasTol) t.rhs(i) = 0.0;
      }
      ++iterations;
    }
  }

  double level(int i) const { return std::max(0.0, t.rhs(i)); }

  // Rows within the Harris bound, restricted to pivots of reasonable size,
  // ties to the smallest basic index.
  int bland_row(int c) const {
    const double bound = harris_bound(c);
    if (bound == kInfinity) return -1;
    double biggest = 0.0;
    for (int i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, c);
      if (a > opt.pivot_tol && level(i) / a <= bound) biggest = std::max(biggest, a);
    }
    int r = -1;
    for (int i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, c);
      if (a < kRelativePivot * biggest || a <= opt.pivot_tol || level(i) / a > bound) continue;
      if (r < 0 || basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(r)]) r = i;
    }
    return r;
  }

  double harris_bound(int c) const {
    double bound = kInfinity;
    for (int i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, c);
      if (a > opt.pivot_tol) bound = std::min(bound, (level(i) + kFeasTol) / a);
    }
    return bound;
  }

  // Two-pass ratio test: bound the step with a small feasibility slack, then
  // take the largest pivot element among rows within that bound.
  int harris_row(int c) const {
    const double bound = harris_bound(c);
    if (bound == kInfinity) return -1;
    int r = -1;
    for (int i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, c);
      if (a <= opt.pivot_tol || level(i) / a > bound) continue;
      if (r < 0 || a > t.at(r, c)) r = i;
    }
    return r;
  }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options) {
  const int n = lp.num_variables();
  const auto& lower = lp.lower();
  const auto& upper = lp.upper();

  struct StdRow {
    std::vector<LpTerm> terms;
    Sense sense;
    double rhs;
  };
  std::vector<StdRow> rows;
  for (const auto& row : lp.rows()) {
    StdRow s{row.terms, row.sense, row.rhs};
    for (const auto& term : row.terms) s.rhs -= term.coef * lower[static_cast<std::size_t>(term.var)];
    rows.push_back(std::move(s));
  }
  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    if (std::isfinite(upper[uj])) rows.push_back({{{j, 1.0}}, Sense::kLessEqual, upper[uj] - lower[uj]});
  }
  for (auto& s : rows) {
    if (s.rhs < 0.0 || (s.rhs == 0.0 && s.sense == Sense::kGreaterEqual)) {
      for (auto& term : s.terms) term.coef = -term.coef;
      s.rhs = -s.rhs;
      if (s.sense == Sense::kLessEqual) {
        s.sense = Sense::kGreaterEqual;
      } else if (s.sense == Sense::kGreaterEqual) {
        s.sense = Sense::kLessEqual;
      }
    }
  }

  const int m = static_cast<int>(rows.size());
  int n_slack = 0;
  int n_art = 0;
  for (const auto& s : rows) {
    if (s.sense != Sense::kEqual) ++n_slack;
    if (s.sense != Sense::kLessEqual) ++n_art;
  }
  const int first_art = n + n_slack;
  const int cols = first_art + n_art;

  Tableau t(m, cols);
  std::vector<int> basis(static_cast<std::size_t>(m), -1);
  std::vector<int> slack_of(static_cast<std::size_t>(m), -1);
  std::vector<int> unit_of(static_cast<std::size_t>(m), -1);
  int slack = n;
  int art = first_art;
  for (int i = 0; i < m; ++i) {
    const auto& s = rows[static_cast<std::size_t>(i)];
    for (const auto& term : s.terms) t.at(i, term.var) += term.coef;
    t.rhs(i) = s.rhs;
    const auto ui = static_cast<std::size_t>(i);
    if (s.sense == Sense::kLessEqual) {
      t.at(i, slack) = 1.0;
      slack_of[ui] = slack;
      unit_of[ui] = slack;
      basis[ui] = slack++;
    } else {
      if (s.sense == Sense::kGreaterEqual) {
        t.at(i, slack) = -1.0;
        slack_of[ui] = slack++;
      }
      t.at(i, art) = 1.0;
      unit_of[ui] = art;
      basis[ui] = art++;
    }
  }

  LpSolution out;
  std::vector<char> enterable(static_cast<std::size_t>(cols), 1);

  // Phase one: maximize minus the sum of artificials.
  if (n_art > 0) {
    for (int i = 0; i < m; ++i) {
      if (basis[static_cast<std::size_t>(i)] < first_art) continue;
      for (int j = 0; j <= cols; ++j) t.at(m, j) += t.at(i, j);
    }
    for (int j = first_art; j < cols; ++j) t.cost(j) = 0.0;
    Simplex phase1{t, basis, enterable, options, out.iterations};
    if (phase1.run() == Step::kLimit) {
      out.status = LpStatus::kIterationLimit;
      return out;
    }
    double scale = 1.0;
    for (const auto& s : rows) scale = std::max(scale, std::fabs(s.rhs));
    if (t.at(m, cols) > 1e-9 * scale) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (basis[static_cast<std::size_t>(i)] < first_art) continue;
      for (int j = 0; j < first_art; ++j) {
        if (std::fabs(t.at(i, j)) > options.pivot_tol) {
          t.pivot(i, j);
          basis[static_cast<std::size_t>(i)] = j;
          break;
        }
      }
    }
    for (int j = first_art; j < cols; ++j) enterable[static_cast<std::size_t>(j)] = 0;
  }

  // Phase two.
  const auto& c = lp.objective();
  auto cost_of = [&](int j) { return j < n ? c[static_cast<std::size_t>(j)] : 0.0; };
  for (int j = 0; j <= cols; ++j) t.at(m, j) = j < cols ? cost_of(j) : 0.0;
  for (int i = 0; i < m; ++i) {
    const double cb = cost_of(basis[static_cast<std::size_t>(i)]);
    if (cb == 0.0) continue;
    for (int j = 0; j <= cols; ++j) t.at(m, j) -= cb * t.at(i, j);
  }
  Simplex phase2{t, basis, enterable, options, out.iterations};
  const Step step = phase2.run();
  if (step == Step::kLimit) {
    out.status = LpStatus::kIterationLimit;
    return out;
  }
  if (step == Step::kUnbounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  // The unit columns of the starting basis now hold the basis inverse; use it
  // to polish the basic levels against the original rows.
  std::vector<double> z(static_cast<std::size_t>(cols));
  std::vector<double> r(static_cast<std::size_t>(m));
  for (int pass = 0; pass < 2; ++pass) {
    std::fill(z.begin(), z.end(), 0.0);
    for (int i = 0; i < m; ++i) z[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] = t.rhs(i);
    for (int i = 0; i < m; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const auto& s = rows[ui];
      double lhs = 0.0;
      for (const auto& term : s.terms) lhs += term.coef * z[static_cast<std::size_t>(term.var)];
      if (slack_of[ui] >= 0) lhs += (s.sense == Sense::kLessEqual ? 1.0 : -1.0) * z[static_cast<std::size_t>(slack_of[ui])];
      if (s.sense != Sense::kLessEqual) lhs += z[static_cast<std::size_t>(unit_of[ui])];
      r[ui] = s.rhs - lhs;
    }
    for (int k = 0; k < m; ++k) {
      double d = 0.0;
      for (int i = 0; i < m; ++i) d += t.at(k, unit_of[static_cast<std::size_t>(i)]) * r[static_cast<std::size_t>(i)];
      t.rhs(k) += d;
    }
  }

  out.status = LpStatus::kOptimal;
  out.x.assign(lower.begin(), lower.end());
  for (int i = 0; i < m; ++i) {
    const int b = basis[static_cast<std::size_t>(i)];
    if (b < n) out.x[static_cast<std::size_t>(b)] += t.rhs(i);
  }
  for (int j = 0; j < n; ++j) out.value += c[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];

  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    out.max_residual = std::max(out.max_residual, lower[uj] - out.x[uj]);
    if (std::isfinite(upper[uj])) out.max_residual = std::max(out.max_residual, out.x[uj] - upper[uj]);
  }
  for (const auto& row : lp.rows()) {
    double lhs = 0.0;
    for (const auto& term : row.terms) lhs += term.coef * out.x[static_cast<std::size_t>(term.var)];
    const double d = lhs - row.rhs;
    const double viol = row.sense == Sense::kLessEqual ? d : row.sense == Sense::kGreaterEqual ? -d : std::fabs(d);
    out.max_residual = std::max(out.max_residual, viol);
  }
  return out;
}

}  // namespace budgetmech
