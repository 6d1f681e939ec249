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

#pragma once

#include <string>
#include <vector>

#include "budgetmech/distribution.hpp"

namespace budgetmech {

struct LpTerm {
  int var;
  double coef;
};

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

// maximize c'x subject to rows and lb <= x <= ub. Lower bounds must be finite.
class LinearProgram {
 public:
  int add_variable(double objective, double lb = 0.0, double ub = kInfinity);
  // Throws std::invalid_argument for unknown variables or non-finite entries.
  int add_row(std::vector<LpTerm> terms, Sense sense, double rhs);

  int num_variables() const { return static_cast<int>(objective_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  struct Row {
    std::vector<LpTerm> terms;
    Sense sense;
    double rhs;
  };

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string to_string(LpStatus status);

struct LpOptions {
  double pivot_tol = 1e-9;
  int max_iterations = 500000;
  // Consecutive degenerate pivots before switching from Dantzig to Bland.
  int degenerate_limit = 50;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
  // Largest violation of any row or bound at x.
  double max_residual = 0.0;
  int iterations = 0;
};

// Dense two-phase primal simplex.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace budgetmech
