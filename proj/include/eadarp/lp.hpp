#pragma once

#include <utility>
#include <vector>

namespace eadarp {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0;
  std::vector<double> x;
};

// minimize c'x subject to linear rows and x >= 0. Dense two-phase simplex
// with Bland's rule; intended for the small scheduling LPs only.
class LinearProgram {
 public:
  enum class Sense { le, ge, eq };
  using Term = std::pair<int, double>;

  explicit LinearProgram(double tol = 1e-9) : tol_(tol) {}

  int add_variable(double cost = 0.0);
  void add_constraint(std::vector<Term> terms, Sense sense, double rhs);

  int num_variables() const { return static_cast<int>(cost_.size()); }
  int num_constraints() const { return static_cast<int>(rows_.size()); }

  LpResult solve() const;

 private:
  struct Row {
    std::vector<Term> terms;
    Sense sense;
    double rhs;
  };
  double tol_;
  std::vector<double> cost_;
  std::vector<Row> rows_;
};

}  // namespace eadarp
