#pragma once

#include <cstddef>
#include <vector>

namespace dagcast::lp {

inline constexpr double kFeasibilityTolerance = 1e-9;

// maximize objective . x  subject to  rows x <= rhs,  x >= 0,  rhs >= 0.
// Every LP in this library fits the form: a slack basis is feasible, so no
// phase one is needed.
struct Problem {
  std::size_t variables = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;

  explicit Problem(std::size_t num_variables)
      : variables(num_variables), objective(num_variables, 0.0) {}

  // Appends an empty row with the given bound and returns its index.
  std::size_t add_row(double bound);
  double& at(std::size_t row, std::size_t var) { return rows[row][var]; }
};

struct Solution {
  double value = 0.0;
  std::vector<double> x;
  // Basic variable per row; ids >= variables are slacks.
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;
};

// Dense tableau simplex. The steepest reduced cost enters; after a run of
// degenerate pivots Bland's rule takes over (lowest-index improving column,
// ratio ties leave by lowest basic variable) until the objective moves again.
// Throws DomainError when unbounded or when rhs has a negative entry.
Solution maximize(const Problem& problem);

}  // namespace dagcast::lp
