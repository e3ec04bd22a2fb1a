#include "dagcast/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dagcast/error.hpp"

namespace dagcast::lp {

namespace {
constexpr double kRatioTieTolerance = 1e-12;
}  // namespace

std::size_t Problem::add_row(double bound) {
  rows.emplace_back(variables, 0.0);
  rhs.push_back(bound);
  return rows.size() - 1;
}

Solution maximize(const Problem& problem) {
  const std::size_t m = problem.rows.size();
  const std::size_t n = problem.variables;
  const std::size_t width = n + m + 1;  // structural, slack, rhs
  constexpr double eps = kFeasibilityTolerance;

  if (problem.objective.size() != n) throw DomainError("objective length mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    if (problem.rows[i].size() != n) throw DomainError("constraint row length mismatch");
    if (problem.rhs[i] < 0) throw DomainError("negative right-hand side; slack basis infeasible");
  }

  // Row-major tableau; row m holds reduced costs (objective minus z).
  std::vector<double> t((m + 1) * width, 0.0);
  auto cell = [&](std::size_t r, std::size_t c) -> double& { return t[r * width + c]; };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cell(i, j) = problem.rows[i][j];
    cell(i, n + i) = 1.0;
    cell(i, width - 1) = problem.rhs[i];
  }
  for (std::size_t j = 0; j < n; ++j) cell(m, j) = problem.objective[j];

  Solution sol;
  sol.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) sol.basis[i] = n + i;

  // Dantzig pricing, switching to Bland's rule after a run of degenerate
  // pivots so that the method cannot cycle.
  constexpr std::size_t kDegenerateRun = 50;
  std::size_t degenerate = 0;
  for (;;) {
    const bool bland = degenerate >= kDegenerateRun;
    std::size_t enter = width;
    double best_cost = eps;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      const double cost = cell(m, j);
      if (cost > best_cost) {
        enter = j;
        if (bland) break;
        best_cost = cost;
      }
    }
    if (enter == width) break;

    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = cell(i, enter);
      if (a > eps) min_ratio = std::min(min_ratio, cell(i, width - 1) / a);
    }
    if (!std::isfinite(min_ratio)) throw DomainError("linear program is unbounded");
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = cell(i, enter);
      if (a <= eps || cell(i, width - 1) / a > min_ratio + kRatioTieTolerance) continue;
      if (leave == m || (bland ? sol.basis[i] < sol.basis[leave] : a > cell(leave, enter))) leave = i;
    }
    degenerate = min_ratio <= kRatioTieTolerance ? degenerate + 1 : 0;

    const double pivot = cell(leave, enter);
    for (std::size_t c = 0; c < width; ++c) cell(leave, c) /= pivot;
    for (std::size_t r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double factor = cell(r, enter);
      if (factor == 0.0) continue;
      double* dst = &t[r * width];
      const double* src = &t[leave * width];
      for (std::size_t c = 0; c < width; ++c) dst[c] -= factor * src[c];
      dst[enter] = 0.0;
      if (r < m && dst[width - 1] < 0.0) dst[width - 1] = 0.0;
    }
    sol.basis[leave] = enter;
    ++sol.pivots;
  }

  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (sol.basis[i] < n) {
      double v = cell(i, width - 1);
      if (std::abs(v) < 1e-12) v = 0.0;
      sol.x[sol.basis[i]] = v;
    }
  }
  sol.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.value += problem.objective[j] * sol.x[j];
  return sol;
}

}  // namespace dagcast::lp
