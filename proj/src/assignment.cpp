#include "pdperm/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdperm/errors.hpp"

namespace pdperm {

Assignment solve_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw ValidationError("assignment cost matrix must be n×n");
  for (double c : cost)
    if (!std::isfinite(c)) throw ValidationError("assignment costs must be finite");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  // Column slot 0 is a virtual column used as the root of each augmenting search;
  // real columns are 1..n. col_row[j] is the row matched to column j.
  std::vector<double> u(n, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<double> min_slack(n + 1);
  std::vector<std::size_t> col_row(n + 1, kFree);
  std::vector<std::size_t> way(n + 1, 0);
  std::vector<char> visited(n + 1);

  for (std::size_t row = 0; row < n; ++row) {
    col_row[0] = row;
    std::size_t j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[j0] = 1;
      const std::size_t i0 = col_row[j0];
      const double* c = cost.data() + i0 * n;
      const double ui = u[i0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (visited[j]) continue;
        const double slack = c[j - 1] - ui - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (visited[j]) {
          u[col_row[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (col_row[j0] != kFree);
    // Flip the alternating path back to the root.
    do {
      const std::size_t j1 = way[j0];
      col_row[j0] = col_row[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment result;
  result.row_to_col.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.row_to_col[col_row[j]] = j - 1;
  for (std::size_t i = 0; i < n; ++i) result.cost += cost[i * n + result.row_to_col[i]];
  return result;
}


ExitAssignment solve_exit_assignment(std::span<const double> pair_cost, std::size_t n_rows,
                                     std::size_t n_cols, std::span<const double> row_exit,
                                     std::span<const double> col_exit) {
  if (pair_cost.size() != n_rows * n_cols || row_exit.size() != n_rows ||
      col_exit.size() != n_cols) {
    throw ValidationError("exit assignment inputs have inconsistent sizes");
  }
  for (double c : pair_cost)
    if (!std::isfinite(c)) throw ValidationError("assignment costs must be finite");
  for (double c : row_exit)
    if (!std::isfinite(c)) throw ValidationError("assignment costs must be finite");
  for (double c : col_exit)
    if (!std::isfinite(c)) throw ValidationError("assignment costs must be finite");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  const std::size_t m = n_cols;
  // Unmatched columns pay their exit, so matching (i, j) saves col_exit[j]. Each row also
  // owns a private exit column reachable only from that row; it is free whenever the row
  // is reached, so selecting it ends the search.
  std::vector<double> reduced(pair_cost.size());
  for (std::size_t i = 0; i < n_rows; ++i)
    for (std::size_t j = 0; j < m; ++j)
      reduced[i * m + j] = pair_cost[i * m + j] - col_exit[j];

  std::vector<double> u(n_rows, 0.0);
  std::vector<double> v(m + 1, 0.0);
  std::vector<double> min_slack(m + 1);
  std::vector<std::size_t> col_row(m + 1, kFree);
  std::vector<std::size_t> way(m + 1, 0);
  std::vector<char> visited(m + 1);
  std::vector<double> exit_slack;
  std::vector<std::size_t> exit_way;

  for (std::size_t row = 0; row < n_rows; ++row) {
    col_row[0] = row;
    std::size_t j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(visited.begin(), visited.end(), 0);
    exit_slack.clear();
    exit_way.clear();
    while (true) {
      visited[j0] = 1;
      const std::size_t i0 = col_row[j0];
      const double ui = u[i0];
      exit_slack.push_back(row_exit[i0] - ui);
      exit_way.push_back(j0);

      double delta = kInf;
      std::size_t j1 = 0;
      std::size_t best_exit = kFree;
      const double* c = reduced.data() + i0 * m;
      for (std::size_t j = 1; j <= m; ++j) {
        if (visited[j]) continue;
        const double slack = c[j - 1] - ui - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          way[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t k = 0; k < exit_slack.size(); ++k) {
        if (exit_slack[k] < delta) {
          delta = exit_slack[k];
          best_exit = k;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (visited[j]) {
          u[col_row[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      for (double& s : exit_slack) s -= delta;
      if (best_exit != kFree) {
        j0 = exit_way[best_exit];
        break;
      }
      j0 = j1;
      if (col_row[j0] == kFree) break;
    }
    // Flip the alternating path; for an exit, j0 is the column the exiting row gives up.
    while (j0 != 0) {
      const std::size_t j1 = way[j0];
      col_row[j0] = col_row[j1];
      j0 = j1;
    }
  }

  ExitAssignment result;
  result.row_to_col.assign(n_rows, std::nullopt);
  std::vector<char> col_used(m, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (col_row[j] != kFree) {
      result.row_to_col[col_row[j]] = j - 1;
      col_used[j - 1] = 1;
    }
  }
  for (std::size_t i = 0; i < n_rows; ++i) {
    result.cost += result.row_to_col[i] ? pair_cost[i * m + *result.row_to_col[i]] : row_exit[i];
  }
  for (std::size_t j = 0; j < m; ++j)
    if (!col_used[j]) result.cost += col_exit[j];
  return result;
}

}  // namespace pdperm
