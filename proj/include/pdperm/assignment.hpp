#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace pdperm {

struct Assignment {
  double cost = 0.0;
  std::vector<std::size_t> row_to_col;
};

/// Minimum-cost perfect matching on a dense n×n row-major cost matrix (finite entries).
/// Shortest augmenting paths with row/column potentials; O(n^3) worst case.
Assignment solve_assignment(std::span<const double> cost, std::size_t n);

/// Matching of n_rows points against n_cols points where any point may instead be sent to
/// its own exit (the diagonal) at cost row_exit[i] or col_exit[j]. Equivalent to the square
/// (n_rows + n_cols) problem with interchangeable exit slots, solved on the n_rows × n_cols
/// block only. row_to_col[i] is the matched column, or nullopt for an exit.
struct ExitAssignment {
  double cost = 0.0;
  std::vector<std::optional<std::size_t>> row_to_col;
};

ExitAssignment solve_exit_assignment(std::span<const double> pair_cost, std::size_t n_rows,
                                     std::size_t n_cols, std::span<const double> row_exit,
                                     std::span<const double> col_exit);

}  // namespace pdperm
