#pragma once

#include <optional>
#include <string>

namespace softcover {

enum class TieBreak {
  // Earliest candidate in evaluation order keeps the incumbent on exact ties.
  first_in_grid_order,
};

std::string to_string(TieBreak t);

struct SolverConfig {
  // Lattice points per free coordinate. Unset: chosen from the search
  // dimension by default_points_per_dim().
  std::optional<int> grid_points_per_dim;
  int refinement_rounds = 4;
  double refinement_shrink = 0.1;
  // MD is feasible only when lambda_min(R) < tau - constraint_slack.
  double constraint_slack = 0.0;
  TieBreak tie_break = TieBreak::first_in_grid_order;
  // Worker threads for grid evaluation; results do not depend on it.
  int workers = 1;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  int points_per_dim(int dimension) const;
};

// 4001 for 1-D, 401 for 2-D, 61 for 3-D, 31 for 4-D, 17 beyond.
int default_points_per_dim(int dimension);

// Reads SOFTCOVER_THREADS; 1 when unset or invalid.
int workers_from_environment();

}  // namespace softcover
