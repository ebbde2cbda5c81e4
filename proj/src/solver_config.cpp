#include "softcover/solver_config.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace softcover {

std::string to_string(TieBreak t) {
  switch (t) {
    case TieBreak::first_in_grid_order:
      return "first_in_grid_order";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (grid_points_per_dim && *grid_points_per_dim < 17)
    throw std::invalid_argument("SolverConfig: grid_points_per_dim must be >= 17");
  if (refinement_rounds < 0) throw std::invalid_argument("SolverConfig: refinement_rounds must be >= 0");
  if (!(refinement_shrink > 0.0 && refinement_shrink < 1.0))
    throw std::invalid_argument("SolverConfig: refinement_shrink must lie in (0,1)");
  if (!(constraint_slack >= 0.0)) throw std::invalid_argument("SolverConfig: constraint_slack must be >= 0");
  if (workers < 1) throw std::invalid_argument("SolverConfig: workers must be >= 1");
}

int SolverConfig::points_per_dim(int dimension) const {
  return grid_points_per_dim ? *grid_points_per_dim : default_points_per_dim(dimension);
}

int default_points_per_dim(int dimension) {
  switch (dimension) {
    case 0:
    case 1:
      return 4001;
    case 2:
      return 401;
    case 3:
      return 61;
    case 4:
      return 31;
    default:
      return 17;
  }
}

int workers_from_environment() {
  const char* env = std::getenv("SOFTCOVER_THREADS");
  if (env == nullptr) return 1;
  try {
    const int n = std::stoi(env);
    return n >= 1 ? n : 1;
  } catch (const std::exception&) {
    return 1;
  }
}

}  // namespace softcover
