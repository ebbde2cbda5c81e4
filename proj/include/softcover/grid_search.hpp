#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "softcover/solver_config.hpp"
#include "softcover/type_space.hpp"

namespace softcover {

// Precomputed lattice over a TypeSpace: every free row coordinate is a
// multiple of 1/(points-1), restricted to the simplex. Points are stored in
// row-major order (first input row most significant) together with their
// TypeMeasures, so a query is a linear scan.
class TypeGrid {
 public:
  TypeGrid(const TypeSpace& space, int points_per_dim, int workers = 1);

  const TypeSpace& space() const { return *space_; }
  std::size_t size() const { return measures_.size(); }
  double spacing() const { return spacing_; }
  const TypeMeasures& measures(std::size_t i) const { return measures_[i]; }
  void params(std::size_t i, std::span<double> out) const;

 private:
  const TypeSpace* space_;
  double spacing_;
  // Per row block: lattice points, each block.free() doubles, flattened.
  std::vector<std::vector<double>> row_lattices_;
  std::vector<std::size_t> row_counts_;
  std::vector<TypeMeasures> measures_;
};

// A point the search should consider before the lattice (e.g. the true
// channel). The conditional matrix is evaluated as given, not re-decoded.
struct SeedPoint {
  std::vector<double> params;
  std::vector<double> cond;
};

struct SearchHit {
  bool found = false;
  double score = 0.0;
  std::vector<double> params;
  std::vector<double> cond;
  TypeMeasures measures;
};

// Score of a point from its measures; +inf marks it infeasible.
using PointScore = std::function<double(const TypeMeasures&)>;
// Additional acceptance test on the conditional matrix, only consulted for
// points that already have a finite score.
using PointFilter = std::function<bool(std::span<const double> cond)>;

struct SearchOptions {
  int refinement_rounds = 4;
  double refinement_shrink = 0.1;
  std::size_t max_seeds = 3;
};

SearchOptions search_options(const SolverConfig& cfg);

// Minimizes score over seeds and lattice, then polishes up to max_seeds
// mutually separated incumbents by shrinking-box local lattices. Returns the
// refined hits ordered by score (ties keep evaluation order). Empty when no
// point is feasible.
std::vector<SearchHit> minimize_all(const TypeGrid& grid, const PointScore& score,
                                    const PointFilter& filter, std::span<const SeedPoint> seeds,
                                    const SearchOptions& opts);

SearchHit minimize(const TypeGrid& grid, const PointScore& score, const PointFilter& filter,
                   std::span<const SeedPoint> seeds, const SearchOptions& opts);

}  // namespace softcover
