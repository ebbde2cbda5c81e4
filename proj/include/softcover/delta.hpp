#pragma once

#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "softcover/distribution.hpp"
#include "softcover/ext_real.hpp"
#include "softcover/solver_config.hpp"
#include "softcover/type_space.hpp"

namespace softcover {

// Delta(Q_Y, R) = max D_m(Q_Y) - D_c(Q') over Q' with Q'_X = P_X, Q'_Y = Q_Y
// and I_Q' <= R.
//
// With Q'_Y pinned, D_c = I_Q' - H(Q_Y) - E log W, so the inner problem is
// an entropic transport: the minimizers are J(x,y) = a_x b_y P_X(x) W(y|x)^s
// with s in [0,1] selected so that I_Q' = R (s = 1 when the rate constraint is
// slack). Marginals are fitted by Sinkhorn scaling; s by bisection.
class DeltaSolver {
 public:
  explicit DeltaSolver(const TypeSpace& space) : space_(&space) {}

  DeltaSolver(const DeltaSolver&) = delete;
  DeltaSolver& operator=(const DeltaSolver&) = delete;

  // -inf when no Q' has output marginal q_out or when even the least
  // informative one has I_Q' > R. Memoized on q_out rounded to 1e-9.
  double value(std::span<const double> q_out, double rate) const;

  // Conditional matrix Q'(y|x) of the tilted coupling for a fixed s in
  // [0,1]; rows with P_X(x) = 0 are left at W. Empty when q_out is
  // unreachable.
  std::vector<double> tilted_conditional(std::span<const double> q_out, double s) const;

 private:
  double solve(std::span<const double> q_out, double rate) const;
  bool reachable(std::span<const double> q_out) const;

  const TypeSpace* space_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<long long>, double> cache_;
};

ExtReal delta(const Distribution& q_out, const Channel& w, const Distribution& p_in, double rate,
              const SolverConfig& cfg);

}  // namespace softcover
