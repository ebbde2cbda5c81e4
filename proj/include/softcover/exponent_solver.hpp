#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "softcover/delta.hpp"
#include "softcover/distribution.hpp"
#include "softcover/ext_real.hpp"
#include "softcover/grid_search.hpp"
#include "softcover/solver_config.hpp"
#include "softcover/type_space.hpp"

namespace softcover {

// bulk: I_Q <= R, sparse: I_Q > R (reported with a 1e-7 margin on I_Q).
enum class Branch { bulk, sparse };

std::string to_string(Branch b);

struct ExponentResult {
  ExtReal value = ExtReal::pos_inf();
  std::optional<JointType> minimizer;
  Branch branch = Branch::bulk;
  bool feasible = false;
  // Measures at the minimizer, when feasible.
  std::optional<TypeMeasures> measures;
};

// Extremum of lambda(., R) with the point that attains it.
struct LambdaExtremum {
  double value = 0.0;
  std::vector<double> cond;
  TypeMeasures measures;
};

// Minimizer of D_m + [I_Q - R]_+ without the threshold constraint. Among
// points within 1e-10 of the minimum the one with the largest lambda is
// reported, since E_FA is flat up to that lambda.
struct FlatPoint {
  double value = 0.0;
  double tau_flat = 0.0;
  Branch branch = Branch::bulk;
  // Minimizers with different lambda exist (a separated grid hit within 1e-9
  // of the value, or a higher-lambda point found by the tie search).
  bool multiple = false;
  std::vector<double> cond;
  TypeMeasures measures;
};

// Evaluates the variational exponents for one (W, P_X). Building the lattice
// is the expensive step, so callers that sweep tau or R keep one solver.
class ExponentSolver {
 public:
  ExponentSolver(Channel w, Distribution p_in, SolverConfig cfg = {});

  const TypeSpace& space() const { return *space_; }
  const SolverConfig& config() const { return cfg_; }
  double mutual_information() const { return space_->channel_mutual_information(); }

  // E_FA(tau, R); rate >= 0.
  ExponentResult fa(double tau, double rate) const;
  // E_MD(tau, R); rate > 0, throws std::invalid_argument at rate 0.
  ExponentResult md(double tau, double rate) const;
  // (E_FA(tau, 0), E_MD(tau, 0)) with the Delta constraint disabled.
  std::pair<ExponentResult, ExponentResult> r0(double tau) const;

  ExtReal delta(const Distribution& q_out, double rate) const;

  LambdaExtremum lambda_max(double rate) const;
  LambdaExtremum lambda_min(double rate) const;
  FlatPoint unconstrained_fa(double rate) const;

 private:
  ExponentResult md_impl(double tau, double rate, bool use_delta) const;
  ExponentResult make_result(const SearchHit& hit, double rate) const;
  SeedPoint seed_from_cond(std::vector<double> cond) const;

  SolverConfig cfg_;
  SearchOptions opts_;
  std::unique_ptr<TypeSpace> space_;
  std::unique_ptr<TypeGrid> grid_;
  std::unique_ptr<DeltaSolver> delta_;
  SeedPoint true_channel_;
};

ExponentResult fa_exponent(const Channel& w, const Distribution& p_in, double tau, double rate,
                           const SolverConfig& cfg);
ExponentResult md_exponent(const Channel& w, const Distribution& p_in, double tau, double rate,
                           const SolverConfig& cfg);
std::pair<ExponentResult, ExponentResult> r0_exponents(const Channel& w, const Distribution& p_in, double tau,
                                                       const SolverConfig& cfg);

}  // namespace softcover
