#pragma once

#include <cstddef>
#include <vector>

#include "softcover/exponent_solver.hpp"

namespace softcover {

// Closed forms on the Z-channel slice with uniform P_X, q = Q(0|1) and
// Q(.|0) = W(.|0) = (1, 0).
double zc_mutual_information(double q);
double zc_dc(double q, double w);
double zc_dm(double q, double w);

// Exhaustive scan over q in {0, 1/grid, ..., 1} plus q = w. Independent of
// TypeSpace / TypeGrid; used to cross-check the generic solver.
class ZChannelOracle {
 public:
  ZChannelOracle(double w, std::size_t grid);

  double w() const { return w_; }
  std::size_t size() const { return q_.size(); }

  ExponentResult fa(double rate, double tau) const;
  // Delta(Q_Y, R) on the slice is lambda_bulk at the unique q with that
  // output marginal when I_q <= R, else -inf. use_delta = false drops it.
  ExponentResult md(double rate, double tau, bool use_delta = true) const;

  double lambda_max(double rate) const;
  double lambda_min(double rate) const;
  // Minimizer of D_m + [I - R]_+ (first on ties) as (q, value, lambda).
  struct Flat {
    double q, value, lambda;
  };
  Flat flat(double rate) const;

 private:
  ExponentResult result(std::size_t i, double value, double rate) const;

  double w_;
  std::vector<double> q_, dm_, dc_, iq_;
};

ExponentResult zchannel_oracle_fa(double w_param, double rate, double tau, std::size_t grid);
ExponentResult zchannel_oracle_md(double w_param, double rate, double tau, std::size_t grid);

}  // namespace softcover
