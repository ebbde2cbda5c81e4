#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "softcover/codebook.hpp"
#include "softcover/distribution.hpp"
#include "softcover/ext_real.hpp"

namespace softcover {

// Joint n-type of (x^n, y^n) as a row-major |X| x |Y| count matrix.
using JointCounts = std::vector<int>;

JointCounts joint_counts(const Sequence& x, const Sequence& y, std::size_t nx, std::size_t ny);

// W^n(y|x)
double sequence_prob(const Channel& w, const Sequence& x, const Sequence& y);
// P^n(y)
double iid_prob(const Distribution& p, const Sequence& y);

// (1/M) sum_m W^n(y|x(m))
double mixture_prob(const Codebook& cb, const Channel& w, const Sequence& y);

// (1/n) ln(mixture / P_Y^n); -inf when the mixture vanishes.
ExtReal llr(const Codebook& cb, const Channel& w, const Distribution& p_out, const Sequence& y);

// Same quantity through the type-class enumerators:
// (1/n) ln S(y) - R + H(Q_Y) + D(Q_Y||P_Y), R = (1/n) ln M, Q_Y the type of y.
ExtReal llr_via_types(const Codebook& cb, const Channel& w, const Distribution& p_out, const Sequence& y);

// Number of codewords whose joint type with y equals q.
std::uint64_t tce(const Codebook& cb, const Sequence& y, const JointCounts& q, std::size_t nx, std::size_t ny);

// All joint types present in the codebook with their enumerators.
std::map<JointCounts, std::uint64_t> tce_table(const Codebook& cb, const Sequence& y, std::size_t nx,
                                               std::size_t ny);

// -(1/n) ln W^n(y|x) for any pair of joint type q; +inf off the support.
double ell_of_counts(const JointCounts& q, const Channel& w);

// S(y) = sum_q N(q|y) e^{-n ell(q)}
double enumerator_sum(const Codebook& cb, const Channel& w, const Sequence& y);

// theta(y) = tau + R - H(Q_Y) - D(Q_Y||P_Y) with R = (1/n) ln M.
double theta(const Codebook& cb, const Distribution& p_out, const Sequence& y, double tau);

// ln S(y) >= n theta(y); equivalent to llr(y) >= tau.
bool theta_event(const Codebook& cb, const Channel& w, const Distribution& p_out, const Sequence& y, double tau);

// Pr{a uniform member of T(composition) has joint type q with y}; 0 when the
// marginals of q disagree with composition or with the type of y.
double single_codeword_type_prob(const std::vector<int>& composition, const Sequence& y, const JointCounts& q,
                                 std::size_t ny);

inline constexpr double kExhaustiveBudget = 2e7;

// Exact inner sums over all of Y^n. Throw std::length_error past the budget.
double alpha_exact_given_codebook(const Codebook& cb, const Channel& w, const Distribution& p_out, double tau,
                                  double budget = kExhaustiveBudget);
double beta_exact_given_codebook(const Codebook& cb, const Channel& w, const Distribution& p_out, double tau,
                                 double budget = kExhaustiveBudget);

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

enum class SimMode { mc, exact_r0 };

struct ErrorEstimates {
  SimEstimate alpha;
  SimEstimate beta;
  // Per-trial inner sums in trial order.
  std::vector<double> alpha_trials;
  std::vector<double> beta_trials;
  std::size_t codebook_size = 0;
  double realized_rate = 0.0;
};

// mc: codebook trial t draws from trial_stream(seed, t); trials run on
// `workers` threads and are summed in trial order.
// exact_r0: R must be 0; every member of the type class gives the same
// inner sums (permute y along with it), so one representative codeword is
// the exact ensemble average.
ErrorEstimates estimate_error_probs(int n, double rate, const Channel& w, const Distribution& p_in, double tau,
                                    int codebook_trials, std::uint64_t seed, SimMode mode = SimMode::mc,
                                    int workers = 1);

}  // namespace softcover
