#pragma once

#include "softcover/distribution.hpp"
#include "softcover/ext_real.hpp"

namespace softcover {

// All measures are in nats. 0 log 0 = 0, 0 log(0/0) = 0, p log(p/0) = +inf.

ExtReal entropy(const Distribution& p);

// D(p||q); throws std::invalid_argument on alphabet mismatch.
ExtReal kl_divergence(const Distribution& p, const Distribution& q);

// H_Q(Y|X) = sum_x P_X(x) H(Q(.|x))
ExtReal conditional_entropy(const JointType& jt);

// D_c = D(Q_{Y|X} || W | P_X). Rows with P_X(x) = 0 do not contribute.
ExtReal conditional_kl(const JointType& jt, const Channel& w);

// I_Q(X;Y) = H_Q(Y) - H_Q(Y|X), clamped at zero against rounding.
ExtReal mutual_information(const JointType& jt);

// lambda(Q,R) = D_m(Q_Y) - D_c(Q_XY) + [I_Q - R]_+ with D_m taken against
// p_out (normally P_Y). Equals -inf exactly when D_c = +inf.
ExtReal lambda(const JointType& jt, const Channel& w, const Distribution& p_out, double rate);

// l(Q) = H_Q(Y|X) + D_c(Q); per-letter -log W^n(y|x) on the joint type class.
ExtReal ell(const JointType& jt, const Channel& w);

// P_Y(y) = sum_x P_X(x) W(y|x)
Distribution output_marginal(const Distribution& p_in, const Channel& w);

// I(X;Y) for input p_in through w.
double channel_mutual_information(const Distribution& p_in, const Channel& w);

// Scalar binary forms used by the Z-channel closed forms.
double binary_entropy(double u);
double binary_kl(double u, double v);

}  // namespace softcover
