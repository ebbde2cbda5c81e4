#include "softcover/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace softcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_same_input(const JointType& jt, const Channel& w) {
  if (jt.input_size() != w.input_size() || jt.output_size() != w.output_size())
    throw std::invalid_argument("joint type and channel alphabets differ");
}

// Raw D(p||q) with the extended-real conventions.
double kl_raw(const Distribution& p, const Distribution& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p.in_support(i)) continue;
    if (!q.in_support(i)) return kInf;
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

double entropy_raw(const Distribution& p) {
  double h = 0.0;
  for (double v : p.probs())
    if (v > kSupportEps) h -= v * std::log(v);
  return h;
}

}  // namespace

ExtReal entropy(const Distribution& p) { return entropy_raw(p); }

ExtReal kl_divergence(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: alphabet mismatch");
  // Rounding can leave tiny negative sums near p == q.
  return std::max(0.0, kl_raw(p, q));
}

ExtReal conditional_entropy(const JointType& jt) {
  double h = 0.0;
  for (std::size_t x = 0; x < jt.input_size(); ++x) {
    const double px = jt.input_marginal()[x];
    if (px > 0.0) h += px * entropy_raw(jt.conditional(x));
  }
  return h;
}

ExtReal conditional_kl(const JointType& jt, const Channel& w) {
  check_same_input(jt, w);
  double d = 0.0;
  for (std::size_t x = 0; x < jt.input_size(); ++x) {
    const double px = jt.input_marginal()[x];
    if (!(px > 0.0)) continue;
    const double dx = kl_raw(jt.conditional(x), w.row(x));
    if (std::isinf(dx)) return ExtReal::pos_inf();
    d += px * dx;
  }
  return std::max(0.0, d);
}

ExtReal mutual_information(const JointType& jt) {
  const double i = entropy_raw(jt.output_marginal()) - conditional_entropy(jt).value();
  return std::max(0.0, i);
}

ExtReal lambda(const JointType& jt, const Channel& w, const Distribution& p_out, double rate) {
  if (!std::isfinite(rate) || rate < 0.0) throw std::invalid_argument("lambda: rate must be finite and >= 0");
  const ExtReal dc = conditional_kl(jt, w);
  if (dc.is_pos_inf()) return ExtReal::neg_inf();
  const ExtReal dm = kl_divergence(jt.output_marginal(), p_out);
  if (dm.is_pos_inf()) return ExtReal::pos_inf();
  return dm - dc + positive_part(mutual_information(jt) - rate);
}

ExtReal ell(const JointType& jt, const Channel& w) {
  const ExtReal dc = conditional_kl(jt, w);
  if (dc.is_pos_inf()) return dc;
  return conditional_entropy(jt) + dc;
}

Distribution output_marginal(const Distribution& p_in, const Channel& w) {
  return JointType::product(p_in, w).output_marginal();
}

double channel_mutual_information(const Distribution& p_in, const Channel& w) {
  return mutual_information(JointType::product(p_in, w)).value();
}

double binary_entropy(double u) {
  double h = 0.0;
  if (u > 0.0) h -= u * std::log(u);
  if (u < 1.0) h -= (1.0 - u) * std::log1p(-u);
  return h;
}

double binary_kl(double u, double v) {
  double d = 0.0;
  if (u > 0.0) {
    if (!(v > 0.0)) return kInf;
    d += u * std::log(u / v);
  }
  if (u < 1.0) {
    if (!(v < 1.0)) return kInf;
    d += (1.0 - u) * std::log((1.0 - u) / (1.0 - v));
  }
  return std::max(0.0, d);
}

}  // namespace softcover
