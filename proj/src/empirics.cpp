#include "softcover/empirics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "softcover/measures.hpp"
#include "softcover/parallel.hpp"
#include "softcover/rng.hpp"

namespace softcover {

namespace {

// Neumaier compensated sum.
struct Accumulator {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

void check_lengths(const Codebook& cb, const Sequence& y) {
  if (static_cast<int>(y.size()) != cb.n) throw std::invalid_argument("sequence length differs from blocklength");
}

// H(Q_Y) + D(Q_Y || P_Y) for the type of y, i.e. -(1/n) ln P_Y^n(y).
double output_type_cost(const Distribution& p_out, const Sequence& y) {
  std::vector<int> counts(p_out.size(), 0);
  for (int b : y) ++counts[static_cast<std::size_t>(b)];
  const double n = static_cast<double>(y.size());
  double h = 0.0, d = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] == 0) continue;
    const double q = counts[b] / n;
    h -= q * std::log(q);
    d += q * std::log(q / p_out[b]);
  }
  return h + d;
}

struct InnerSums {
  double alpha;
  double beta;
};

InnerSums inner_sums(const Codebook& cb, const Channel& w, const Distribution& p_out, double tau, double budget) {
  const std::size_t ny = w.output_size();
  const double total = std::pow(static_cast<double>(ny), cb.n);
  if (total > budget)
    throw std::length_error("exhaustive sum over " + std::to_string(total) + " output sequences exceeds the budget of " +
                            std::to_string(budget) + "; use Monte Carlo mode or a smaller n");
  Accumulator alpha, beta;
  Sequence y(static_cast<std::size_t>(cb.n), 0);
  while (true) {
    const double p0 = iid_prob(p_out, y);
    const double p1 = mixture_prob(cb, w, y);
    if (p0 > 0.0 || p1 > 0.0) {
      // P_Y^n(y) = 0 makes the ratio +inf: accepted, contributing nothing to alpha.
      const bool accept = !(p0 > 0.0) || llr(cb, w, p_out, y) >= ExtReal(tau);
      if (accept)
        alpha.add(p0);
      else
        beta.add(p1);
    }
    std::size_t i = y.size();
    while (i > 0 && y[i - 1] == static_cast<int>(ny) - 1) y[--i] = 0;
    if (i == 0) break;
    ++y[i - 1];
  }
  return {alpha.value(), beta.value()};
}

SimEstimate summarize(const std::vector<double>& v, std::uint64_t seed) {
  SimEstimate e;
  e.trials = static_cast<int>(v.size());
  e.seed = seed;
  Accumulator s;
  for (double x : v) s.add(x);
  e.mean = s.value() / static_cast<double>(v.size());
  if (v.size() > 1) {
    Accumulator ss;
    for (double x : v) ss.add((x - e.mean) * (x - e.mean));
    e.std_error = std::sqrt(ss.value() / static_cast<double>(v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
  }
  return e;
}

}  // namespace

JointCounts joint_counts(const Sequence& x, const Sequence& y, std::size_t nx, std::size_t ny) {
  if (x.size() != y.size()) throw std::invalid_argument("joint_counts: length mismatch");
  JointCounts c(nx * ny, 0);
  for (std::size_t i = 0; i < x.size(); ++i) ++c[static_cast<std::size_t>(x[i]) * ny + static_cast<std::size_t>(y[i])];
  return c;
}

double sequence_prob(const Channel& w, const Sequence& x, const Sequence& y) {
  if (x.size() != y.size()) throw std::invalid_argument("sequence_prob: length mismatch");
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) p *= w(static_cast<std::size_t>(x[i]), static_cast<std::size_t>(y[i]));
  return p;
}

double iid_prob(const Distribution& p, const Sequence& y) {
  double v = 1.0;
  for (int b : y) v *= p[static_cast<std::size_t>(b)];
  return v;
}

double mixture_prob(const Codebook& cb, const Channel& w, const Sequence& y) {
  check_lengths(cb, y);
  Accumulator s;
  for (const auto& x : cb.codewords) s.add(sequence_prob(w, x, y));
  return s.value() / static_cast<double>(cb.size());
}

ExtReal llr(const Codebook& cb, const Channel& w, const Distribution& p_out, const Sequence& y) {
  const double mix = mixture_prob(cb, w, y);
  const double base = iid_prob(p_out, y);
  if (!(base > 0.0)) throw std::invalid_argument("llr: P_Y^n(y) = 0");
  if (!(mix > 0.0)) return ExtReal::neg_inf();
  return ExtReal((std::log(mix) - std::log(base)) / cb.n);
}

ExtReal llr_via_types(const Codebook& cb, const Channel& w, const Distribution& p_out, const Sequence& y) {
  check_lengths(cb, y);
  const double s = enumerator_sum(cb, w, y);
  if (!(s > 0.0)) return ExtReal::neg_inf();
  return ExtReal(std::log(s) / cb.n - cb.realized_rate() + output_type_cost(p_out, y));
}

std::uint64_t tce(const Codebook& cb, const Sequence& y, const JointCounts& q, std::size_t nx, std::size_t ny) {
  check_lengths(cb, y);
  std::uint64_t count = 0;
  for (const auto& x : cb.codewords)
    if (joint_counts(x, y, nx, ny) == q) ++count;
  return count;
}

std::map<JointCounts, std::uint64_t> tce_table(const Codebook& cb, const Sequence& y, std::size_t nx,
                                               std::size_t ny) {
  check_lengths(cb, y);
  std::map<JointCounts, std::uint64_t> table;
  for (const auto& x : cb.codewords) ++table[joint_counts(x, y, nx, ny)];
  return table;
}

double ell_of_counts(const JointCounts& q, const Channel& w) {
  const std::size_t ny = w.output_size();
  double n = 0.0, cost = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0) continue;
    const double p = w(i / ny, i % ny);
    if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
    n += q[i];
    cost -= q[i] * std::log(p);
  }
  return cost / n;
}

double enumerator_sum(const Codebook& cb, const Channel& w, const Sequence& y) {
  Accumulator s;
  for (const auto& [q, count] : tce_table(cb, y, w.input_size(), w.output_size()))
    s.add(static_cast<double>(count) * std::exp(-cb.n * ell_of_counts(q, w)));
  return s.value();
}

double theta(const Codebook& cb, const Distribution& p_out, const Sequence& y, double tau) {
  return tau + cb.realized_rate() - output_type_cost(p_out, y);
}

bool theta_event(const Codebook& cb, const Channel& w, const Distribution& p_out, const Sequence& y, double tau) {
  const double s = enumerator_sum(cb, w, y);
  if (!(s > 0.0)) return false;
  return std::log(s) >= cb.n * theta(cb, p_out, y, tau);
}

double single_codeword_type_prob(const std::vector<int>& composition, const Sequence& y, const JointCounts& q,
                                 std::size_t ny) {
  const std::size_t nx = composition.size();
  std::vector<int> y_counts(ny, 0);
  for (int b : y) ++y_counts[static_cast<std::size_t>(b)];
  for (std::size_t a = 0; a < nx; ++a) {
    int row = 0;
    for (std::size_t b = 0; b < ny; ++b) row += q[a * ny + b];
    if (row != composition[a]) return 0.0;
  }
  double log_num = 0.0;
  for (std::size_t b = 0; b < ny; ++b) {
    int col = 0;
    log_num += std::lgamma(y_counts[b] + 1.0);
    for (std::size_t a = 0; a < nx; ++a) {
      col += q[a * ny + b];
      log_num -= std::lgamma(q[a * ny + b] + 1.0);
    }
    if (col != y_counts[b]) return 0.0;
  }
  const double n = static_cast<double>(y.size());
  double log_class = std::lgamma(n + 1.0);
  for (int c : composition) log_class -= std::lgamma(c + 1.0);
  return std::exp(log_num - log_class);
}

double alpha_exact_given_codebook(const Codebook& cb, const Channel& w, const Distribution& p_out, double tau,
                                  double budget) {
  return inner_sums(cb, w, p_out, tau, budget).alpha;
}

double beta_exact_given_codebook(const Codebook& cb, const Channel& w, const Distribution& p_out, double tau,
                                 double budget) {
  return inner_sums(cb, w, p_out, tau, budget).beta;
}

ErrorEstimates estimate_error_probs(int n, double rate, const Channel& w, const Distribution& p_in, double tau,
                                    int codebook_trials, std::uint64_t seed, SimMode mode, int workers) {
  if (codebook_trials < 1) throw std::invalid_argument("codebook_trials must be >= 1");
  if (p_in.size() != w.input_size()) throw std::invalid_argument("input distribution does not match the channel");
  const auto composition = quantize_composition(p_in, n);
  const Distribution p_out = output_marginal(p_in, w);

  ErrorEstimates out;
  if (mode == SimMode::exact_r0) {
    if (rate != 0.0) throw std::invalid_argument("exact-r0 mode requires rate 0");
    Codebook cb;
    cb.n = n;
    cb.composition = composition;
    cb.codewords.push_back(representative_codeword(composition));
    const auto s = inner_sums(cb, w, p_out, tau, kExhaustiveBudget);
    out.alpha_trials = {s.alpha};
    out.beta_trials = {s.beta};
    out.codebook_size = 1;
    out.realized_rate = 0.0;
  } else {
    out.codebook_size = codebook_size(n, rate);
    out.realized_rate = std::log(static_cast<double>(out.codebook_size)) / n;
    const auto trials = static_cast<std::size_t>(codebook_trials);
    out.alpha_trials.assign(trials, 0.0);
    out.beta_trials.assign(trials, 0.0);
    parallel_for(trials, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t t = begin; t < end; ++t) {
        auto rng = trial_stream(seed, t);
        const auto cb = sample_codebook(n, rate, composition, rng);
        const auto s = inner_sums(cb, w, p_out, tau, kExhaustiveBudget);
        out.alpha_trials[t] = s.alpha;
        out.beta_trials[t] = s.beta;
      }
    });
  }
  out.alpha = summarize(out.alpha_trials, seed);
  out.beta = summarize(out.beta_trials, seed);
  return out;
}

}  // namespace softcover
