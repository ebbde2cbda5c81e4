#include "softcover/exponent_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace softcover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Mutual-information slack when assigning a point to a branch; points on
// I_Q = R belong to both.
constexpr double kBranchTol = 1e-12;

// Reported tags use a looser test: a minimizer on the I_Q = R boundary, as
// found from the sparse side, is still a bulk type.
constexpr double kTagTol = 1e-7;

Branch tag(const TypeMeasures& m, double rate) { return m.iq > rate + kTagTol ? Branch::sparse : Branch::bulk; }

bool in_branch(Branch b, const TypeMeasures& m, double rate) {
  return b == Branch::bulk ? m.iq <= rate + kBranchTol : m.iq >= rate - kBranchTol;
}

void check_finite(double v, const char* what) {
  if (std::isnan(v)) throw std::invalid_argument(std::string(what) + " is NaN");
}

void check_rate(double rate) {
  if (!std::isfinite(rate) || rate < 0.0) throw std::invalid_argument("rate must be finite and >= 0");
}

}  // namespace

std::string to_string(Branch b) { return b == Branch::bulk ? "bulk" : "sparse"; }

ExponentSolver::ExponentSolver(Channel w, Distribution p_in, SolverConfig cfg)
    : cfg_(std::move(cfg)), opts_(search_options(cfg_)) {
  cfg_.validate();
  space_ = std::make_unique<TypeSpace>(std::move(w), std::move(p_in));
  grid_ = std::make_unique<TypeGrid>(*space_, cfg_.points_per_dim(space_->dimension()), cfg_.workers);
  delta_ = std::make_unique<DeltaSolver>(*space_);
  std::vector<double> cond(space_->matrix_size());
  const std::size_t ny = space_->output_size();
  for (std::size_t x = 0; x < space_->input_size(); ++x)
    for (std::size_t y = 0; y < ny; ++y) cond[x * ny + y] = space_->channel()(x, y);
  true_channel_ = seed_from_cond(std::move(cond));
}

SeedPoint ExponentSolver::seed_from_cond(std::vector<double> cond) const {
  SeedPoint s;
  s.params = space_->encode(cond);
  s.cond = std::move(cond);
  return s;
}

ExponentResult ExponentSolver::make_result(const SearchHit& hit, double rate) const {
  ExponentResult r;
  r.value = ExtReal(hit.score);
  r.minimizer = space_->joint_type(hit.cond);
  r.branch = tag(hit.measures, rate);
  r.feasible = true;
  r.measures = hit.measures;
  return r;
}

LambdaExtremum ExponentSolver::lambda_max(double rate) const {
  check_rate(rate);
  const SeedPoint seeds[] = {true_channel_};
  auto hit = minimize(*grid_, [rate](const TypeMeasures& m) { return -m.lambda(rate); }, {}, seeds, opts_);
  return {-hit.score, hit.cond, hit.measures};
}

LambdaExtremum ExponentSolver::lambda_min(double rate) const {
  check_rate(rate);
  const SeedPoint seeds[] = {true_channel_};
  auto hit = minimize(*grid_, [rate](const TypeMeasures& m) { return m.lambda(rate); }, {}, seeds, opts_);
  return {hit.score, hit.cond, hit.measures};
}

ExponentResult ExponentSolver::fa(double tau, double rate) const {
  check_finite(tau, "tau");
  check_rate(rate);
  const auto lmax = lambda_max(rate);
  if (tau > lmax.value) return {};

  const SeedPoint seeds[] = {true_channel_, seed_from_cond(lmax.cond)};
  SearchHit best;
  for (Branch b : {Branch::bulk, Branch::sparse}) {
    auto score = [&](const TypeMeasures& m) {
      if (!in_branch(b, m, rate) || m.lambda(rate) < tau) return kInf;
      return m.dm + std::max(0.0, m.iq - rate);
    };
    auto hit = minimize(*grid_, score, {}, seeds, opts_);
    if (hit.found && (!best.found || hit.score < best.score)) best = std::move(hit);
  }
  if (!best.found) return {};
  return make_result(best, rate);
}

ExponentResult ExponentSolver::md_impl(double tau, double rate, bool use_delta) const {
  const auto lmin = lambda_min(rate);
  if (!(lmin.value < tau - cfg_.constraint_slack)) return {};

  PointFilter filter;
  if (use_delta && tau <= 0.0) {
    filter = [this, tau, rate](std::span<const double> cond) {
      std::vector<double> q(space_->output_size());
      space_->output_marginal(cond, q);
      return delta_->value(q, rate) <= tau + 1e-12;
    };
  }

  const SeedPoint seeds[] = {true_channel_, seed_from_cond(lmin.cond)};
  SearchHit best;
  for (Branch b : {Branch::bulk, Branch::sparse}) {
    auto score = [&](const TypeMeasures& m) {
      if (!in_branch(b, m, rate) || m.lambda(rate) > tau) return kInf;
      return m.dc;
    };
    auto hit = minimize(*grid_, score, filter, seeds, opts_);
    if (hit.found && (!best.found || hit.score < best.score)) best = std::move(hit);
  }
  if (!best.found) return {};
  return make_result(best, rate);
}

ExponentResult ExponentSolver::md(double tau, double rate) const {
  check_finite(tau, "tau");
  check_rate(rate);
  if (rate == 0.0) throw std::invalid_argument("md exponent needs rate > 0; use r0_exponents for R = 0");
  return md_impl(tau, rate, true);
}

std::pair<ExponentResult, ExponentResult> ExponentSolver::r0(double tau) const {
  check_finite(tau, "tau");
  return {fa(tau, 0.0), md_impl(tau, 0.0, false)};
}

ExtReal ExponentSolver::delta(const Distribution& q_out, double rate) const {
  check_rate(rate);
  if (q_out.size() != space_->output_size()) throw std::invalid_argument("delta: output alphabet mismatch");
  return ExtReal(delta_->value(q_out.probs(), rate));
}

// Points within this of the flat FA value count as its minimizers.
constexpr double kFlatTieTol = 1e-10;

FlatPoint ExponentSolver::unconstrained_fa(double rate) const {
  check_rate(rate);
  const SeedPoint seeds[] = {true_channel_};
  std::vector<SearchHit> hits;
  for (Branch b : {Branch::bulk, Branch::sparse}) {
    auto score = [&](const TypeMeasures& m) {
      if (!in_branch(b, m, rate)) return kInf;
      return m.dm + std::max(0.0, m.iq - rate);
    };
    for (auto& h : minimize_all(*grid_, score, {}, seeds, opts_)) hits.push_back(std::move(h));
  }
  if (hits.empty()) throw std::logic_error("unconstrained_fa: empty type space");

  std::size_t best = 0;
  for (std::size_t i = 1; i < hits.size(); ++i)
    if (hits[i].score < hits[best].score) best = i;

  FlatPoint fp;
  const auto& h = hits[best];
  fp.value = h.score;
  const double separation = 2.0 * grid_->spacing();
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (i == best) continue;
    const auto& o = hits[i];
    double dist = 0.0;
    for (std::size_t j = 0; j < o.params.size(); ++j) dist = std::max(dist, std::abs(o.params[j] - h.params[j]));
    if (dist > separation && std::abs(o.score - h.score) <= 1e-9 &&
        std::abs(o.measures.lambda(rate) - h.measures.lambda(rate)) > 1e-6)
      fp.multiple = true;
  }

  // FA stays at the flat value up to the largest lambda among the
  // minimizers, so when the minimum is not unique that one is reported.
  std::vector<SeedPoint> tie_seeds{true_channel_};
  for (const auto& o : hits) tie_seeds.push_back({o.params, o.cond});
  const double cap = fp.value + kFlatTieTol;
  SearchHit top = h;
  double top_lambda = h.measures.lambda(rate);
  for (Branch b : {Branch::bulk, Branch::sparse}) {
    auto score = [&](const TypeMeasures& m) {
      if (!in_branch(b, m, rate) || m.dm + std::max(0.0, m.iq - rate) > cap) return kInf;
      return -m.lambda(rate);
    };
    for (auto& o : minimize_all(*grid_, score, {}, tie_seeds, opts_)) {
      if (o.measures.lambda(rate) > top_lambda) {
        top_lambda = o.measures.lambda(rate);
        top = std::move(o);
      }
    }
  }
  // The objective slack alone moves lambda by ~1e-5 around a smooth unique
  // minimum, so only a larger gain counts as a second minimizer.
  if (top_lambda - h.measures.lambda(rate) > 1e-4) fp.multiple = true;
  fp.tau_flat = top_lambda;
  fp.branch = tag(top.measures, rate);
  fp.cond = top.cond;
  fp.measures = top.measures;
  return fp;
}

ExponentResult fa_exponent(const Channel& w, const Distribution& p_in, double tau, double rate,
                           const SolverConfig& cfg) {
  return ExponentSolver(w, p_in, cfg).fa(tau, rate);
}

ExponentResult md_exponent(const Channel& w, const Distribution& p_in, double tau, double rate,
                           const SolverConfig& cfg) {
  return ExponentSolver(w, p_in, cfg).md(tau, rate);
}

std::pair<ExponentResult, ExponentResult> r0_exponents(const Channel& w, const Distribution& p_in, double tau,
                                                       const SolverConfig& cfg) {
  return ExponentSolver(w, p_in, cfg).r0(tau);
}

}  // namespace softcover
