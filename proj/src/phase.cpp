#include "softcover/phase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "softcover/parallel.hpp"

namespace softcover {

namespace {

constexpr double kBisectWidth = 1e-9;

ExponentResult md_at(const ExponentSolver& s, double tau, double rate) {
  return rate > 0.0 ? s.md(tau, rate) : s.r0(tau).second;
}

PhaseReport report(const ExponentSolver& solver, double rate, bool with_kink) {
  PhaseReport r;
  r.rate = rate;
  r.i_xy = solver.mutual_information();
  r.lambda_max = solver.lambda_max(rate).value;
  r.lambda_min = solver.lambda_min(rate).value;
  r.tau_star = std::max(0.0, r.i_xy - rate);
  r.md_infinite_upto = md_infinite_upto(solver, rate);
  const auto fp = solver.unconstrained_fa(rate);
  r.tau_flat = fp.tau_flat;
  r.fa_flat_value = fp.value;
  r.flat_branch = fp.branch;
  r.tau_flat_ambiguous = fp.multiple;
  if (with_kink && rate > 0.0) r.tau_kink = tau_kink(solver, rate);
  return r;
}

}  // namespace

std::string to_string(RegionTag t) {
  switch (t) {
    case RegionTag::fa_flat: return "FA_flat";
    case RegionTag::fa_active: return "FA_active";
    case RegionTag::fa_infinite: return "FA_infinite";
    case RegionTag::md_zero: return "MD_zero";
    case RegionTag::md_active: return "MD_active";
    case RegionTag::md_infinite: return "MD_infinite";
  }
  return "?";
}

double Range::at(int i) const {
  if (i == count - 1) return stop;
  return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
}

std::pair<double, double> lambda_extrema(const ExponentSolver& solver, double rate) {
  return {solver.lambda_min(rate).value, solver.lambda_max(rate).value};
}

TauFlat tau_flat(const ExponentSolver& solver, double rate) {
  const auto fp = solver.unconstrained_fa(rate);
  return {fp.tau_flat, fp.value, solver.space().joint_type(fp.cond), fp.branch, fp.multiple};
}

double md_infinite_upto(const ExponentSolver& solver, double rate) {
  const double lmin = solver.lambda_min(rate).value;
  constexpr double kStep = 1e-6;
  if (md_at(solver, lmin + kStep, rate).feasible) return lmin;
  double lo = lmin + kStep, hi = std::max(0.0, lmin) + kStep;
  if (!md_at(solver, hi, rate).feasible) return hi;
  while (hi - lo > kBisectWidth) {
    const double mid = 0.5 * (lo + hi);
    (md_at(solver, mid, rate).feasible ? hi : lo) = mid;
  }
  return lo;
}

std::optional<double> tau_kink(const ExponentSolver& solver, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("tau_kink: rate must be > 0");
  double lo = md_infinite_upto(solver, rate) + 1e-6, hi = -1e-6;
  if (!(lo < hi)) return std::nullopt;
  const auto a = solver.md(lo, rate), b = solver.md(hi, rate);
  if (!a.feasible || !b.feasible || a.branch == b.branch) return std::nullopt;
  const Branch low_branch = a.branch;
  while (hi - lo > kBisectWidth) {
    const double mid = 0.5 * (lo + hi);
    const auto m = solver.md(mid, rate);
    if (m.feasible && m.branch == low_branch)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::optional<double> fa_cusp_rate(const ExponentSolver& solver, std::span<const double> rate_grid) {
  if (!std::is_sorted(rate_grid.begin(), rate_grid.end()))
    throw std::invalid_argument("fa_cusp_rate: rate grid must be ascending");
  if (rate_grid.size() < 2) return std::nullopt;
  Branch prev = solver.unconstrained_fa(rate_grid[0]).branch;
  for (std::size_t i = 1; i < rate_grid.size(); ++i) {
    const Branch cur = solver.unconstrained_fa(rate_grid[i]).branch;
    if (cur == prev) continue;
    double lo = rate_grid[i - 1], hi = rate_grid[i];
    while (hi - lo > kBisectWidth) {
      const double mid = 0.5 * (lo + hi);
      if (solver.unconstrained_fa(mid).branch == prev)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

PhaseReport phase_report(const ExponentSolver& solver, double rate) { return report(solver, rate, true); }

std::pair<RegionTag, RegionTag> classify(double tau, const PhaseReport& r) {
  RegionTag fa = RegionTag::fa_active;
  if (tau > r.lambda_max)
    fa = RegionTag::fa_infinite;
  else if (tau <= r.tau_flat)
    fa = RegionTag::fa_flat;
  RegionTag md = RegionTag::md_active;
  if (tau <= std::max(r.lambda_min, r.md_infinite_upto))
    md = RegionTag::md_infinite;
  else if (tau >= r.tau_star)
    md = RegionTag::md_zero;
  return {fa, md};
}

TradeoffCurve tradeoff_curve(const ExponentSolver& solver, double rate, int tau_samples, double margin) {
  if (!(rate > 0.0)) throw std::invalid_argument("tradeoff_curve: rate must be > 0 (use r0 mode for R = 0)");
  if (tau_samples < 2) throw std::invalid_argument("tradeoff_curve: need at least 2 tau samples");
  const double lmin = solver.lambda_min(rate).value;
  const double tau_star = std::max(0.0, solver.mutual_information() - rate);
  const Range taus{lmin - margin, tau_star + margin, tau_samples};

  TradeoffCurve c;
  c.points.resize(static_cast<std::size_t>(tau_samples));
  parallel_for(c.points.size(), solver.config().workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double tau = taus.at(static_cast<int>(i));
      c.points[i] = {tau, solver.fa(tau, rate).value, solver.md(tau, rate).value};
    }
  });

  std::vector<std::pair<double, double>> finite;
  for (const auto& p : c.points)
    if (p.e_fa.is_finite() && p.e_md.is_finite()) finite.emplace_back(p.e_fa.value(), p.e_md.value());
  std::stable_sort(finite.begin(), finite.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  });
  for (const auto& p : finite) {
    // A flat FA run keeps only its highest MD point.
    if (!c.envelope.empty() && p.first - c.envelope.back().first <= 1e-9) continue;
    while (!c.envelope.empty() && c.envelope.back().second <= p.second) c.envelope.pop_back();
    c.envelope.push_back(p);
  }
  return c;
}

TradeoffZone tradeoff_zone(const ExponentSolver& solver, double rate, double tol) {
  if (!(rate > 0.0)) throw std::invalid_argument("tradeoff_zone: rate must be > 0");
  auto fa_pos = [&](double tau) { return solver.fa(tau, rate).value > ExtReal(tol); };
  auto md_pos = [&](double tau) { return solver.md(tau, rate).value > ExtReal(tol); };

  TradeoffZone z;
  if (!md_pos(0.0)) return z;
  const double tau_star = std::max(0.0, solver.mutual_information() - rate);

  double lo = 0.0, hi = tau_star + 1e-6;
  while (hi - lo > kBisectWidth) {
    const double mid = 0.5 * (lo + hi);
    (md_pos(mid) ? lo : hi) = mid;
  }
  z.upper = lo;

  if (fa_pos(0.0)) {
    z.lower = 0.0;
  } else {
    lo = 0.0;
    hi = z.upper;
    if (!fa_pos(hi)) return {};
    while (hi - lo > kBisectWidth) {
      const double mid = 0.5 * (lo + hi);
      (fa_pos(mid) ? hi : lo) = mid;
    }
    z.lower = hi;
  }
  if (z.lower >= z.upper) return {};
  return z;
}

PhaseGrid phase_grid(const ExponentSolver& solver, const Range& tau, const Range& rate) {
  if (tau.count < 2 || rate.count < 2) throw std::invalid_argument("phase_grid: counts must be >= 2");
  PhaseGrid g;
  std::vector<PhaseReport> reports(static_cast<std::size_t>(rate.count));
  for (int j = 0; j < rate.count; ++j) {
    reports[static_cast<std::size_t>(j)] = report(solver, rate.at(j), false);
    const auto& r = reports[static_cast<std::size_t>(j)];
    g.boundaries.push_back({r.rate, r.tau_flat, r.lambda_max, r.tau_star});
  }
  g.cells.resize(static_cast<std::size_t>(tau.count) * static_cast<std::size_t>(rate.count));
  parallel_for(g.cells.size(), solver.config().workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const int j = static_cast<int>(k / static_cast<std::size_t>(tau.count));
      const int i = static_cast<int>(k % static_cast<std::size_t>(tau.count));
      const double t = tau.at(i), r = rate.at(j);
      const auto [fa_tag, md_tag] = classify(t, reports[static_cast<std::size_t>(j)]);
      g.cells[k] = {t, r, solver.fa(t, r).value, md_at(solver, t, r).value, fa_tag, md_tag};
    }
  });
  return g;
}

std::pair<double, double> lambda_extrema(const Channel& w, const Distribution& p_in, double rate,
                                         const SolverConfig& cfg) {
  return lambda_extrema(ExponentSolver(w, p_in, cfg), rate);
}

TauFlat tau_flat(const Channel& w, const Distribution& p_in, double rate, const SolverConfig& cfg) {
  return tau_flat(ExponentSolver(w, p_in, cfg), rate);
}

std::optional<double> tau_kink(const Channel& w, const Distribution& p_in, double rate, const SolverConfig& cfg) {
  return tau_kink(ExponentSolver(w, p_in, cfg), rate);
}

std::optional<double> fa_cusp_rate(const Channel& w, const Distribution& p_in, std::span<const double> rate_grid,
                                   const SolverConfig& cfg) {
  return fa_cusp_rate(ExponentSolver(w, p_in, cfg), rate_grid);
}

TradeoffCurve tradeoff_curve(const Channel& w, const Distribution& p_in, double rate, int tau_samples,
                             const SolverConfig& cfg) {
  return tradeoff_curve(ExponentSolver(w, p_in, cfg), rate, tau_samples);
}

PhaseGrid phase_grid(const Channel& w, const Distribution& p_in, const Range& tau, const Range& rate,
                     const SolverConfig& cfg) {
  return phase_grid(ExponentSolver(w, p_in, cfg), tau, rate);
}

}  // namespace softcover
