#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "softcover/exponent_solver.hpp"

namespace softcover {

enum class RegionTag { fa_flat, fa_active, fa_infinite, md_zero, md_active, md_infinite };

std::string to_string(RegionTag t);

struct PhaseReport {
  double rate = 0.0;
  double i_xy = 0.0;
  double tau_flat = 0.0;
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double tau_star = 0.0;
  // E_MD = +inf for tau <= md_infinite_upto. Equals lambda_min unless the
  // Delta constraint empties the feasible set above it.
  double md_infinite_upto = 0.0;
  std::optional<double> tau_kink;
  double fa_flat_value = 0.0;
  Branch flat_branch = Branch::bulk;
  bool tau_flat_ambiguous = false;
};

struct TradeoffPoint {
  double tau;
  ExtReal e_fa;
  ExtReal e_md;
};

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
  // (e_fa, e_md), finite pairs only, e_fa increasing and e_md strictly
  // decreasing.
  std::vector<std::pair<double, double>> envelope;
};

// Sub-interval of tau >= 0 on which both exponents exceed the tolerance.
struct TradeoffZone {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
  bool empty() const { return !(upper > lower); }
};

struct PhaseCell {
  double tau;
  double rate;
  ExtReal e_fa;
  ExtReal e_md;
  RegionTag fa;
  RegionTag md;
};

struct PhaseBoundary {
  double rate;
  double tau_flat;
  double lambda_max;
  double tau_star;
};

struct PhaseGrid {
  std::vector<PhaseCell> cells;  // rate-major, tau-minor
  std::vector<PhaseBoundary> boundaries;
};

// start, stop and count; count >= 2, endpoints included.
struct Range {
  double start;
  double stop;
  int count;
  double at(int i) const;
};

std::pair<double, double> lambda_extrema(const ExponentSolver& solver, double rate);

struct TauFlat {
  double tau_flat;
  double fa_flat_value;
  JointType minimizer;
  Branch branch;
  bool ambiguous;
};
TauFlat tau_flat(const ExponentSolver& solver, double rate);

// Largest tau with E_MD(tau, R) = +inf: lambda_min(R), or the Delta-induced
// boundary found by bisection on feasibility when that lies higher.
double md_infinite_upto(const ExponentSolver& solver, double rate);

// Bisection on the branch of the MD minimizer over (md_infinite_upto, 0).
std::optional<double> tau_kink(const ExponentSolver& solver, double rate);

// Bisection on the branch of the unconstrained FA minimizer between the first
// pair of adjacent grid rates whose branches differ.
std::optional<double> fa_cusp_rate(const ExponentSolver& solver, std::span<const double> rate_grid);

PhaseReport phase_report(const ExponentSolver& solver, double rate);

std::pair<RegionTag, RegionTag> classify(double tau, const PhaseReport& report);

TradeoffCurve tradeoff_curve(const ExponentSolver& solver, double rate, int tau_samples, double margin = 0.02);

TradeoffZone tradeoff_zone(const ExponentSolver& solver, double rate, double tol = 1e-9);

PhaseGrid phase_grid(const ExponentSolver& solver, const Range& tau, const Range& rate);

// Spellings taking the channel directly; each builds its own solver.
std::pair<double, double> lambda_extrema(const Channel& w, const Distribution& p_in, double rate,
                                         const SolverConfig& cfg);
TauFlat tau_flat(const Channel& w, const Distribution& p_in, double rate, const SolverConfig& cfg);
std::optional<double> tau_kink(const Channel& w, const Distribution& p_in, double rate, const SolverConfig& cfg);
std::optional<double> fa_cusp_rate(const Channel& w, const Distribution& p_in, std::span<const double> rate_grid,
                                   const SolverConfig& cfg);
TradeoffCurve tradeoff_curve(const Channel& w, const Distribution& p_in, double rate, int tau_samples,
                             const SolverConfig& cfg);
PhaseGrid phase_grid(const Channel& w, const Distribution& p_in, const Range& tau, const Range& rate,
                     const SolverConfig& cfg);

}  // namespace softcover
