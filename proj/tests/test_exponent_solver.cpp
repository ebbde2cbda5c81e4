#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "softcover/exponent_solver.hpp"
#include "softcover/measures.hpp"
#include "softcover/phase.hpp"
#include "softcover/zchannel_oracle.hpp"

using namespace softcover;

namespace {

// 1-D oracle at grid 10^6, w = 0.45, uniform input.
constexpr double kFlat005 = 0.110791812064;
constexpr double kFa045 = 0.716389290354;    // R = 0.05, tau = 0.45
constexpr double kFa01 = 0.126023376107;     // R = 0.05, tau = 0.1
constexpr double kMdM006 = 0.255348335016;   // tau = -0.06, both R = 0.05 and 0.2
constexpr double kMd01 = 0.0260232166192;    // R = 0.05, tau = 0.1
constexpr double kMdM003 = 0.156997110223;   // R = 0.05, tau = -0.03
constexpr double kLambdaMax = 0.457365402344;
constexpr double kLambdaMin = -0.0776702239814;

// BSC(0.1), uniform input, R = 0, tau = 0.05: symmetric slice Q(1|0) = Q(0|1)
// scanned at 2e6 points, and the full 2001 x 2001 lattice.
constexpr double kBscR0FaSlice = 0.136645710;
constexpr double kBscR0MdSlice = 0.086645676;
constexpr double kBscR0Fa2d = 0.136653767;
constexpr double kBscR0Md2d = 0.086905420;

const ExponentSolver& zsolver() {
  static const ExponentSolver s(make_z_channel(0.45), Distribution::uniform(2));
  return s;
}

const ExponentSolver& bsc_solver() {
  static const ExponentSolver s(make_bsc(0.1), Distribution::uniform(2));
  return s;
}

Channel ternary() {
  const std::vector<double> m{0.7, 0.2, 0.1, 0.1, 0.3, 0.6};
  return Channel::from_matrix(2, 3, m);
}

void expect_consistent(const ExponentResult& r) {
  EXPECT_EQ(r.value.is_pos_inf(), !r.feasible);
  EXPECT_EQ(r.minimizer.has_value(), r.feasible);
}

}  // namespace

TEST(FaExponent, Examples) {
  const auto flat = zsolver().fa(-10.0, 0.05);
  EXPECT_NEAR(flat.value.value(), 0.111, 2e-3);
  EXPECT_NEAR(flat.value.value(), kFlat005, 1e-8);
  EXPECT_EQ(flat.branch, Branch::sparse);

  const auto inf = zsolver().fa(0.5, 0.05);
  EXPECT_TRUE(inf.value.is_pos_inf());
  expect_consistent(inf);

  for (double r : {0.25, 0.3, 0.5}) EXPECT_NEAR(zsolver().fa(0.0, r).value.value(), 0.0, 1e-12);
  EXPECT_NEAR(bsc_solver().fa(0.0, 0.4).value.value(), 0.0, 1e-12);
  const ExponentSolver t(ternary(), Distribution({0.6, 0.4}));
  EXPECT_NEAR(t.fa(0.0, t.mutual_information() + 0.01).value.value(), 0.0, 1e-12);
}

TEST(FaExponent, MatchesFrozenOracle) {
  EXPECT_NEAR(zsolver().fa(0.45, 0.05).value.value(), kFa045, 1e-4);
  EXPECT_NEAR(zsolver().fa(0.1, 0.05).value.value(), kFa01, 1e-5);
}

TEST(MdExponent, Examples) {
  EXPECT_EQ(zsolver().md(0.1941, 0.05).value.value(), 0.0);
  EXPECT_EQ(zsolver().md(0.3, 0.05).value.value(), 0.0);
  const auto inf = zsolver().md(-0.08, 0.05);
  EXPECT_TRUE(inf.value.is_pos_inf());
  expect_consistent(inf);
  const double a = zsolver().md(-0.06, 0.05).value.value();
  const double b = zsolver().md(-0.06, 0.20).value.value();
  EXPECT_NEAR(a, b, 1e-4);
  EXPECT_NEAR(a, kMdM006, 1e-5);
}

TEST(MdExponent, MatchesFrozenOracle) {
  EXPECT_NEAR(zsolver().md(0.1, 0.05).value.value(), kMd01, 1e-6);
  EXPECT_NEAR(zsolver().md(-0.03, 0.05).value.value(), kMdM003, 1e-5);
}

TEST(MdExponent, RateZeroThrows) {
  EXPECT_THROW(zsolver().md(0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(md_exponent(make_bsc(0.1), Distribution::uniform(2), 0.1, 0.0, SolverConfig{}), std::invalid_argument);
}

TEST(MdExponent, AtLambdaMinIsInfinite) {
  const double lmin = zsolver().lambda_min(0.05).value;
  EXPECT_TRUE(zsolver().md(lmin, 0.05).value.is_pos_inf());
  EXPECT_TRUE(zsolver().md(lmin + 1e-4, 0.05).feasible);
}

TEST(LambdaExtrema, ZChannel) {
  EXPECT_NEAR(zsolver().lambda_max(0.05).value, kLambdaMax, 1e-8);
  EXPECT_NEAR(zsolver().lambda_min(0.05).value, kLambdaMin, 1e-8);
}

TEST(ExponentResult, MinimizerReproducesValue) {
  const auto& s = zsolver();
  const Channel& w = s.space().channel();
  const Distribution& py = s.space().output();
  for (double tau : {-0.07, -0.03, 0.0, 0.05, 0.1, 0.3}) {
    const double rate = 0.05;
    const auto fa = s.fa(tau, rate);
    ASSERT_TRUE(fa.feasible);
    const auto& q = *fa.minimizer;
    const double iq = mutual_information(q).value();
    EXPECT_NEAR(fa.value.value(), kl_divergence(q.output_marginal(), py).value() + std::max(0.0, iq - rate), 1e-9);
    EXPECT_GE(lambda(q, w, py, rate).value(), tau - 1e-9);
    EXPECT_EQ(fa.branch == Branch::sparse, iq > rate + 1e-7);

    const auto md = s.md(tau, rate);
    ASSERT_TRUE(md.feasible);
    EXPECT_NEAR(md.value.value(), conditional_kl(*md.minimizer, w).value(), 1e-9);
    EXPECT_LE(lambda(*md.minimizer, w, py, rate).value(), tau + 1e-9);
  }
}

TEST(R0Exponents, Examples) {
  EXPECT_GT(zsolver().r0(0.0).second.value.value(), 0.01);
  EXPECT_GT(bsc_solver().r0(0.0).second.value.value(), 0.01);
  const auto id = r0_exponents(make_identity_channel(2), Distribution::uniform(2), 50.0, SolverConfig{});
  EXPECT_TRUE(id.first.value.is_pos_inf());
}

TEST(R0Exponents, BscAgainstBruteForce) {
  const auto [fa, md] = bsc_solver().r0(0.05);
  EXPECT_NEAR(fa.value.value(), kBscR0FaSlice, 1e-6);
  EXPECT_NEAR(md.value.value(), kBscR0MdSlice, 1e-6);
  // The coarse 2-D lattice can only overestimate a minimum.
  EXPECT_LE(fa.value.value(), kBscR0Fa2d + 1e-12);
  EXPECT_LE(md.value.value(), kBscR0Md2d + 1e-12);
  EXPECT_NEAR(fa.value.value(), kBscR0Fa2d, 5e-4);
  EXPECT_NEAR(md.value.value(), kBscR0Md2d, 5e-4);
}

TEST(ExponentProperties, MonotoneInTau) {
  for (const ExponentSolver* s : {&zsolver(), &bsc_solver()}) {
    for (double rate : {0.02, 0.1, 0.3}) {
      ExtReal prev_fa = ExtReal::neg_inf(), prev_md = ExtReal::pos_inf();
      for (double tau = -0.6; tau <= 0.6; tau += 0.05) {
        const auto fa = s->fa(tau, rate).value, md = s->md(tau, rate).value;
        EXPECT_GE(fa, prev_fa - ExtReal(1e-9)) << tau;
        EXPECT_LE(md, prev_md + ExtReal(1e-9)) << tau;
        prev_fa = fa;
        prev_md = md;
      }
    }
  }
}

TEST(ExponentProperties, ZeroSets) {
  for (const ExponentSolver* s : {&zsolver(), &bsc_solver()}) {
    for (double rate : {0.05, 0.15, 0.4}) {
      const double ts = std::max(0.0, s->mutual_information() - rate);
      EXPECT_EQ(s->md(ts + 1e-6, rate).value.value(), 0.0);
      for (double tau : {2e-6, 0.01, 0.1}) EXPECT_GT(s->fa(tau, rate).value.value(), 0.0);
    }
  }
}

TEST(ExponentProperties, FeasibilityConsistencyZChannel) {
  const double cell = 1e-3;
  for (double rate : {0.02, 0.1, 0.3}) {
    const double lmax = zsolver().lambda_max(rate).value, lmin = zsolver().lambda_min(rate).value;
    EXPECT_TRUE(zsolver().fa(lmax + cell, rate).value.is_pos_inf());
    EXPECT_TRUE(zsolver().fa(lmax - cell, rate).feasible);
    EXPECT_TRUE(zsolver().md(lmin - cell, rate).value.is_pos_inf());
    EXPECT_TRUE(zsolver().md(lmin + cell, rate).feasible);
  }
}

// Below zero the Delta constraint can empty the MD feasible set above
// lambda_min. On the BSC every output marginal has Delta > -0.52 at these
// rates, while lambda_min is near -1.7.
TEST(ExponentProperties, BscDeltaCutsMdBelowZero) {
  const double rate = 0.05;
  const double lmin = bsc_solver().lambda_min(rate).value;
  ASSERT_LT(lmin, -1.5);
  EXPECT_TRUE(bsc_solver().md(-1.0, rate).value.is_pos_inf());
  const double upto = md_infinite_upto(bsc_solver(), rate);
  EXPECT_GT(upto, lmin + 0.5);
  EXPECT_TRUE(bsc_solver().md(upto + 1e-4, rate).feasible);
  // R = 0 disables Delta and leaves the whole (lambda_min, 0) band finite.
  EXPECT_TRUE(bsc_solver().r0(-1.0).second.feasible);
}

TEST(ExponentProperties, SoftCoveringNonSingular) {
  const double r = bsc_solver().mutual_information() + 1e-3;
  EXPECT_LE(bsc_solver().fa(0.0, r).value.value(), 1e-9);
  EXPECT_LE(bsc_solver().md(0.0, r).value.value(), 1e-9);
}

TEST(ExponentSolver, DeterministicAcrossWorkers) {
  SolverConfig c1, c4;
  c4.workers = 4;
  const ExponentSolver a(make_bsc(0.1), Distribution::uniform(2), c1);
  const ExponentSolver b(make_bsc(0.1), Distribution::uniform(2), c4);
  for (double tau : {-0.3, 0.05, 0.2}) {
    EXPECT_EQ(a.fa(tau, 0.1).value, b.fa(tau, 0.1).value);
    EXPECT_EQ(a.md(tau, 0.1).value, b.md(tau, 0.1).value);
  }
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.grid_points_per_dim = 9;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_THROW(ExponentSolver(make_bsc(0.1), Distribution::uniform(2), c), std::invalid_argument);
  c = SolverConfig{};
  c.refinement_shrink = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(default_points_per_dim(1), 4001);
  EXPECT_EQ(default_points_per_dim(2), 401);
  EXPECT_EQ(default_points_per_dim(3), 61);
}

TEST(ZChannelOracle, Examples) {
  const ZChannelOracle o(0.45, 1000000);
  EXPECT_NEAR(o.fa(0.05, -10.0).value.value(), 0.111, 2e-3);
  const auto near_top = o.fa(0.05, kLambdaMax - 1e-4);
  ASSERT_TRUE(near_top.feasible);
  EXPECT_GT(near_top.value.value(), 0.7);
  // q = w is on the scan, so the zero-cost type is seen at tau = 0.
  for (double r : {0.2441, 0.3, 0.5}) EXPECT_EQ(o.fa(r, 0.0).value.value(), 0.0);
  const auto md = o.md(0.05, 0.1);
  EXPECT_GT(md.value.value(), 0.0);
  EXPECT_TRUE(md.value.is_finite());
  EXPECT_EQ(o.md(0.05, 0.2).value.value(), 0.0);
  EXPECT_NEAR(o.md(0.05, -0.06).value.value(), kMdM006, 1e-12);
  EXPECT_THROW(zchannel_oracle_md(0.45, 0.0, 0.1, 1000), std::invalid_argument);
}

TEST(ZChannelOracle, ClosedForms) {
  EXPECT_NEAR(zc_mutual_information(0.45), 0.244099370497396, 1e-14);
  EXPECT_NEAR(zc_dc(0.3, 0.45), 0.023586953669686, 1e-14);
  EXPECT_EQ(zc_dc(0.45, 0.45), 0.0);
  EXPECT_EQ(zc_dm(0.45, 0.45), 0.0);
}
