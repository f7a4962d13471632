#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "driftkit/bandwidth.hpp"
#include "driftkit/error.hpp"
#include "driftkit/estimators.hpp"
#include "naive_oracle.hpp"

using namespace driftkit;

namespace {

const Kernel kGauss = Kernel::gaussian();

PathEnsemble
from_rows(const std::vector<std::vector<double>>& rows, double t0, double T)
{
  oracle::Instance inst;
  inst.paths = rows;
  inst.t0 = t0;
  inst.T = T;
  return inst.ensemble();
}

TEST(BandwidthGrid, PaperGrids)
{
  const auto h1 = BandwidthGrid::h1();
  ASSERT_EQ(h1.size(), 10u);
  EXPECT_DOUBLE_EQ(h1.min(), 0.02);
  EXPECT_NEAR(h1[9], 0.2, 1e-15);
  EXPECT_NEAR(BandwidthGrid::h2()[4], 0.05, 1e-15);
  EXPECT_EQ(BandwidthGrid::parse("0.02:0.02:10").values(), h1.values());
}

TEST(BandwidthGrid, ParsesListsAndSorts)
{
  const auto g = BandwidthGrid::parse("0.3,0.1,0.2");
  EXPECT_EQ(g.values(), (std::vector<double>{ 0.1, 0.2, 0.3 }));
  EXPECT_THROW(BandwidthGrid::parse("0.1,0.1"), Error);
  EXPECT_THROW(BandwidthGrid::parse("0.1,-0.2"), Error);
  EXPECT_THROW(BandwidthGrid::parse("0.1:0.1"), Error);
  EXPECT_THROW(BandwidthGrid::parse("0.1:0.1:2.5"), Error);
  EXPECT_THROW(BandwidthGrid::parse("abc"), Error);
  EXPECT_THROW(BandwidthGrid(std::vector<double>{}), Error);
}

TEST(LooDrift, DuplicatePathsHalveTheEstimate)
{
  const std::vector<double> p{ 0.1, 0.4, 0.2, 0.5 };
  const auto ens = from_rows({ p, p }, 0.0, 3.0);
  const std::vector<double> xs{ 0.0, 0.15, 0.3, 0.6 };
  const auto full = estimate_drift(ens, kGauss, 0.2, xs, FloorSpec::absolute(1e-300));
  const auto loo = loo_drift(ens, kGauss, 0.2, 0, xs);
  for (std::size_t g = 0; g < xs.size(); ++g)
    EXPECT_NEAR(loo[g], 0.5 * full.values[g], 1e-14);

  // With the denominator re-summed over the kept path the duplicate is exact.
  const auto renorm = loo_drift(ens, kGauss, 0.2, 1, xs, { true });
  for (std::size_t g = 0; g < xs.size(); ++g)
    EXPECT_NEAR(renorm[g], full.values[g], 1e-14);
}

TEST(LooDrift, ConstantHeldOutPathByHand)
{
  const auto ens = from_rows({ { 0.0, 0.3, 0.5 }, { 1.0, 1.0, 1.0 } }, 1.0, 3.0);
  const std::vector<double> x{ 0.2 };
  // [K(-0.2) 0.3 + K(0.1) 0.2] / (dt [K(-0.2) + K(0.1) + 2 K(0.8)]), dt = 1
  EXPECT_NEAR(loo_drift(ens, kGauss, 1.0, 1, x)[0], 0.1438543458898089, 1e-15);
  EXPECT_EQ(loo_drift(ens, kGauss, 1.0, 0, x)[0], 0.0);
}

TEST(LooDrift, MatchesOracleOnRandomInstances)
{
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng, 2);
    const auto ens = inst.ensemble();
    const std::vector<double> xs{ -1.0, 0.0, 0.8 };
    for (std::size_t i = 0; i < inst.paths.size(); ++i) {
      const auto v = loo_drift(ens, kGauss, inst.h, i, xs);
      for (std::size_t g = 0; g < xs.size(); ++g)
        EXPECT_NEAR(v[g], oracle::loo(inst.paths, inst.h, inst.dt(), i, xs[g]), 1e-12);
    }
  }
}

TEST(LooDrift, Errors)
{
  const auto one = from_rows({ { 0.0, 1.0 } }, 0.0, 1.0);
  const std::vector<double> x{ 0.0 };
  try {
    loo_drift(one, kGauss, 1.0, 0, x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_paths);
  }
  const auto two = from_rows({ { 0.0, 1.0 }, { 0.5, 0.2 } }, 0.0, 1.0);
  EXPECT_THROW(loo_drift(two, kGauss, 1.0, 2, x), Error);
  EXPECT_THROW(loo_drift(two, kGauss, 0.0, 0, x), Error);
  try {
    loo_drift(two, kGauss, 0.01, 0, std::vector<double>{ 800.0 });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_weights);
  }
}

TEST(Cv, ConstantPathsGiveZero)
{
  const auto ens = from_rows({ { 1.0, 1.0, 1.0 }, { 0.0, 0.0, 0.0 }, { 0.5, 0.5, 0.5 } }, 0.0, 1.0);
  for (double h : { 0.01, 0.1, 1.0 })
    EXPECT_EQ(cv_criterion(ens, kGauss, h), 0.0);
}

TEST(Cv, MatchesTermByTermOracle)
{
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = oracle::random_instance(rng, 2);
    const auto b = cv_breakdown(inst.ensemble(), kGauss, inst.h);
    EXPECT_NEAR(b.value, oracle::cv(inst.paths, inst.h, inst.dt()), 1e-10);
    EXPECT_NEAR(b.quadratic, oracle::cv_quadratic(inst.paths, inst.h, inst.dt()), 1e-10);
    EXPECT_NEAR(b.cross, oracle::cv_cross(inst.paths, inst.h, inst.dt()), 1e-10);
    EXPECT_NEAR(b.value, b.quadratic - 2.0 * b.cross, 1e-10);
    EXPECT_EQ(b.degenerate_points, 0u);
  }
}

TEST(Cv, ScalingEquivariance)
{
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_instance(rng, 2);
    const double lambda = 2.5;
    auto scaled = inst;
    for (auto& p : scaled.paths)
      for (double& v : p)
        v *= lambda;
    const std::vector<double> xs{ -0.4, 0.1, 0.9 };
    const std::vector<double> lxs{ -0.4 * lambda, 0.1 * lambda, 0.9 * lambda };
    const auto base = loo_drift(inst.ensemble(), kGauss, inst.h, 0, xs);
    const auto big = loo_drift(scaled.ensemble(), kGauss, lambda * inst.h, 0, lxs);
    for (std::size_t g = 0; g < xs.size(); ++g)
      EXPECT_NEAR(big[g], lambda * base[g], 1e-10);
    EXPECT_NEAR(cv_criterion(scaled.ensemble(), kGauss, lambda * inst.h),
                lambda * lambda * cv_criterion(inst.ensemble(), kGauss, inst.h),
                1e-10);
  }
}

TEST(Cv, RenormalizedCountsDegeneratePoints)
{
  const auto ens = from_rows({ { 0.0, 0.1, 0.0 }, { 1000.0, 1000.1, 1000.0 } }, 0.0, 1.0);
  const auto full = cv_breakdown(ens, kGauss, 0.01);
  EXPECT_EQ(full.degenerate_points, 0u);
  const auto renorm = cv_breakdown(ens, kGauss, 0.01, { true });
  EXPECT_EQ(renorm.degenerate_points, 4u);
  EXPECT_EQ(renorm.value, 0.0);
}

TEST(Cv, LangevinCriterionFiniteOnH1)
{
  const auto ens = simulate_ensemble(make_preset(1), { 1.0, 5.0, 50 }, { 50, 10, 7 });
  const auto report = select_bandwidth(ens, kGauss, BandwidthGrid::h1());
  for (double c : report.criteria)
    EXPECT_TRUE(std::isfinite(c));
  EXPECT_GE(report.selected, 0.02);
  EXPECT_LE(report.selected, 0.08);
}

TEST(Select, SingleElementGrid)
{
  const auto ens = from_rows({ { 0.0, 0.2, 0.1 }, { 0.3, 0.1, 0.2 } }, 0.0, 1.0);
  const auto r = select_bandwidth(ens, kGauss, BandwidthGrid({ 0.37 }));
  EXPECT_EQ(r.selected, 0.37);
  EXPECT_EQ(r.selected_index, 0u);
}

TEST(Select, TiesGoToLargestBandwidth)
{
  const auto ens = from_rows({ { 1.0, 1.0, 1.0 }, { 0.0, 0.0, 0.0 } }, 0.0, 1.0);
  const auto r = select_bandwidth(ens, kGauss, BandwidthGrid::h1());
  EXPECT_NEAR(r.selected, 0.2, 1e-15);
  EXPECT_EQ(r.selected_index, 9u);
  for (double c : r.criteria)
    EXPECT_EQ(c, 0.0);
}

TEST(Select, ReportInvariantsAndOrderIndependence)
{
  const auto ens = simulate_ensemble(make_preset(3), { 1.0, 5.0, 20 }, { 10, 5, 8 });
  std::vector<double> hs{ 0.01, 0.02, 0.05, 0.1, 0.2, 0.4 };
  const auto ref = select_bandwidth(ens, kGauss, BandwidthGrid(hs));
  EXPECT_EQ(ref.selected, ref.hs[ref.selected_index]);
  for (double c : ref.criteria)
    EXPECT_LE(ref.criteria[ref.selected_index], c);

  std::mt19937_64 rng(1);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(hs.begin(), hs.end(), rng);
    EXPECT_EQ(select_bandwidth(ens, kGauss, BandwidthGrid(hs)).selected, ref.selected);
  }
}

TEST(Select, AllFailuresRaiseSelectionFailed)
{
  const Kernel broken("nan", [](double) { return std::nan(""); }, 1, 1.0);
  const auto ens = from_rows({ { 0.0, 0.2, 0.1 }, { 0.3, 0.1, 0.2 } }, 0.0, 1.0);
  try {
    select_bandwidth(ens, broken, BandwidthGrid({ 0.1, 0.2 }));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::selection_failed);
  }
}

TEST(Select, NeedsTwoPaths)
{
  const auto one = from_rows({ { 0.0, 1.0 } }, 0.0, 1.0);
  EXPECT_THROW(select_bandwidth(one, kGauss, BandwidthGrid::h1()), Error);
}

} // namespace
