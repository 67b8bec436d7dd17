#include <gtest/gtest.h>

#include "coxclaims/pascal.hpp"
#include "coxclaims/rng.hpp"
#include "coxclaims/validation.hpp"
#include "helpers.hpp"

using namespace coxclaims;
using testing_support::reference_spec;

TEST(BruteForce, SingleStateIsProductOfPascals) {
  const ModelSpec spec(TransitionMatrix::from_rows({{1.0}}), StateDistribution::from_vector({1.0}),
                       {3}, 0.8, {0, 1, 2, 3}, {1, 1, 1});
  const std::vector<long> counts{2, 0, 5};
  const std::vector<double> scales{0.8, 0.3, 1.1};
  EXPECT_NEAR(brute_force_joint(spec, counts, scales),
              pascal_pmf(2, 3, 0.8) * pascal_pmf(0, 3, 0.3) * pascal_pmf(5, 3, 1.1), 1e-15);
}

TEST(Ks, UniformPassesAndSkewedFails) {
  Stream rng(3);
  std::vector<double> xs(20000), sq(20000);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = rng.uniform();
    sq[i] = xs[i] * xs[i];
  }
  const auto a = ks_uniform(xs, 0.0, 1.0);
  EXPECT_TRUE(a.pass) << a.statistic;
  EXPECT_NEAR(a.critical, 1.63 / std::sqrt(20000.0), 1e-15);
  EXPECT_FALSE(ks_uniform(sq, 0.0, 1.0).pass);
}

TEST(McCountPmf, NormalizedAndDeterministic) {
  const ModelSpec spec = reference_spec();
  const auto delay = DelayModel::exponential(1.0);
  const auto a = mc_count_pmf(spec, delay, 3.0, Which::reported, 20000, 7);
  const auto b = mc_count_pmf(spec, delay, 3.0, Which::reported, 20000, 7);
  EXPECT_EQ(a.pmf, b.pmf);
  double total = 0.0;
  for (double p : a.pmf) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(a.std_error.size(), a.pmf.size());
  EXPECT_THROW(mc_count_pmf(spec, delay, 2.5, Which::reported, 10, 1), DomainError);
}

TEST(ComparePmf, DetectsWrongLaw) {
  const ModelSpec spec = reference_spec();
  const auto delay = DelayModel::exponential(1.0);
  const auto mc = mc_count_pmf(spec, delay, 3.0, Which::reported, 100000, 11);
  const CountLaw right = total_count_law(spec, delay, 3.0, Which::reported, 1e-8);
  const CountLaw wrong = total_count_law(spec, delay, 3.0, Which::ibnr, 1e-8);
  const auto good = compare_pmf(mc, right);
  EXPECT_TRUE(good.pass) << good.max_z;
  EXPECT_LT(good.total_variation, 0.01);
  EXPECT_FALSE(compare_pmf(mc, wrong).pass);
}

TEST(TotalVariation, Basic) {
  const std::vector<double> a{0.5, 0.5}, b{0.5, 0.25, 0.25};
  EXPECT_DOUBLE_EQ(total_variation(a, b), 0.25);
  EXPECT_EQ(total_variation(a, a), 0.0);
}
