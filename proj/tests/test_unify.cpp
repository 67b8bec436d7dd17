#include <gtest/gtest.h>

#include <cmath>

#include "coxclaims/errors.hpp"
#include "coxclaims/pascal.hpp"
#include "coxclaims/thinning.hpp"
#include "coxclaims/validation.hpp"
#include "helpers.hpp"

using namespace coxclaims;
using testing_support::reference_spec;

TEST(HmmMixture, ReproducesJoint) {
  const ModelSpec spec = reference_spec();
  const auto ts = thinned_scales(spec, DelayModel::exponential(1.0), 3.0);
  const PascalMixtureMulti mix = hmm_mixture(spec, ts.reported);
  EXPECT_NEAR(mix.mass(), 1.0, 1e-15);
  EXPECT_LE(mix.components.size(), 8u);
  for (long a = 0; a < 5; ++a)
    for (long b = 0; b < 5; ++b)
      for (long c = 0; c < 5; ++c) {
        const std::vector<long> n{a, b, c};
        EXPECT_NEAR(mix.pmf(n), joint_pmf(spec, n, ts.reported), 1e-15);
      }
  const auto grid = mix.pmf_grid(4);
  ASSERT_EQ(grid.size(), 125u);
  EXPECT_NEAR(grid[1 * 25 + 2 * 5 + 3], mix.pmf(std::vector<long>{1, 2, 3}), 1e-16);
}

TEST(HmmMixture, RefusesHugePathCounts) {
  const ModelSpec spec(TransitionMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}),
                       StateDistribution::from_vector({0.5, 0.5}), {1, 2}, 0.5, {0, 1}, {1});
  const std::vector<double> scales(21, 0.5);
  EXPECT_THROW(hmm_mixture(spec, scales), DomainError);
}

TEST(Unify, IdentityWhenScalesAgree) {
  const ModelSpec spec = reference_spec();
  const std::vector<double> scales{0.5, 0.5, 0.5};
  const PascalMixtureMulti mix = hmm_mixture(spec, scales);
  const PascalMixtureMulti same = unify_scales(mix, 0.5, 1e-10);
  ASSERT_EQ(same.components.size(), mix.components.size());
  for (std::size_t c = 0; c < mix.components.size(); ++c) {
    EXPECT_EQ(same.components[c].shapes, mix.components[c].shapes);
    EXPECT_EQ(same.components[c].weight, mix.components[c].weight);
  }
  EXPECT_EQ(same.deficit, 0.0);
}

TEST(Unify, HalvingScaleGivesGeometricLadder) {
  PascalMixtureMulti mix;
  mix.scales = {2.0};
  mix.components = {{{1}, 1.0}};
  const PascalMixtureMulti out = unify_scales(mix, 1.0, 1e-12);
  for (const auto& c : out.components)
    EXPECT_NEAR(c.weight, std::pow(0.5, c.shapes[0]), 1e-15) << c.shapes[0];
  EXPECT_NEAR(out.mass() + out.deficit, 1.0, 1e-12);
  for (long n = 0; n < 30; ++n)
    EXPECT_NEAR(out.pmf(std::vector<long>{n}), pascal_pmf(n, 1, 2.0), out.deficit + 1e-12);
}

TEST(Unify, ReproducesJointWithinDeficit) {
  std::mt19937_64 gen(41);
  int checked = 0;
  for (int rep = 0; rep < 12; ++rep) {
    testing_support::RandomSpecOptions o;
    o.states = 2 + rep % 2;
    o.periods = 2 + rep % 2;
    const ModelSpec spec = testing_support::random_spec(gen, o);
    const DelayModel delay = testing_support::random_delay(gen, rep % 4);
    const auto ts = thinned_scales(spec, delay, spec.boundary(o.periods));
    for (Which w : {Which::reported, Which::ibnr}) {
      const auto& s = ts.of(w);
      if (*std::min_element(s.begin(), s.end()) <= 0.0) continue;
      const PascalMixtureMulti mix = hmm_mixture(spec, s);
      const double theta = *std::min_element(s.begin(), s.end());
      PascalMixtureMulti uni;
      try {
        uni = unify_scales(mix, theta, 1e-9);
      } catch (const AccuracyError&) {
        // Only a very lopsided scale ratio may exhaust the enumeration budget.
        EXPECT_LT(theta / *std::max_element(s.begin(), s.end()), 0.05);
        continue;
      }
      ++checked;
      EXPECT_GE(uni.mass() + uni.deficit, 1.0 - 1e-9);
      EXPECT_LE(uni.mass() + uni.deficit, 1.0 + 1e-12);
      const auto a = mix.pmf_grid(5);
      const auto b = uni.pmf_grid(5);
      for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], uni.deficit + 1e-9);
    }
  }
  EXPECT_GE(checked, 12);
}

TEST(Unify, Preconditions) {
  PascalMixtureMulti mix;
  mix.scales = {1.0, 2.0};
  mix.components = {{{1, 1}, 1.0}};
  EXPECT_THROW(unify_scales(mix, 1.5, 1e-8), DomainError);
  EXPECT_THROW(unify_scales(mix, 0.0, 1e-8), DomainError);
  EXPECT_NO_THROW(unify_scales(mix, 1.0, 1e-8));
  EXPECT_THROW(aggregate(mix), DomainError);
  // A box far beyond the cell budget.
  PascalMixtureMulti wide;
  wide.scales = {1.0, 1.0, 1.0};
  wide.components = {{{1, 1, 1}, 1.0}};
  EXPECT_THROW(unify_scales(wide, 1e-4, 1e-12), AccuracyError);
}

TEST(Aggregate, ShapesAdd) {
  PascalMixtureMulti mix;
  mix.scales = {0.5, 0.5};
  mix.components = {{{1, 1}, 0.25}, {{1, 3}, 0.25}, {{3, 1}, 0.5}};
  const PascalMixtureUni uni = aggregate(mix);
  ASSERT_EQ(uni.weights.size(), 5u);
  EXPECT_EQ(uni.weights[2], 0.25);
  EXPECT_EQ(uni.weights[4], 0.75);
  // Sum of independent Pascals with a common scale is Pascal with the summed shape.
  for (long n = 0; n < 20; ++n) {
    double conv = 0.0;
    for (long a = 0; a <= n; ++a) conv += mix.pmf(std::vector<long>{a, n - a});
    EXPECT_NEAR(uni.pmf(n), conv, 1e-15);
  }
}

TEST(TotalShape, ForwardRecursionMatchesEnumeration) {
  const ModelSpec spec = reference_spec();
  const auto ts = thinned_scales(spec, DelayModel::exponential(1.0), 3.0);
  for (Which w : {Which::reported, Which::ibnr}) {
    const auto& s = ts.of(w);
    const double theta = *std::min_element(s.begin(), s.end());
    const PascalMixtureUni slow = aggregate(unify_scales(hmm_mixture(spec, s), theta, 1e-13));
    const PascalMixtureUni fast = total_shape_mixture(spec, s, 1e-13);
    EXPECT_EQ(fast.scale, theta);
    const std::size_t n = std::min(slow.weights.size(), fast.weights.size());
    for (std::size_t m = 0; m < n; ++m) EXPECT_NEAR(slow.weights[m], fast.weights[m], 1e-12) << m;
    for (long c = 0; c < 25; ++c) EXPECT_NEAR(slow.pmf(c), fast.pmf(c), 1e-12);
  }
}

TEST(TotalShape, ZeroScalesContributeNothing) {
  const ModelSpec spec = reference_spec();
  const std::vector<double> none{0.0, 0.0, 0.0};
  const PascalMixtureUni z = total_shape_mixture(spec, none, 1e-8);
  EXPECT_EQ(z.pmf(0), 1.0);
  EXPECT_EQ(z.pmf(1), 0.0);
  const std::vector<double> one{0.0, 0.5, 0.0};
  const PascalMixtureUni u = total_shape_mixture(spec, one, 1e-12);
  for (long n = 0; n < 10; ++n) EXPECT_NEAR(u.pmf(n), marginal_pmf(spec, 2, n), 1e-12);
}

TEST(TotalCount, MatchesConvolutionOfJoint) {
  const ModelSpec spec = reference_spec();
  const DelayModel delay = DelayModel::exponential(1.0);
  const auto ts = thinned_scales(spec, delay, 3.0);
  for (Which w : {Which::reported, Which::ibnr}) {
    const CountLaw law = total_count_law(spec, delay, 3.0, w, 1e-10);
    EXPECT_LE(law.tail_bound, 1e-10);
    for (long n = 0; n <= 15; ++n) {
      double conv = 0.0;
      for (long a = 0; a <= n; ++a)
        for (long b = 0; a + b <= n; ++b) {
          const std::vector<long> c{a, b, n - a - b};
          conv += joint_pmf(spec, c, ts.of(w));
        }
      EXPECT_NEAR(law.pmf[n], conv, 1e-9) << n;
    }
  }
}

TEST(TotalCount, DegenerateZeroDelayIbnrIsZero) {
  const ModelSpec spec = reference_spec();
  const CountLaw law = total_count_law(spec, DelayModel::degenerate(0.0), 3.0, Which::ibnr, 1e-6);
  ASSERT_EQ(law.pmf.size(), 1u);
  EXPECT_EQ(law.pmf[0], 1.0);
  EXPECT_EQ(law.tail_bound, 0.0);
}

TEST(TotalCount, Normalization) {
  std::mt19937_64 gen(88);
  int checked = 0;
  for (int rep = 0; rep < 20; ++rep) {
    testing_support::RandomSpecOptions o;
    o.states = 1 + rep % 3;
    o.periods = 1 + rep % 5;
    const ModelSpec spec = testing_support::random_spec(gen, o);
    const DelayModel delay = testing_support::random_delay(gen, rep);
    const auto ts = thinned_scales(spec, delay, spec.boundary(o.periods));
    for (Which w : {Which::reported, Which::ibnr}) {
      CountLaw law;
      try {
        law = total_count_law(spec, delay, spec.boundary(o.periods), w, 1e-6);
      } catch (const AccuracyError&) {
        const auto& s = ts.of(w);
        double lo = 1e300, hi = 0.0;
        for (double x : s)
          if (x > 0.0) lo = std::min(lo, x), hi = std::max(hi, x);
        EXPECT_LT(lo / hi, 0.01);
        continue;
      }
      ++checked;
      EXPECT_LE(law.tail_bound, 1e-6);
      EXPECT_GE(law.total(), 1.0 - 1e-6);
      EXPECT_LE(law.total(), 1.0 + 1e-12);
    }
  }
  EXPECT_GE(checked, 30);
}

TEST(TotalCount, RejectsBadTolerance) {
  const ModelSpec spec = reference_spec();
  EXPECT_THROW(total_count_law(spec, DelayModel::exponential(1.0), 3.0, Which::reported, 0.5),
               DomainError);
  EXPECT_THROW(total_count_law(spec, DelayModel::exponential(1.0), 2.5, Which::reported, 1e-6),
               DomainError);
}
