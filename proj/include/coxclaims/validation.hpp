#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "coxclaims/delay.hpp"
#include "coxclaims/intensity.hpp"
#include "coxclaims/pascal.hpp"
#include "coxclaims/thinning.hpp"

namespace coxclaims {

// Empirical law of the total reported or IBNR count at tau = d_k, from
// `replications` independent simulations. Replication r uses Stream(seed, r).
struct McCountLaw {
  std::vector<double> pmf;        // relative frequency of each count
  std::vector<double> std_error;  // binomial standard error of each entry
  long replications = 0;

  double mean() const;
};

McCountLaw mc_count_pmf(const ModelSpec& spec, const DelayModel& delay, double tau, Which which,
                        long replications, std::uint64_t seed);

// Naive joint pmf over all g^k hidden paths, with its own matrix and pmf
// arithmetic. Kept as an oracle for the forward recursion.
double brute_force_joint(const ModelSpec& spec, std::span<const long> counts,
                         std::span<const double> scales);
double brute_force_joint_at(const ModelSpec& spec, std::span<const int> periods,
                            std::span<const long> counts, std::span<const double> scales);

struct KsReport {
  double statistic = 0.0;
  long n = 0;
  double critical = 0.0;  // 1% level, 1.63 / sqrt(n)
  bool pass = false;
};

// One-sample Kolmogorov-Smirnov test against a continuous CDF.
KsReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);
KsReport ks_uniform(std::vector<double> samples, double lo, double hi);

// Bin-by-bin comparison of an empirical pmf with an exact one. Bins whose
// expected count is below `min_expected` are pooled into one bin.
struct PmfComparison {
  double max_z = 0.0;
  long worst_bin = -1;  // -1 for the pooled bin
  double total_variation = 0.0;
  bool pass = false;
};

PmfComparison compare_pmf(const McCountLaw& mc, const CountLaw& exact, double z_limit = 4.0,
                          double min_expected = 10.0);

// Total variation between two pmfs on {0, 1, ...}, counting the mass of the
// longer support beyond the shorter one.
double total_variation(std::span<const double> a, std::span<const double> b);

}  // namespace coxclaims
