#pragma once

#include <span>
#include <vector>

#include "coxclaims/delay.hpp"
#include "coxclaims/intensity.hpp"
#include "coxclaims/thinning.hpp"

namespace coxclaims {

// p(n; m, theta) = C(n+m-1, m-1) (1+theta)^{-m} (theta/(1+theta))^n, evaluated in
// log space. theta = 0 is the point mass at n = 0.
double pascal_pmf(long n, int m, double theta);

// log C(n, k); exact integer arithmetic while the value fits in 53 bits,
// log-gamma beyond.
double log_binomial(long n, long k);

// Upper bound on P(N > n) for N ~ Pascal(m, theta), from the geometric decay
// of successive pmf ratios. Returns +inf while the ratio bound is >= 1.
double pascal_tail_bound(long n, int m, double theta);

// Finite pmf on {0, ..., n_max}; tail_bound is the probability mass not listed.
struct CountLaw {
  std::vector<double> pmf;
  double tail_bound = 0.0;

  long n_max() const { return static_cast<long>(pmf.size()) - 1; }
  double total() const;
};

// P(N_l = n) = sum_i pi_{l,i} p(n; m_i, (d_l - d_{l-1}) omega_l theta).
double marginal_pmf(const ModelSpec& spec, int period, long n);

// marginal_pmf on {0..n_max}. With n_max <= 0 the range is extended until the
// geometric tail bound drops below eps.
CountLaw marginal_law(const ModelSpec& spec, int period, double eps, long n_max = 0);

// Unthinned Pascal scales (d_l - d_{l-1}) omega_l theta for l = 1..k.
std::vector<double> period_scales(const ModelSpec& spec, int k);

// P(N_1 = n_1, ..., N_k = n_k) for consecutive periods 1..k with the given
// per-period Pascal scales, computed as pi_1 D_1 Gamma D_2 ... Gamma D_k 1^T
// with D_l = diag(p(n_l; m_i, scale_l)).
double joint_pmf(const ModelSpec& spec, std::span<const long> counts,
                 std::span<const double> scales);

// Same for an increasing subset of periods l_1 < ... < l_k: starts from
// pi_{l_1} and steps with Gamma^{l_{j+1} - l_j}.
double joint_pmf_at(const ModelSpec& spec, std::span<const int> periods,
                    std::span<const long> counts, std::span<const double> scales);

// Stationary Cov(N_l, N_{l+lag}); lag 0 gives Var(N). Requires
// (d_l - d_{l-1}) omega_l = 1 for every grid period (PreconditionError names
// the first offending one). Uses Gamma^lag directly, so no spectral
// assumption is needed.
double covariance(const ModelSpec& spec, int lag);

// rho(lag) = sum_{i>=2} c_i e_i^lag from the spectral decomposition of Gamma.
// Throws SpectralUnsupportedError for complex or repeated spectra.
double acf(const ModelSpec& spec, int lag);

// covariance(lag) / covariance(0).
double acf_direct(const ModelSpec& spec, int lag);

enum class AcfPath { spectral, direct };

struct AcfSeries {
  std::vector<double> rho;  // rho[k-1] = rho(k), k = 1..max_lag
  AcfPath path = AcfPath::spectral;
};

// Spectral path when Gamma admits it, covariance ratio otherwise.
AcfSeries acf_series(const ModelSpec& spec, int max_lag);

struct MultiComponent {
  std::vector<int> shapes;
  double weight = 0.0;
};

// sum_c weight_c prod_j p(n_j; shapes_{c,j}, scales_j). Components are kept in
// lexicographic shape order with distinct shape tuples. `deficit` is mixing
// mass known to be missing (dropped by truncation).
struct PascalMixtureMulti {
  std::vector<double> scales;
  std::vector<MultiComponent> components;
  double deficit = 0.0;

  int dims() const { return static_cast<int>(scales.size()); }
  double mass() const;
  double pmf(std::span<const long> counts) const;
  // pmf over the whole box {0..n_max}^k, row-major with the last dimension
  // fastest.
  std::vector<double> pmf_grid(long n_max) const;
};

// Univariate mixture sum_m weights[m] p(n; m, scale). weights[0] is the mass of
// the degenerate shape-0 component (N = 0 surely).
struct PascalMixtureUni {
  std::vector<double> weights;
  double scale = 0.0;
  double deficit = 0.0;

  double mass() const;
  double pmf(long n) const;
};

// The k-period HMM law as a multivariate Pascal mixture: weights
// beta_(i_1..i_k) = pi_{1,i_1} gamma_{i_1 i_2} ... merged by shape tuple.
// Refuses when g^k exceeds 1e6.
PascalMixtureMulti hmm_mixture(const ModelSpec& spec, std::span<const double> scales);

// Re-expresses `mix` with every scale equal to theta (0 < theta <= min scale).
// Shapes are enumerated per dimension until the dropped mass is at most eps;
// the dropped mass is added to `deficit`. Throws AccuracyError when the
// enumeration box would exceed the cell budget.
PascalMixtureMulti unify_scales(const PascalMixtureMulti& mix, double theta, double eps);

// Law of N_1 + ... + N_k for a common-scale mixture: shapes add.
PascalMixtureUni aggregate(const PascalMixtureMulti& mix);

// Common-scale univariate law of the total count of a k-period Pascal-HMM
// with the given per-period scales, at theta* = min positive scale. Zero
// scales contribute no claims. Computed by a forward recursion over
// (state, accumulated shape), truncated once the dropped mass is <= eps.
PascalMixtureUni total_shape_mixture(const ModelSpec& spec, std::span<const double> scales,
                                     double eps);

// pmf of a univariate mixture on {0..n_max}; n_max <= 0 extends the range until
// the listed mass is within eps of the mixing mass.
CountLaw count_law(const PascalMixtureUni& mix, double eps, long n_max = 0);

// Law of the total reported or IBNR count at valuation tau = d_k.
CountLaw total_count_law(const ModelSpec& spec, const DelayModel& delay, double tau, Which which,
                         double eps, long n_max = 0);

}  // namespace coxclaims
