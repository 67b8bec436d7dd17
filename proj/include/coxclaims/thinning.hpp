#pragma once

#include <vector>

#include "coxclaims/delay.hpp"
#include "coxclaims/intensity.hpp"

namespace coxclaims {

// Which sub-process of the claims arriving before the valuation date.
enum class Which { reported, ibnr };

// Pascal scales of the thinned per-period counts at valuation tau = d_k:
//   reported[j-1] = (int_{d_{j-1}}^{d_j} P_U(tau - t) dt) omega_j theta
//   ibnr[j-1]     = (d_j - d_{j-1}) omega_j theta - reported[j-1]
struct ThinnedScales {
  std::vector<double> reported;
  std::vector<double> ibnr;
  double valuation = 0.0;

  const std::vector<double>& of(Which which) const {
    return which == Which::reported ? reported : ibnr;
  }
};

// Throws DomainError when tau is not a grid point of `spec`.
ThinnedScales thinned_scales(const ModelSpec& spec, const DelayModel& delay, double tau);

// Delay density of a claim arriving at t that is reported by tau:
// p_U(u) / P_U(tau - t) on [0, tau - t]. Throws DegenerateConditioningError
// when P_U(tau - t) = 0.
double reported_mark_density(const DelayModel& delay, double t, double tau, double u);

// Delay density of a claim arriving at t that is still unreported at tau:
// p_U(u) / (1 - P_U(tau - t)) on [tau - t, inf). Throws
// DegenerateConditioningError when P_U(tau - t) = 1.
double ibnr_mark_density(const DelayModel& delay, double t, double tau, double u);

// Conditional delay CDFs matching the densities above. Defined for every
// family, including the degenerate one where the mark law is a point mass.
double reported_mark_cdf(const DelayModel& delay, double t, double tau, double u);
double ibnr_mark_cdf(const DelayModel& delay, double t, double tau, double u);

}  // namespace coxclaims
