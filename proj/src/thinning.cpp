#include "coxclaims/thinning.hpp"

#include <algorithm>
#include <sstream>

#include "coxclaims/errors.hpp"

namespace coxclaims {

namespace {

void check_arrival(double t, double tau) {
  if (!(t >= 0.0) || t > tau) {
    std::ostringstream msg;
    msg << "arrival time " << t << " outside [0, " << tau << "]";
    throw DomainError(msg.str());
  }
}

double reported_probability(const DelayModel& delay, double t, double tau) {
  check_arrival(t, tau);
  const double p = delay.cdf(tau - t);
  if (p <= 0.0) throw DegenerateConditioningError("P_U(tau - t) = 0: no claim arriving at t is reported");
  return p;
}

double unreported_probability(const DelayModel& delay, double t, double tau) {
  check_arrival(t, tau);
  const double q = 1.0 - delay.cdf(tau - t);
  if (q <= 0.0) throw DegenerateConditioningError("P_U(tau - t) = 1: every claim arriving at t is reported");
  return q;
}

}  // namespace

ThinnedScales thinned_scales(const ModelSpec& spec, const DelayModel& delay, double tau) {
  const auto k = spec.grid_index(tau);
  if (!k || *k == 0) {
    std::ostringstream msg;
    msg << "valuation " << tau << " is not a positive grid point";
    throw DomainError(msg.str());
  }
  const double t_end = spec.boundary(*k);
  ThinnedScales out;
  out.valuation = t_end;
  out.reported.reserve(*k);
  out.ibnr.reserve(*k);
  for (int j = 1; j <= *k; ++j) {
    const double lo = spec.boundary(j - 1);
    const double hi = spec.boundary(j);
    const double reported_time = delay.integrated_cdf(lo, hi, t_end);
    const double factor = spec.exposure(j) * spec.base_scale();
    const double total = spec.period_scale(j);
    const double r = std::clamp(reported_time * factor, 0.0, total);
    out.reported.push_back(r);
    out.ibnr.push_back(total - r);
  }
  return out;
}

double reported_mark_density(const DelayModel& delay, double t, double tau, double u) {
  const double p = reported_probability(delay, t, tau);
  if (u < 0.0 || u > tau - t) return 0.0;
  return delay.density(u) / p;
}

double ibnr_mark_density(const DelayModel& delay, double t, double tau, double u) {
  const double q = unreported_probability(delay, t, tau);
  if (u < tau - t) return 0.0;
  return delay.density(u) / q;
}

double reported_mark_cdf(const DelayModel& delay, double t, double tau, double u) {
  const double p = reported_probability(delay, t, tau);
  if (u < 0.0) return 0.0;
  if (u >= tau - t) return 1.0;
  return std::min(delay.cdf(u) / p, 1.0);
}

double ibnr_mark_cdf(const DelayModel& delay, double t, double tau, double u) {
  const double q = unreported_probability(delay, t, tau);
  if (u <= tau - t) return 0.0;
  return std::clamp((delay.cdf(u) - delay.cdf(tau - t)) / q, 0.0, 1.0);
}

}  // namespace coxclaims
