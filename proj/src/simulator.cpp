#include "coxclaims/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "coxclaims/errors.hpp"

namespace coxclaims {

namespace {

// j with boundaries[j] == tau within 1e-9 * d_k.
int boundary_index(const std::vector<double>& boundaries, double tau) {
  const double tol = 1e-9 * boundaries.back();
  for (std::size_t j = 0; j < boundaries.size(); ++j)
    if (std::abs(boundaries[j] - tau) <= tol) return static_cast<int>(j);
  std::ostringstream msg;
  msg << "valuation " << tau << " is not a grid point";
  throw DomainError(msg.str());
}

void sort_by_arrival(std::vector<ClaimRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ClaimRecord& a, const ClaimRecord& b) { return a.arrival < b.arrival; });
}

ClaimSet empty_like(const ClaimSet& claims) {
  ClaimSet out;
  out.boundaries = claims.boundaries;
  out.valuation = claims.valuation;
  out.horizon = claims.horizon;
  out.extrapolated_periods = claims.extrapolated_periods;
  return out;
}

void write_row(std::ostream& out, const ClaimRecord& r) {
  out << r.arrival << ',' << r.delay << ',' << r.report_time << ',' << r.period << '\n';
}

}  // namespace

ClaimSet make_claim_set(std::vector<double> boundaries,
                        std::span<const std::pair<double, double>> arrivals_and_delays) {
  if (boundaries.size() < 2 || boundaries.front() != 0.0)
    throw ValidationError("claim set boundaries need d_0 = 0 and at least one period");
  for (std::size_t i = 1; i < boundaries.size(); ++i)
    if (!(boundaries[i] > boundaries[i - 1]))
      throw ValidationError("claim set boundaries must be strictly increasing");

  ClaimSet out;
  out.horizon = static_cast<int>(boundaries.size()) - 1;
  out.valuation = boundaries.back();
  for (const auto& [arrival, delay] : arrivals_and_delays) {
    if (!(arrival >= 0.0) || !(arrival < out.valuation))
      throw DomainError("claim arrival outside [d_0, d_k)");
    if (!(delay >= 0.0)) throw DomainError("claim delay must be nonnegative");
    auto it = std::upper_bound(boundaries.begin(), boundaries.end(), arrival);
    const int period = static_cast<int>(it - boundaries.begin());
    out.records.push_back({arrival, delay, arrival + delay, period});
  }
  out.boundaries = std::move(boundaries);
  sort_by_arrival(out.records);
  return out;
}

ClaimSet simulate(const ModelSpec& spec, const DelayModel& delay, int horizon, Stream& rng) {
  const IntensityPath path = sample_path(spec, horizon, rng);

  ClaimSet out;
  out.horizon = horizon;
  out.boundaries.reserve(horizon + 1);
  for (int l = 0; l <= horizon; ++l) out.boundaries.push_back(spec.boundary(l));
  out.valuation = out.boundaries.back();
  out.extrapolated_periods = std::max(0, horizon - spec.periods());

  for (int l = 1; l <= horizon; ++l) {
    const double lo = out.boundaries[l - 1];
    const double hi = out.boundaries[l];
    const double mean = (hi - lo) * path.intensities[l - 1];
    const long n = mean > 0.0 ? std::poisson_distribution<long>(mean)(rng) : 0;
    const std::size_t first = out.records.size();
    for (long i = 0; i < n; ++i) {
      double t = lo + (hi - lo) * rng.uniform();
      if (t >= hi) t = std::nextafter(hi, lo);
      out.records.push_back({t, 0.0, 0.0, l});
    }
    std::stable_sort(out.records.begin() + static_cast<std::ptrdiff_t>(first), out.records.end(),
                     [](const ClaimRecord& a, const ClaimRecord& b) { return a.arrival < b.arrival; });
  }
  for (auto& r : out.records) {
    r.delay = delay.sample(rng);
    r.report_time = r.arrival + r.delay;
  }
  return out;
}

ClaimPartition classify(const ClaimSet& claims, double tau) {
  if (tau < 0.0) throw DomainError("valuation date must be nonnegative");
  if (tau > claims.valuation * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "valuation " << tau << " lies past the simulated horizon " << claims.valuation;
    throw DomainError(msg.str());
  }
  ClaimPartition out{empty_like(claims), empty_like(claims)};
  out.reported.valuation = tau;
  out.ibnr.valuation = tau;
  for (const auto& r : claims.records) {
    if (!(r.arrival < tau)) continue;
    if (r.report_time <= tau)
      out.reported.records.push_back(r);
    else
      out.ibnr.records.push_back(r);
  }
  return out;
}

PeriodCounts discretize(const ClaimSet& claims, double tau) {
  const int k = boundary_index(claims.boundaries, tau);
  const double t = claims.boundaries[k];
  PeriodCounts out;
  out.all.assign(k, 0);
  out.reported.assign(k, 0);
  out.ibnr.assign(k, 0);
  for (const auto& r : claims.records) {
    if (r.period > k) continue;
    ++out.all[r.period - 1];
    if (r.report_time <= t)
      ++out.reported[r.period - 1];
    else
      ++out.ibnr[r.period - 1];
  }
  return out;
}

void write_claims_csv(std::ostream& out, const ClaimSet& claims) {
  const auto old_precision = out.precision(12);
  out << "arrival,delay,report_time,period\n";
  for (const auto& r : claims.records) write_row(out, r);
  out.precision(old_precision);
}

void write_claims_csv(std::ostream& out, std::span<const ClaimSet> replications) {
  const auto old_precision = out.precision(12);
  out << "replication,arrival,delay,report_time,period\n";
  for (std::size_t i = 0; i < replications.size(); ++i) {
    for (const auto& r : replications[i].records) {
      out << i + 1 << ',';
      write_row(out, r);
    }
  }
  out.precision(old_precision);
}

}  // namespace coxclaims
