#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "coxclaims/delay.hpp"
#include "coxclaims/intensity.hpp"
#include "coxclaims/rng.hpp"

namespace coxclaims {

struct ClaimRecord {
  double arrival = 0.0;
  double delay = 0.0;
  double report_time = 0.0;
  int period = 0;  // 1-based, d_{l-1} <= arrival < d_l
};

// Marked points on [0, d_horizon), sorted by arrival (ties keep generation order).
struct ClaimSet {
  std::vector<ClaimRecord> records;
  std::vector<double> boundaries;  // d_0 .. d_horizon
  double valuation = 0.0;          // d_horizon
  int horizon = 0;
  int extrapolated_periods = 0;  // periods simulated past the model grid
};

// Builds a ClaimSet from (arrival, delay) pairs, assigning periods from the
// boundaries d_0 < ... < d_k. Arrivals outside [d_0, d_k) are rejected.
ClaimSet make_claim_set(std::vector<double> boundaries,
                        std::span<const std::pair<double, double>> arrivals_and_delays);

// Count-then-scatter: per period N_l ~ Poisson((d_l - d_{l-1}) Lambda_l), epochs
// i.i.d. uniform on [d_{l-1}, d_l), delays i.i.d. from `delay`.
ClaimSet simulate(const ModelSpec& spec, const DelayModel& delay, int horizon, Stream& rng);

struct ClaimPartition {
  ClaimSet reported;  // arrival < tau, report_time <= tau
  ClaimSet ibnr;      // arrival < tau < report_time
};

ClaimPartition classify(const ClaimSet& claims, double tau);

// Per-period counts for periods 1..k where tau = d_k.
struct PeriodCounts {
  std::vector<long> all;
  std::vector<long> reported;
  std::vector<long> ibnr;
};

PeriodCounts discretize(const ClaimSet& claims, double tau);

// CSV `arrival,delay,report_time,period`, 12 significant digits.
void write_claims_csv(std::ostream& out, const ClaimSet& claims);
// Same with a leading `replication` column (1-based).
void write_claims_csv(std::ostream& out, std::span<const ClaimSet> replications);

}  // namespace coxclaims
