#pragma once

#include <cstdint>
#include <vector>

#include "coxclaims/delay.hpp"
#include "coxclaims/intensity.hpp"
#include "coxclaims/pascal.hpp"
#include "coxclaims/thinning.hpp"

// Data-parallel kernels. Each has an OpenMP version and a plain serial
// reference kept for tests and benchmarks.
namespace coxclaims::kernels {

// Per-replication period counts, row-major: entry [r * periods + (l - 1)].
struct CountTable {
  long replications = 0;
  int periods = 0;
  std::vector<std::int32_t> all;
  std::vector<std::int32_t> reported;
  std::vector<std::int32_t> ibnr;

  const std::vector<std::int32_t>& of(Which which) const {
    return which == Which::reported ? reported : ibnr;
  }
  long total(Which which, long replication) const;
  long total_all(long replication) const;
};

// Simulates `replications` claim sets on periods 1..horizon and discretizes each
// at tau = d_horizon. Replication r draws from Stream(seed, r), so the output
// is identical for any thread count.
CountTable replicate_counts(const ModelSpec& spec, const DelayModel& delay, int horizon,
                            long replications, std::uint64_t seed);
CountTable replicate_counts_serial(const ModelSpec& spec, const DelayModel& delay, int horizon,
                                   long replications, std::uint64_t seed);

// Dense scale-unification problem. Dimension j spans shapes
// offsets[j] .. offsets[j] + extents[j] - 1; ladders[j] holds, row-major, the
// probability that a component of shape n (row n - offsets[j]) is re-expressed
// with shape m (column m - offsets[j]).
struct UnifyProblem {
  std::vector<int> offsets;
  std::vector<int> extents;
  std::vector<std::vector<double>> ladders;
  std::vector<MultiComponent> components;

  std::size_t cells() const;
};

// Output weight for every cell of the box, row-major with the last dimension
// fastest. The parallel version splits on the leading dimension; each cell is
// summed over components in a fixed order, so results do not depend on the
// thread count.
std::vector<double> unify_weights(const UnifyProblem& problem);
std::vector<double> unify_weights_serial(const UnifyProblem& problem);

}  // namespace coxclaims::kernels
