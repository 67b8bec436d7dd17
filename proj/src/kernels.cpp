#include "coxclaims/kernels.hpp"

#include <numeric>

#include "coxclaims/errors.hpp"
#include "coxclaims/simulator.hpp"

namespace coxclaims::kernels {

namespace {

void check_replication_args(const ModelSpec& spec, int horizon, long replications) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  if (replications < 0) throw DomainError("replication count must be nonnegative");
  (void)spec;
}

CountTable empty_table(int horizon, long replications) {
  CountTable t;
  t.replications = replications;
  t.periods = horizon;
  const auto n = static_cast<std::size_t>(replications) * horizon;
  t.all.assign(n, 0);
  t.reported.assign(n, 0);
  t.ibnr.assign(n, 0);
  return t;
}

void fill_row(const ModelSpec& spec, const DelayModel& delay, int horizon, std::uint64_t seed,
              long r, CountTable& t) {
  Stream rng(seed, static_cast<std::uint64_t>(r));
  const ClaimSet claims = simulate(spec, delay, horizon, rng);
  const PeriodCounts c = discretize(claims, claims.valuation);
  const std::size_t base = static_cast<std::size_t>(r) * horizon;
  for (int l = 0; l < horizon; ++l) {
    t.all[base + l] = static_cast<std::int32_t>(c.all[l]);
    t.reported[base + l] = static_cast<std::int32_t>(c.reported[l]);
    t.ibnr[base + l] = static_cast<std::int32_t>(c.ibnr[l]);
  }
}

void check_problem(const UnifyProblem& p) {
  const std::size_t k = p.offsets.size();
  if (k == 0 || p.extents.size() != k || p.ladders.size() != k)
    throw DomainError("unify problem dimensions disagree");
  for (const auto& c : p.components) {
    if (c.shapes.size() != k) throw DomainError("component shape tuple has the wrong dimension");
    for (std::size_t j = 0; j < k; ++j)
      if (c.shapes[j] < p.offsets[j] || c.shapes[j] >= p.offsets[j] + p.extents[j])
        throw DomainError("component shape outside the unification box");
  }
}

}  // namespace

long CountTable::total(Which which, long replication) const {
  const auto& v = of(which);
  const auto base = v.begin() + replication * periods;
  return std::accumulate(base, base + periods, 0L);
}

long CountTable::total_all(long replication) const {
  const auto base = all.begin() + replication * periods;
  return std::accumulate(base, base + periods, 0L);
}

CountTable replicate_counts(const ModelSpec& spec, const DelayModel& delay, int horizon,
                            long replications, std::uint64_t seed) {
  check_replication_args(spec, horizon, replications);
  CountTable t = empty_table(horizon, replications);
#pragma omp parallel for schedule(dynamic, 64)
  for (long r = 0; r < replications; ++r) fill_row(spec, delay, horizon, seed, r, t);
  return t;
}

CountTable replicate_counts_serial(const ModelSpec& spec, const DelayModel& delay, int horizon,
                                   long replications, std::uint64_t seed) {
  check_replication_args(spec, horizon, replications);
  CountTable t = empty_table(horizon, replications);
  for (long r = 0; r < replications; ++r) fill_row(spec, delay, horizon, seed, r, t);
  return t;
}

std::size_t UnifyProblem::cells() const {
  std::size_t n = 1;
  for (int e : extents) n *= static_cast<std::size_t>(e);
  return n;
}

// Gather: thread owns the slab of cells with leading index a and walks every
// component's sub-box inside it.
std::vector<double> unify_weights(const UnifyProblem& p) {
  check_problem(p);
  const int k = static_cast<int>(p.offsets.size());
  const std::size_t cells = p.cells();
  const std::size_t slab = cells / p.extents[0];
  std::vector<double> out(cells, 0.0);
  const long lead = p.extents[0];

#pragma omp parallel
  {
    std::vector<int> idx(k);
    std::vector<double> prefix(k + 1);
#pragma omp for schedule(dynamic)
    for (long a = 0; a < lead; ++a) {
      double* row = out.data() + a * slab;
      for (const auto& c : p.components) {
        const int n0 = c.shapes[0] - p.offsets[0];
        if (a < n0) continue;
        const double f0 = p.ladders[0][static_cast<std::size_t>(n0) * p.extents[0] + a];
        if (f0 == 0.0) continue;
        prefix[0] = c.weight;
        prefix[1] = prefix[0] * f0;
        if (k == 1) {
          row[0] += prefix[1];
          continue;
        }
        std::size_t offset = 0;
        for (int j = 1; j < k; ++j) {
          idx[j] = c.shapes[j] - p.offsets[j];
          offset = offset * p.extents[j] + idx[j];
        }
        for (int j = 1; j < k; ++j) {
          const int n = c.shapes[j] - p.offsets[j];
          prefix[j + 1] = prefix[j] * p.ladders[j][static_cast<std::size_t>(n) * p.extents[j] + idx[j]];
        }
        for (;;) {
          row[offset] += prefix[k];
          int j = k - 1;
          while (j >= 1 && idx[j] + 1 == p.extents[j]) {
            idx[j] = c.shapes[j] - p.offsets[j];
            --j;
          }
          if (j < 1) break;
          ++idx[j];
          offset = 0;
          for (int d = 1; d < k; ++d) offset = offset * p.extents[d] + idx[d];
          for (int d = j; d < k; ++d) {
            const int n = c.shapes[d] - p.offsets[d];
            prefix[d + 1] =
                prefix[d] * p.ladders[d][static_cast<std::size_t>(n) * p.extents[d] + idx[d]];
          }
        }
      }
    }
  }
  return out;
}

std::vector<double> unify_weights_serial(const UnifyProblem& p) {
  check_problem(p);
  const int k = static_cast<int>(p.offsets.size());
  std::vector<double> out(p.cells(), 0.0);
  std::vector<std::size_t> stride(k, 1);
  for (int j = k - 2; j >= 0; --j) stride[j] = stride[j + 1] * p.extents[j + 1];

  std::vector<int> lo(k), idx(k);
  for (const auto& c : p.components) {
    for (int j = 0; j < k; ++j) lo[j] = idx[j] = c.shapes[j] - p.offsets[j];
    for (;;) {
      double w = c.weight;
      std::size_t cell = 0;
      for (int j = 0; j < k; ++j) {
        w *= p.ladders[j][static_cast<std::size_t>(lo[j]) * p.extents[j] + idx[j]];
        cell += idx[j] * stride[j];
      }
      if (w != 0.0) out[cell] += w;
      int j = k - 1;
      while (j >= 0 && idx[j] + 1 == p.extents[j]) idx[j--] = 0;
      if (j < 0) break;
      ++idx[j];
      for (int d = j + 1; d < k; ++d) idx[d] = lo[d];
    }
  }
  return out;
}

}  // namespace coxclaims::kernels
