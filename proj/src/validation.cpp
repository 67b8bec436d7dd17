#include "coxclaims/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coxclaims/errors.hpp"
#include "coxclaims/kernels.hpp"

namespace coxclaims {

namespace {

using Matrix = std::vector<std::vector<double>>;

Matrix to_rows(const Eigen::MatrixXd& m) {
  Matrix out(m.rows(), std::vector<double>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

Matrix naive_power(const Matrix& a, int k) {
  const std::size_t n = a.size();
  Matrix p(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) p[i][i] = 1.0;
  for (int s = 0; s < k; ++s) p = multiply(p, a);
  return p;
}

double naive_pascal(long n, int m, double theta) {
  if (theta == 0.0) return n == 0 ? 1.0 : 0.0;
  const double lg = std::lgamma(n + m) - std::lgamma(m) - std::lgamma(n + 1.0);
  return std::exp(lg - m * std::log(1.0 + theta) + n * std::log(theta / (1.0 + theta)));
}

}  // namespace

double McCountLaw::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < pmf.size(); ++n) m += n * pmf[n];
  return m;
}

McCountLaw mc_count_pmf(const ModelSpec& spec, const DelayModel& delay, double tau, Which which,
                        long replications, std::uint64_t seed) {
  if (replications < 1) throw DomainError("need at least one replication");
  const auto k = spec.grid_index(tau);
  if (!k || *k == 0) {
    std::ostringstream msg;
    msg << "valuation " << tau << " is not a positive grid point";
    throw DomainError(msg.str());
  }
  const kernels::CountTable table = kernels::replicate_counts(spec, delay, *k, replications, seed);
  McCountLaw out;
  out.replications = replications;
  for (long r = 0; r < replications; ++r) {
    const long n = table.total(which, r);
    if (static_cast<long>(out.pmf.size()) <= n) out.pmf.resize(n + 1, 0.0);
    out.pmf[n] += 1.0;
  }
  out.std_error.resize(out.pmf.size());
  for (std::size_t n = 0; n < out.pmf.size(); ++n) {
    out.pmf[n] /= static_cast<double>(replications);
    out.std_error[n] = std::sqrt(out.pmf[n] * (1.0 - out.pmf[n]) / replications);
  }
  return out;
}

double brute_force_joint(const ModelSpec& spec, std::span<const long> counts,
                         std::span<const double> scales) {
  std::vector<int> periods(counts.size());
  for (std::size_t j = 0; j < periods.size(); ++j) periods[j] = static_cast<int>(j) + 1;
  return brute_force_joint_at(spec, periods, counts, scales);
}

double brute_force_joint_at(const ModelSpec& spec, std::span<const int> periods,
                            std::span<const long> counts, std::span<const double> scales) {
  const std::size_t k = periods.size();
  if (k == 0 || counts.size() != k || scales.size() != k)
    throw DomainError("brute-force joint: dimension mismatch");
  const int g = spec.states();
  const Matrix gamma = to_rows(spec.chain().matrix());

  std::vector<double> start(g);
  for (int i = 0; i < g; ++i) start[i] = spec.initial()[i];
  const Matrix lead = naive_power(gamma, periods[0] - 1);
  std::vector<double> law(g, 0.0);
  for (int a = 0; a < g; ++a)
    for (int b = 0; b < g; ++b) law[b] += start[a] * lead[a][b];

  std::vector<Matrix> steps;
  for (std::size_t j = 1; j < k; ++j) steps.push_back(naive_power(gamma, periods[j] - periods[j - 1]));

  long paths = 1;
  for (std::size_t j = 0; j < k; ++j) paths *= g;
  double total = 0.0;
  std::vector<int> path(k, 0);
  for (long p = 0; p < paths; ++p) {
    double w = law[path[0]] * naive_pascal(counts[0], spec.shapes()[path[0]], scales[0]);
    for (std::size_t j = 1; j < k; ++j)
      w *= steps[j - 1][path[j - 1]][path[j]] * naive_pascal(counts[j], spec.shapes()[path[j]], scales[j]);
    total += w;
    for (std::size_t j = k; j-- > 0;) {
      if (++path[j] < g) break;
      path[j] = 0;
    }
  }
  return total;
}

KsReport ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  KsReport out;
  out.n = static_cast<long>(samples.size());
  if (out.n == 0) throw DomainError("KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(out.n);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    out.statistic = std::max({out.statistic, (i + 1) / n - f, f - i / n});
  }
  out.critical = 1.63 / std::sqrt(n);
  out.pass = out.statistic <= out.critical;
  return out;
}

KsReport ks_uniform(std::vector<double> samples, double lo, double hi) {
  if (!(hi > lo)) throw DomainError("KS uniform needs lo < hi");
  return ks_test(std::move(samples),
                 [lo, hi](double x) { return std::clamp((x - lo) / (hi - lo), 0.0, 1.0); });
}

PmfComparison compare_pmf(const McCountLaw& mc, const CountLaw& exact, double z_limit,
                          double min_expected) {
  PmfComparison out;
  const double reps = static_cast<double>(mc.replications);
  const std::size_t bins = std::max(mc.pmf.size(), exact.pmf.size());
  double pool_p = exact.tail_bound;
  double pool_f = 0.0;
  for (std::size_t n = 0; n < bins; ++n) {
    const double p = n < exact.pmf.size() ? exact.pmf[n] : 0.0;
    const double f = n < mc.pmf.size() ? mc.pmf[n] : 0.0;
    out.total_variation += 0.5 * std::abs(f - p);
    if (reps * p < min_expected) {
      pool_p += p;
      pool_f += f;
      continue;
    }
    const double z = std::abs(f - p) / std::sqrt(p * (1.0 - p) / reps);
    if (z > out.max_z) {
      out.max_z = z;
      out.worst_bin = static_cast<long>(n);
    }
  }
  if (pool_p > 0.0 || pool_f > 0.0) {
    const double se = std::sqrt(std::max(pool_p * (1.0 - pool_p), 1.0 / reps) / reps);
    const double z = std::abs(pool_f - pool_p) / se;
    if (z > out.max_z) {
      out.max_z = z;
      out.worst_bin = -1;
    }
  }
  out.pass = out.max_z <= z_limit;
  return out;
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = std::max(a.size(), b.size());
  double tv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    tv += std::abs(x - y);
  }
  return 0.5 * tv;
}

}  // namespace coxclaims
