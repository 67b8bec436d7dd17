#include "coxclaims/pascal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "coxclaims/errors.hpp"
#include "coxclaims/kernels.hpp"
#include "coxclaims/markov.hpp"

namespace coxclaims {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kExactLimit = std::uint64_t{1} << 53;
constexpr std::size_t kMaxUnifyCells = std::size_t{1} << 23;
constexpr long kMaxHiddenPaths = 1'000'000;
constexpr int kMaxShapeSum = 1 << 13;

// log p(n; m, theta) for m >= 0 (m = 0 is the point mass at zero).
double log_pascal(long n, int m, double theta) {
  if (m == 0 || theta == 0.0) return n == 0 ? 0.0 : kNegInf;
  const double l1p = std::log1p(theta);
  return log_binomial(n + m - 1, m - 1) - m * l1p + n * (std::log(theta) - l1p);
}

// Probability that a shape-n component at scale theta_j is re-expressed with
// shape m at the common scale, r = theta / theta_j:
//   C(m-1, n-1) r^n (1-r)^(m-n), m >= n.
double ladder_weight(int m, int n, double r) {
  if (m < n) return 0.0;
  if (r >= 1.0) return m == n ? 1.0 : 0.0;
  return std::exp(log_binomial(m - 1, n - 1) + n * std::log(r) + (m - n) * std::log1p(-r));
}

// P(Bin(trials, r) < n): mass of the ladder above `trials`.
double ladder_tail(int trials, int n, double r) {
  if (r >= 1.0) return trials >= n ? 0.0 : 1.0;
  double tail = 0.0;
  for (int i = 0; i < n && i <= trials; ++i)
    tail += std::exp(log_binomial(trials, i) + i * std::log(r) + (trials - i) * std::log1p(-r));
  return tail;
}

void check_normalized_grid(const ModelSpec& spec) {
  for (int l = 1; l <= spec.periods(); ++l) {
    const double v = spec.period_length(l) * spec.exposure(l);
    if (std::abs(v - 1.0) > 1e-9) {
      std::ostringstream msg;
      msg << "stationary ACF needs (d_l - d_{l-1}) * omega_l = 1 for every period; period " << l
          << " has " << v;
      throw PreconditionError(msg.str());
    }
  }
}

Eigen::VectorXd shape_vector(const ModelSpec& spec) {
  Eigen::VectorXd m(spec.states());
  for (int i = 0; i < spec.states(); ++i) m(i) = spec.shapes()[i];
  return m;
}

double variance_term(const Eigen::RowVectorXd& delta, const Eigen::VectorXd& m, double theta) {
  double a = 0.0;
  double b = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    a += delta(i) * m(i) * (m(i) + (1.0 + theta) / theta);
    b += delta(i) * m(i);
  }
  return a - b * b;
}

// Spectral rho(1..max_lag); throws SpectralUnsupportedError.
std::vector<double> spectral_acf(const ModelSpec& spec, int max_lag) {
  check_normalized_grid(spec);
  std::vector<double> rho(std::max(max_lag, 0), 0.0);
  if (spec.states() == 1 || has_identical_rows(spec.chain())) return rho;

  const SpectralDecomposition sd = spectral_decompose(spec.chain());
  const Eigen::RowVectorXd delta = stationary_distribution(spec.chain()).weights();
  const Eigen::VectorXd m = shape_vector(spec);
  const double denom = variance_term(delta, m, spec.base_scale());
  const int g = spec.states();
  std::vector<double> c(g, 0.0);
  for (int i = 1; i < g; ++i) {
    const double left = delta.cwiseProduct(m.transpose()).dot(sd.right.col(i).transpose());
    const double right = sd.left.row(i).dot(m.transpose());
    c[i] = left * right / denom;
  }
  for (int k = 1; k <= max_lag; ++k) {
    double sum = 0.0;
    for (int i = 1; i < g; ++i) sum += c[i] * std::pow(sd.eigenvalues(i), k);
    rho[k - 1] = sum;
  }
  return rho;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("truncation tolerance must lie in (0, 1)");
}

}  // namespace

double log_binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return kNegInf;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  bool exact = true;
  for (long i = 1; i <= k; ++i) {
    const auto factor = static_cast<std::uint64_t>(n - k + i);
    if (c > kExactLimit / factor) {
      exact = false;
      break;
    }
    c = c * factor / static_cast<std::uint64_t>(i);
  }
  if (exact) return std::log(static_cast<double>(c));
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double pascal_pmf(long n, int m, double theta) {
  if (n < 0) throw DomainError("pascal_pmf: count must be nonnegative");
  if (m < 1) throw DomainError("pascal_pmf: shape must be at least 1");
  if (!(theta >= 0.0) || !std::isfinite(theta))
    throw DomainError("pascal_pmf: scale must be finite and nonnegative");
  return std::exp(log_pascal(n, m, theta));
}

double pascal_tail_bound(long n, int m, double theta) {
  if (theta == 0.0 || m == 0) return 0.0;
  const double q = theta / (1.0 + theta);
  const double ratio = (static_cast<double>(n) + 1.0 + m) / (static_cast<double>(n) + 2.0) * q;
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return std::exp(log_pascal(n + 1, m, theta)) / (1.0 - ratio);
}

double CountLaw::total() const { return std::accumulate(pmf.begin(), pmf.end(), 0.0); }

double marginal_pmf(const ModelSpec& spec, int period, long n) {
  const Eigen::RowVectorXd law = spec.state_law(period);
  const double scale = spec.period_scale(period);
  double p = 0.0;
  for (int i = 0; i < spec.states(); ++i) p += law(i) * pascal_pmf(n, spec.shapes()[i], scale);
  return p;
}

CountLaw marginal_law(const ModelSpec& spec, int period, double eps, long n_max) {
  check_eps(eps);
  const Eigen::RowVectorXd law = spec.state_law(period);
  const double scale = spec.period_scale(period);
  if (n_max <= 0) {
    const auto bound = [&](long n) {
      double b = 0.0;
      for (int i = 0; i < spec.states(); ++i)
        b += law(i) * pascal_tail_bound(n, spec.shapes()[i], scale);
      return b;
    };
    n_max = 0;
    while (bound(n_max) > eps) n_max += std::max(1L, n_max / 4);
  }
  CountLaw out;
  out.pmf.resize(n_max + 1);
  for (long n = 0; n <= n_max; ++n) {
    double p = 0.0;
    for (int i = 0; i < spec.states(); ++i) p += law(i) * pascal_pmf(n, spec.shapes()[i], scale);
    out.pmf[n] = p;
  }
  out.tail_bound = std::max(0.0, 1.0 - out.total());
  return out;
}

std::vector<double> period_scales(const ModelSpec& spec, int k) {
  if (k < 1) throw DomainError("need at least one period");
  std::vector<double> out(k);
  for (int l = 1; l <= k; ++l) out[l - 1] = spec.period_scale(l);
  return out;
}

double joint_pmf(const ModelSpec& spec, std::span<const long> counts,
                 std::span<const double> scales) {
  std::vector<int> periods(counts.size());
  std::iota(periods.begin(), periods.end(), 1);
  return joint_pmf_at(spec, periods, counts, scales);
}

double joint_pmf_at(const ModelSpec& spec, std::span<const int> periods,
                    std::span<const long> counts, std::span<const double> scales) {
  if (counts.empty() || counts.size() != scales.size() || counts.size() != periods.size()) {
    std::ostringstream msg;
    msg << "joint_pmf dimension mismatch: " << periods.size() << " periods, " << counts.size()
        << " counts, " << scales.size() << " scales";
    throw DomainError(msg.str());
  }
  for (std::size_t j = 0; j < periods.size(); ++j) {
    if (periods[j] < 1 || (j > 0 && periods[j] <= periods[j - 1]))
      throw DomainError("joint_pmf periods must be 1-based and strictly increasing");
  }
  const int g = spec.states();
  const auto emission = [&](std::size_t j) {
    Eigen::RowVectorXd d(g);
    for (int i = 0; i < g; ++i) d(i) = pascal_pmf(counts[j], spec.shapes()[i], scales[j]);
    return d;
  };
  Eigen::RowVectorXd alpha = spec.state_law(periods[0]).cwiseProduct(emission(0));
  for (std::size_t j = 1; j < periods.size(); ++j) {
    const int gap = periods[j] - periods[j - 1];
    const Eigen::RowVectorXd moved =
        gap == 1 ? Eigen::RowVectorXd(alpha * spec.chain().matrix())
                 : Eigen::RowVectorXd(alpha * k_step(spec.chain(), gap));
    alpha = moved.cwiseProduct(emission(j));
  }
  return alpha.sum();
}

double covariance(const ModelSpec& spec, int lag) {
  if (lag < 0) throw DomainError("lag must be nonnegative");
  check_normalized_grid(spec);
  const Eigen::RowVectorXd delta = stationary_distribution(spec.chain()).weights();
  const Eigen::VectorXd m = shape_vector(spec);
  const double theta = spec.base_scale();
  if (lag == 0) return theta * theta * variance_term(delta, m, theta);
  // Identical rows: C_l and C_{l+lag} are independent, so the covariance vanishes.
  if (has_identical_rows(spec.chain())) return 0.0;
  const double mean_shape = delta.dot(m.transpose());
  const Eigen::MatrixXd step = k_step(spec.chain(), lag);
  const double cross = delta.cwiseProduct(m.transpose()) * step * m;
  return theta * theta * (cross - mean_shape * mean_shape);
}

double acf(const ModelSpec& spec, int lag) {
  if (lag < 0) throw DomainError("lag must be nonnegative");
  if (lag == 0) {
    check_normalized_grid(spec);
    return 1.0;
  }
  return spectral_acf(spec, lag).back();
}

double acf_direct(const ModelSpec& spec, int lag) {
  if (lag < 0) throw DomainError("lag must be nonnegative");
  if (lag == 0) {
    check_normalized_grid(spec);
    return 1.0;
  }
  return covariance(spec, lag) / covariance(spec, 0);
}

AcfSeries acf_series(const ModelSpec& spec, int max_lag) {
  if (max_lag < 1) throw DomainError("max lag must be at least 1");
  AcfSeries out;
  try {
    out.rho = spectral_acf(spec, max_lag);
    out.path = AcfPath::spectral;
  } catch (const SpectralUnsupportedError&) {
    out.rho.resize(max_lag);
    const double var = covariance(spec, 0);
    for (int k = 1; k <= max_lag; ++k) out.rho[k - 1] = covariance(spec, k) / var;
    out.path = AcfPath::direct;
  }
  return out;
}

double PascalMixtureMulti::mass() const {
  double total = 0.0;
  for (const auto& c : components) total += c.weight;
  return total;
}

double PascalMixtureMulti::pmf(std::span<const long> counts) const {
  if (static_cast<int>(counts.size()) != dims())
    throw DomainError("mixture pmf: count vector has the wrong dimension");
  double total = 0.0;
  for (const auto& c : components) {
    double term = c.weight;
    for (int j = 0; j < dims() && term != 0.0; ++j)
      term *= std::exp(log_pascal(counts[j], c.shapes[j], scales[j]));
    total += term;
  }
  return total;
}

std::vector<double> PascalMixtureMulti::pmf_grid(long n_max) const {
  if (n_max < 0) throw DomainError("pmf_grid needs n_max >= 0");
  const int k = dims();
  const auto side = static_cast<std::size_t>(n_max + 1);
  std::size_t cells = 1;
  for (int j = 0; j < k; ++j) cells *= side;
  if (components.empty()) return std::vector<double>(cells, 0.0);

  std::vector<int> lo(k, std::numeric_limits<int>::max()), hi(k, 0);
  for (const auto& c : components)
    for (int j = 0; j < k; ++j) {
      lo[j] = std::min(lo[j], c.shapes[j]);
      hi[j] = std::max(hi[j], c.shapes[j]);
    }
  std::vector<std::size_t> dims(k);
  std::size_t box = 1;
  for (int j = 0; j < k; ++j) box *= (dims[j] = static_cast<std::size_t>(hi[j] - lo[j] + 1));

  // Weights on the dense shape box, then contract one axis at a time with
  // p(n; m, theta_j): the shape axis of extent dims[j] becomes a count axis.
  std::vector<double> t(box, 0.0);
  for (const auto& c : components) {
    std::size_t cell = 0;
    for (int j = 0; j < k; ++j) cell = cell * dims[j] + (c.shapes[j] - lo[j]);
    t[cell] += c.weight;
  }
  for (int j = k - 1; j >= 0; --j) {
    std::size_t outer = 1, inner = 1;
    for (int d = 0; d < j; ++d) outer *= dims[d];
    for (int d = j + 1; d < k; ++d) inner *= dims[d];
    std::vector<double> table(dims[j] * side);
    for (std::size_t m = 0; m < dims[j]; ++m)
      for (std::size_t n = 0; n < side; ++n)
        table[m * side + n] =
            std::exp(log_pascal(static_cast<long>(n), lo[j] + static_cast<int>(m), scales[j]));
    std::vector<double> next(outer * side * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t m = 0; m < dims[j]; ++m) {
        const double* src = &t[(o * dims[j] + m) * inner];
        for (std::size_t n = 0; n < side; ++n) {
          const double f = table[m * side + n];
          if (f == 0.0) continue;
          double* dst = &next[(o * side + n) * inner];
          for (std::size_t i = 0; i < inner; ++i) dst[i] += f * src[i];
        }
      }
    t = std::move(next);
    dims[j] = side;
  }
  return t;
}

double PascalMixtureUni::mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double PascalMixtureUni::pmf(long n) const {
  if (n < 0) return 0.0;
  double total = 0.0;
  for (std::size_t m = 0; m < weights.size(); ++m)
    if (weights[m] != 0.0) total += weights[m] * std::exp(log_pascal(n, static_cast<int>(m), scale));
  return total;
}

PascalMixtureMulti hmm_mixture(const ModelSpec& spec, std::span<const double> scales) {
  const int k = static_cast<int>(scales.size());
  const int g = spec.states();
  if (k < 1) throw DomainError("mixture needs at least one period");
  long paths = 1;
  for (int j = 0; j < k; ++j) {
    paths *= g;
    if (paths > kMaxHiddenPaths)
      throw DomainError("hidden-path enumeration exceeds 1e6 paths; use the forward recursion");
  }
  const Eigen::MatrixXd& gamma = spec.chain().matrix();
  const Eigen::RowVectorXd& pi1 = spec.initial().weights();

  std::map<std::vector<int>, double> merged;
  std::vector<int> path(k, 0);
  std::vector<int> shapes(k);
  for (long p = 0; p < paths; ++p) {
    double beta = pi1(path[0]);
    for (int j = 1; j < k && beta != 0.0; ++j) beta *= gamma(path[j - 1], path[j]);
    if (beta != 0.0) {
      for (int j = 0; j < k; ++j) shapes[j] = spec.shapes()[path[j]];
      merged[shapes] += beta;
    }
    for (int j = k - 1; j >= 0; --j) {
      if (++path[j] < g) break;
      path[j] = 0;
    }
  }
  PascalMixtureMulti out;
  out.scales.assign(scales.begin(), scales.end());
  out.components.reserve(merged.size());
  for (auto& [s, w] : merged) out.components.push_back({s, w});
  return out;
}

PascalMixtureMulti unify_scales(const PascalMixtureMulti& mix, double theta, double eps) {
  const int k = mix.dims();
  if (k < 1) throw DomainError("mixture has no dimensions");
  check_eps(eps);
  const double min_scale = *std::min_element(mix.scales.begin(), mix.scales.end());
  if (!(theta > 0.0)) throw DomainError("common scale must be positive");
  if (theta > min_scale * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "common scale " << theta << " exceeds the smallest component scale " << min_scale;
    throw DomainError(msg.str());
  }

  kernels::UnifyProblem problem;
  problem.offsets.resize(k);
  problem.extents.resize(k);
  problem.ladders.resize(k);
  problem.components = mix.components;
  std::size_t cells = 1;
  for (int j = 0; j < k; ++j) {
    const double r = std::min(1.0, theta / mix.scales[j]);
    int lo = std::numeric_limits<int>::max();
    int hi = 0;
    for (const auto& c : mix.components) {
      lo = std::min(lo, c.shapes[j]);
      hi = std::max(hi, c.shapes[j]);
    }
    // Smallest cut whose ladder tail is <= eps / k for every shape present.
    int cut = hi;
    const auto worst_tail = [&](int trials) {
      double worst = 0.0;
      for (int n = lo; n <= hi; ++n) worst = std::max(worst, ladder_tail(trials, n, r));
      return worst;
    };
    while (worst_tail(cut) > eps / k) {
      cut += std::max(1, (cut - lo) / 8);
      if (static_cast<std::size_t>(cut - lo + 1) > kMaxUnifyCells)
        throw AccuracyError("scale unification needs too many shapes; use Monte Carlo");
    }
    const int extent = cut - lo + 1;
    cells *= static_cast<std::size_t>(extent);
    if (cells > kMaxUnifyCells) {
      throw AccuracyError(
          "scale unification box exceeds the cell budget; use Monte Carlo or a larger eps");
    }
    problem.offsets[j] = lo;
    problem.extents[j] = extent;
    auto& ladder = problem.ladders[j];
    ladder.assign(static_cast<std::size_t>(hi - lo + 1) * extent, 0.0);
    for (int n = lo; n <= hi; ++n)
      for (int m = n; m <= cut; ++m)
        ladder[static_cast<std::size_t>(n - lo) * extent + (m - lo)] = ladder_weight(m, n, r);
  }

  const std::vector<double> weights = kernels::unify_weights(problem);

  PascalMixtureMulti out;
  out.scales.assign(k, theta);
  std::vector<int> idx(k, 0);
  double enumerated = 0.0;
  for (std::size_t cell = 0; cell < weights.size(); ++cell) {
    if (weights[cell] != 0.0) {
      MultiComponent c;
      c.shapes.resize(k);
      for (int j = 0; j < k; ++j) c.shapes[j] = problem.offsets[j] + idx[j];
      c.weight = weights[cell];
      enumerated += c.weight;
      out.components.push_back(std::move(c));
    }
    for (int j = k - 1; j >= 0; --j) {
      if (++idx[j] < problem.extents[j]) break;
      idx[j] = 0;
    }
  }
  out.deficit = mix.deficit + std::max(0.0, mix.mass() - enumerated);
  return out;
}

PascalMixtureUni aggregate(const PascalMixtureMulti& mix) {
  if (mix.dims() < 1) throw DomainError("mixture has no dimensions");
  const double scale = mix.scales.front();
  for (double s : mix.scales) {
    if (std::abs(s - scale) > 1e-12 * std::max(scale, 1e-300))
      throw DomainError("aggregate needs a common scale; call unify_scales first");
  }
  PascalMixtureUni out;
  out.scale = scale;
  out.deficit = mix.deficit;
  for (const auto& c : mix.components) {
    const int m = std::accumulate(c.shapes.begin(), c.shapes.end(), 0);
    if (static_cast<int>(out.weights.size()) <= m) out.weights.resize(m + 1, 0.0);
    out.weights[m] += c.weight;
  }
  return out;
}

PascalMixtureUni total_shape_mixture(const ModelSpec& spec, std::span<const double> scales,
                                     double eps) {
  check_eps(eps);
  const int k = static_cast<int>(scales.size());
  const int g = spec.states();
  if (k < 1) throw DomainError("need at least one period");
  for (double s : scales)
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("scales must be finite and nonnegative");

  double theta = std::numeric_limits<double>::infinity();
  for (double s : scales)
    if (s > 0.0) theta = std::min(theta, s);
  PascalMixtureUni out;
  if (!std::isfinite(theta)) {
    out.weights = {1.0};
    return out;
  }
  out.scale = theta;

  std::vector<double> ratio(k);
  double mean_shape = 0.0;
  const int max_shape = *std::max_element(spec.shapes().begin(), spec.shapes().end());
  for (int j = 0; j < k; ++j) {
    ratio[j] = scales[j] > 0.0 ? std::min(1.0, theta / scales[j]) : 0.0;
    if (scales[j] > 0.0) mean_shape += max_shape / ratio[j];
  }

  const Eigen::MatrixXd& gamma = spec.chain().matrix();
  const Eigen::RowVectorXd& pi1 = spec.initial().weights();
  int cap = 64;
  while (cap < 4.0 * mean_shape && cap < kMaxShapeSum) cap *= 2;

  for (;;) {
    const auto width = static_cast<std::size_t>(cap + 1);
    // ladders[j][i] = re-expressed shape law for state i in period j, trimmed.
    const auto ladder = [&](int j, int state) {
      std::vector<double> f;
      const int n = spec.shapes()[state];
      double peak = 0.0;
      for (int m = n; m <= cap; ++m) {
        const double w = ladder_weight(m, n, ratio[j]);
        peak = std::max(peak, w);
        if (w < 1e-30 * peak && m > n) break;
        if (f.size() <= static_cast<std::size_t>(m)) f.resize(m + 1, 0.0);
        f[m] = w;
      }
      return f;
    };

    std::vector<std::vector<double>> alpha(g, std::vector<double>(width, 0.0));
    std::vector<std::vector<double>> moved(g, std::vector<double>(width, 0.0));
    for (int j = 0; j < k; ++j) {
      if (j == 0) {
        for (int i = 0; i < g; ++i) {
          std::fill(moved[i].begin(), moved[i].end(), 0.0);
          moved[i][0] = pi1(i);
        }
      } else {
        for (int b = 0; b < g; ++b) {
          auto& dst = moved[b];
          std::fill(dst.begin(), dst.end(), 0.0);
          for (int a = 0; a < g; ++a) {
            const double p = gamma(a, b);
            if (p == 0.0) continue;
            for (std::size_t s = 0; s < width; ++s) dst[s] += alpha[a][s] * p;
          }
        }
      }
      if (scales[j] == 0.0) {
        std::swap(alpha, moved);
        continue;
      }
      for (int i = 0; i < g; ++i) {
        const std::vector<double> f = ladder(j, i);
        auto& dst = alpha[i];
        std::fill(dst.begin(), dst.end(), 0.0);
        for (std::size_t s = 0; s < width; ++s) {
          const double base = moved[i][s];
          if (base == 0.0) continue;
          const std::size_t top = std::min(f.size(), width - s);
          for (std::size_t m = 0; m < top; ++m) dst[s + m] += base * f[m];
        }
      }
    }

    out.weights.assign(width, 0.0);
    for (int i = 0; i < g; ++i)
      for (std::size_t s = 0; s < width; ++s) out.weights[s] += alpha[i][s];
    out.deficit = std::max(0.0, 1.0 - out.mass());
    if (out.deficit <= eps / 2) break;
    if (cap >= kMaxShapeSum) {
      std::ostringstream msg;
      msg << "common-scale mixture still misses " << out.deficit << " of its mass at "
          << kMaxShapeSum << " shapes; use Monte Carlo";
      throw AccuracyError(msg.str());
    }
    cap *= 2;
  }
  while (out.weights.size() > 1 && out.weights.back() == 0.0) out.weights.pop_back();
  return out;
}

CountLaw count_law(const PascalMixtureUni& mix, double eps, long n_max) {
  check_eps(eps);
  const double theta = mix.scale;
  if (n_max <= 0) {
    const auto bound = [&](long n) {
      double b = 0.0;
      for (std::size_t m = 0; m < mix.weights.size(); ++m)
        if (mix.weights[m] != 0.0) b += mix.weights[m] * pascal_tail_bound(n, static_cast<int>(m), theta);
      return b;
    };
    n_max = 0;
    while (bound(n_max) > eps / 2) n_max += std::max(1L, n_max / 4);
  }

  CountLaw out;
  out.pmf.assign(n_max + 1, 0.0);
  if (theta == 0.0) {
    out.pmf[0] = mix.mass();
  } else {
    // Walk each component's pmf with the ratio recursion in log space.
    const double log_q = std::log(theta) - std::log1p(theta);
    for (std::size_t m = 0; m < mix.weights.size(); ++m) {
      const double w = mix.weights[m];
      if (w == 0.0) continue;
      if (m == 0) {
        out.pmf[0] += w;
        continue;
      }
      double lp = -static_cast<double>(m) * std::log1p(theta);
      for (long n = 0; n <= n_max; ++n) {
        out.pmf[n] += w * std::exp(lp);
        lp += std::log1p((static_cast<double>(m) - 1.0) / (static_cast<double>(n) + 1.0)) + log_q;
      }
    }
  }
  out.tail_bound = std::max(0.0, mix.mass() + mix.deficit - out.total());
  return out;
}

CountLaw total_count_law(const ModelSpec& spec, const DelayModel& delay, double tau, Which which,
                         double eps, long n_max) {
  if (!(eps > 0.0 && eps < 0.1)) throw DomainError("total_count_law needs eps in (0, 0.1)");
  const ThinnedScales scales = thinned_scales(spec, delay, tau);
  const PascalMixtureUni mix = total_shape_mixture(spec, scales.of(which), eps);
  return count_law(mix, eps, n_max);
}

}  // namespace coxclaims
