#include "coxclaims/delay.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "coxclaims/errors.hpp"

namespace coxclaims {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "delay parameter '" << what << "' must be positive and finite, got " << v;
    throw ValidationError(msg.str());
  }
}

// Index of the segment [knots[i], knots[i+1]) containing u, for knots[0] <= u < knots.back().
std::size_t segment(const std::vector<double>& knots, double u) {
  auto it = std::upper_bound(knots.begin(), knots.end(), u);
  return static_cast<std::size_t>(it - knots.begin()) - 1;
}

double gk_integrate(const auto& f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, 1e-13,
                                                                       &error);
}

}  // namespace

DelayModel DelayModel::degenerate(double at) {
  if (!(at >= 0.0) || !std::isfinite(at))
    throw ValidationError("degenerate delay point must be finite and nonnegative");
  return DelayModel(Degenerate{at});
}

DelayModel DelayModel::exponential(double rate) {
  require_positive(rate, "rate");
  return DelayModel(Exponential{rate});
}

DelayModel DelayModel::uniform(double upper) {
  require_positive(upper, "b");
  return DelayModel(Uniform{upper});
}

DelayModel DelayModel::weibull(double shape, double scale) {
  require_positive(shape, "shape");
  require_positive(scale, "scale");
  return DelayModel(Weibull{shape, scale});
}

DelayModel DelayModel::empirical(std::vector<double> knots, std::vector<double> cdf) {
  if (knots.empty() || knots.size() != cdf.size())
    throw ValidationError("empirical delay needs equally many knots and cdf values");
  if (!(knots.front() >= 0.0)) throw ValidationError("empirical delay knots must be nonnegative");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || !(cdf[i] >= 0.0 && cdf[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "empirical delay knot " << i + 1 << " is invalid";
      throw ValidationError(msg.str());
    }
    if (i > 0 && !(knots[i] > knots[i - 1]))
      throw ValidationError("empirical delay knots must be strictly increasing");
    if (i > 0 && cdf[i] < cdf[i - 1])
      throw ValidationError("empirical delay cdf values must be nondecreasing");
  }
  if (std::abs(cdf.back() - 1.0) > 1e-12)
    throw ValidationError("empirical delay cdf must reach 1 at the last knot");
  cdf.back() = 1.0;
  return DelayModel(Empirical{std::move(knots), std::move(cdf)});
}

std::string_view DelayModel::family_name() const {
  return std::visit(overloaded{[](const Degenerate&) { return std::string_view("degenerate"); },
                               [](const Exponential&) { return std::string_view("exponential"); },
                               [](const Uniform&) { return std::string_view("uniform"); },
                               [](const Weibull&) { return std::string_view("weibull"); },
                               [](const Empirical&) { return std::string_view("empirical"); }},
                    family_);
}

double DelayModel::cdf(double u) const {
  if (u < 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const Degenerate& d) { return u >= d.at ? 1.0 : 0.0; },
          [&](const Exponential& d) { return -std::expm1(-d.rate * u); },
          [&](const Uniform& d) { return std::min(u / d.upper, 1.0); },
          [&](const Weibull& d) { return -std::expm1(-std::pow(u / d.scale, d.shape)); },
          [&](const Empirical& d) {
            if (u < d.knots.front()) return 0.0;
            if (u >= d.knots.back()) return 1.0;
            const std::size_t i = segment(d.knots, u);
            const double w = (u - d.knots[i]) / (d.knots[i + 1] - d.knots[i]);
            return d.cdf[i] + w * (d.cdf[i + 1] - d.cdf[i]);
          }},
      family_);
}

bool DelayModel::has_density() const { return !std::holds_alternative<Degenerate>(family_); }

double DelayModel::density(double u) const {
  if (u < 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const Degenerate&) -> double {
            throw DomainError("degenerate delay has no density");
          },
          [&](const Exponential& d) { return d.rate * std::exp(-d.rate * u); },
          [&](const Uniform& d) { return u <= d.upper ? 1.0 / d.upper : 0.0; },
          [&](const Weibull& d) {
            if (u == 0.0) {
              if (d.shape < 1.0) return std::numeric_limits<double>::infinity();
              return d.shape == 1.0 ? 1.0 / d.scale : 0.0;
            }
            const double z = u / d.scale;
            return d.shape / d.scale * std::pow(z, d.shape - 1.0) * std::exp(-std::pow(z, d.shape));
          },
          [&](const Empirical& d) {
            if (u < d.knots.front() || u >= d.knots.back()) return 0.0;
            const std::size_t i = segment(d.knots, u);
            return (d.cdf[i + 1] - d.cdf[i]) / (d.knots[i + 1] - d.knots[i]);
          }},
      family_);
}

double DelayModel::cdf_integral(double x) const {
  if (x <= 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const Degenerate& d) { return std::max(0.0, x - d.at); },
          [&](const Exponential& d) { return x + std::expm1(-d.rate * x) / d.rate; },
          [&](const Uniform& d) {
            return x <= d.upper ? x * x / (2.0 * d.upper) : x - d.upper / 2.0;
          },
          [&](const Weibull&) -> double {
            throw DomainError("weibull delay has no closed-form cdf integral");
          },
          [&](const Empirical& d) {
            // Exact trapezoids: the CDF is linear between knots.
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < d.knots.size(); ++i) {
              const double lo = d.knots[i];
              if (x <= lo) return acc;
              const double hi = std::min(x, d.knots[i + 1]);
              const double slope = (d.cdf[i + 1] - d.cdf[i]) / (d.knots[i + 1] - lo);
              const double at_hi = d.cdf[i] + slope * (hi - lo);
              acc += 0.5 * (d.cdf[i] + at_hi) * (hi - lo);
              if (x <= d.knots[i + 1]) return acc;
            }
            return acc + std::max(0.0, x - d.knots.back());
          }},
      family_);
}

std::vector<double> DelayModel::kinks() const {
  return std::visit(overloaded{[](const Degenerate& d) { return std::vector<double>{d.at}; },
                               [](const Exponential&) { return std::vector<double>{}; },
                               [](const Uniform& d) { return std::vector<double>{d.upper}; },
                               [](const Weibull&) { return std::vector<double>{}; },
                               [](const Empirical& d) { return d.knots; }},
                    family_);
}

double DelayModel::integrated_cdf(double a, double b, double tau) const {
  if (!(a >= 0.0) || a > b || b > tau) {
    std::ostringstream msg;
    msg << "integrated_cdf requires 0 <= a <= b <= tau, got a=" << a << " b=" << b
        << " tau=" << tau;
    throw DomainError(msg.str());
  }
  if (a == b) return 0.0;
  if (std::holds_alternative<Weibull>(family_)) return integrated_cdf_quadrature(a, b, tau);
  // int_a^b P(tau - t) dt = G(tau - a) - G(tau - b)
  const double v = cdf_integral(tau - a) - cdf_integral(tau - b);
  return std::clamp(v, 0.0, b - a);
}

double DelayModel::integrated_cdf_quadrature(double a, double b, double tau) const {
  if (!(a >= 0.0) || a > b || b > tau) {
    std::ostringstream msg;
    msg << "integrated_cdf requires 0 <= a <= b <= tau, got a=" << a << " b=" << b
        << " tau=" << tau;
    throw DomainError(msg.str());
  }
  // Integrate P over s = tau - t in [tau - b, tau - a], split at kinks.
  const double lo = tau - b;
  const double hi = tau - a;
  std::vector<double> cuts{lo};
  for (double k : kinks())
    if (k > lo && k < hi) cuts.push_back(k);
  cuts.push_back(hi);
  const auto f = [this](double s) { return cdf(s); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += gk_integrate(f, cuts[i], cuts[i + 1]);
  return std::clamp(total, 0.0, b - a);
}

double DelayModel::sample(Stream& rng) const {
  return std::visit(
      overloaded{
          [&](const Degenerate& d) { return d.at; },
          [&](const Exponential& d) { return std::exponential_distribution<double>(d.rate)(rng); },
          [&](const Uniform& d) { return d.upper * rng.uniform(); },
          [&](const Weibull& d) {
            return std::weibull_distribution<double>(d.shape, d.scale)(rng);
          },
          [&](const Empirical& d) {
            // Inverse CDF; flat segments are skipped by upper_bound.
            const double v = rng.uniform();
            if (v < d.cdf.front()) return d.knots.front();
            auto it = std::upper_bound(d.cdf.begin(), d.cdf.end(), v);
            if (it == d.cdf.end()) return d.knots.back();
            const auto i = static_cast<std::size_t>(it - d.cdf.begin());
            const double w = (v - d.cdf[i - 1]) / (d.cdf[i] - d.cdf[i - 1]);
            return d.knots[i - 1] + w * (d.knots[i] - d.knots[i - 1]);
          }},
      family_);
}

}  // namespace coxclaims
