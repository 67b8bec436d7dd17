#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "coxclaims/rng.hpp"

namespace coxclaims {

// Reporting-delay law P_U on [0, inf).
class DelayModel {
 public:
  struct Degenerate {
    double at;
  };
  struct Exponential {
    double rate;
  };
  struct Uniform {
    double upper;  // support [0, upper]
  };
  struct Weibull {
    double shape;
    double scale;
  };
  // CDF linear between knots; 0 below the first knot (an atom of size cdf[0]
  // sits there when cdf[0] > 0) and 1 from the last knot on.
  struct Empirical {
    std::vector<double> knots;
    std::vector<double> cdf;
  };
  using Family = std::variant<Degenerate, Exponential, Uniform, Weibull, Empirical>;

  static DelayModel degenerate(double at);
  static DelayModel exponential(double rate);
  static DelayModel uniform(double upper);
  static DelayModel weibull(double shape, double scale);
  static DelayModel empirical(std::vector<double> knots, std::vector<double> cdf);

  const Family& family() const { return family_; }
  std::string_view family_name() const;

  // P_U(u); 0 for u < 0.
  double cdf(double u) const;

  // p_U(u). The degenerate family has no density and throws DomainError.
  double density(double u) const;
  bool has_density() const;

  // int_a^b P_U(tau - t) dt for 0 <= a <= b <= tau. Closed form for the
  // degenerate, exponential, uniform and empirical families, adaptive
  // Gauss-Kronrod quadrature for Weibull.
  double integrated_cdf(double a, double b, double tau) const;

  // Same integral, always by quadrature (split at the family's kinks).
  double integrated_cdf_quadrature(double a, double b, double tau) const;

  double sample(Stream& rng) const;

 private:
  explicit DelayModel(Family family) : family_(std::move(family)) {}

  // G(x) = int_0^x P_U(s) ds where a closed form exists.
  double cdf_integral(double x) const;
  // Points where P_U is not smooth.
  std::vector<double> kinks() const;

  Family family_;
};

}  // namespace coxclaims
