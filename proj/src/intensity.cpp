#include "coxclaims/intensity.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "coxclaims/errors.hpp"

namespace coxclaims {

ModelSpec::ModelSpec(TransitionMatrix chain, StateDistribution initial, std::vector<int> shapes,
                     double base_scale, std::vector<double> grid, std::vector<double> exposures)
    : chain_(std::move(chain)),
      initial_(std::move(initial)),
      shapes_(std::move(shapes)),
      theta_(base_scale),
      grid_(std::move(grid)),
      exposures_(std::move(exposures)) {
  const int g = chain_.states();
  if (initial_.states() != g) {
    std::ostringstream msg;
    msg << "pi1 has " << initial_.states() << " states but gamma has " << g;
    throw ValidationError(msg.str());
  }
  if (static_cast<int>(shapes_.size()) != g) {
    std::ostringstream msg;
    msg << "shapes has " << shapes_.size() << " entries but gamma has " << g << " states";
    throw ValidationError(msg.str());
  }
  for (std::size_t i = 0; i < shapes_.size(); ++i) {
    if (shapes_[i] < 1) {
      std::ostringstream msg;
      msg << "shapes entry " << i + 1 << " is " << shapes_[i] << ", must be a positive integer";
      throw ValidationError(msg.str());
    }
  }
  if (!(theta_ > 0.0) || !std::isfinite(theta_))
    throw ValidationError("theta must be a positive finite number");
  if (grid_.size() < 2) throw ValidationError("grid needs d_0 = 0 and at least one more point");
  if (grid_.front() != 0.0) throw ValidationError("grid must start at d_0 = 0");
  for (std::size_t l = 1; l < grid_.size(); ++l) {
    if (!(grid_[l] > grid_[l - 1]) || !std::isfinite(grid_[l])) {
      std::ostringstream msg;
      msg << "grid must be strictly increasing; d_" << l << " = " << grid_[l];
      throw ValidationError(msg.str());
    }
  }
  if (exposures_.size() != grid_.size() - 1) {
    std::ostringstream msg;
    msg << "exposures has " << exposures_.size() << " entries but grid defines "
        << grid_.size() - 1 << " periods";
    throw ValidationError(msg.str());
  }
  for (std::size_t l = 0; l < exposures_.size(); ++l) {
    if (!(exposures_[l] > 0.0) || !std::isfinite(exposures_[l])) {
      std::ostringstream msg;
      msg << "exposures entry " << l + 1 << " is " << exposures_[l] << ", must be positive";
      throw ValidationError(msg.str());
    }
  }
}

double ModelSpec::boundary(int l) const {
  if (l < 0) throw DomainError("period boundary index must be nonnegative");
  const int k = periods();
  if (l <= k) return grid_[l];
  return grid_[k] + (l - k) * (grid_[k] - grid_[k - 1]);
}

double ModelSpec::period_length(int l) const {
  if (l < 1) throw DomainError("periods are 1-based");
  return boundary(l) - boundary(l - 1);
}

double ModelSpec::exposure(int l) const {
  if (l < 1) throw DomainError("periods are 1-based");
  return l <= periods() ? exposures_[l - 1] : exposures_.back();
}

double ModelSpec::erlang_scale(int l) const { return exposure(l) * theta_; }

double ModelSpec::period_scale(int l) const { return period_length(l) * exposure(l) * theta_; }

Eigen::RowVectorXd ModelSpec::state_law(int l) const {
  if (l < 1) throw DomainError("periods are 1-based");
  return initial_.weights() * k_step(chain_, l - 1);
}

std::optional<int> ModelSpec::grid_index(double t) const {
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    if (std::abs(t - grid_[k]) <= 1e-9 * grid_[k] || t == grid_[k]) return static_cast<int>(k);
  }
  return std::nullopt;
}

ModelSpec ModelSpec::with_base_scale(double theta) const {
  return ModelSpec(chain_, initial_, shapes_, theta, grid_, exposures_);
}

double erlang_density(double lambda, int shape, double scale) {
  if (lambda < 0.0) return 0.0;
  if (lambda == 0.0) return shape == 1 ? 1.0 / scale : 0.0;
  const double log_f = (shape - 1) * std::log(lambda) - lambda / scale - shape * std::log(scale) -
                       std::lgamma(static_cast<double>(shape));
  return std::exp(log_f);
}

double state_dependent_density(const ModelSpec& spec, int period, int state, double lambda) {
  if (state < 0 || state >= spec.states()) {
    std::ostringstream msg;
    msg << "state " << state << " out of range [0, " << spec.states() << ")";
    throw DomainError(msg.str());
  }
  if (lambda < 0.0) throw DomainError("intensity value must be nonnegative");
  return erlang_density(lambda, spec.shapes()[state], spec.erlang_scale(period));
}

double lambda_marginal_density(const ModelSpec& spec, int period, double lambda) {
  if (lambda < 0.0) throw DomainError("intensity value must be nonnegative");
  const Eigen::RowVectorXd law = spec.state_law(period);
  const double scale = spec.erlang_scale(period);
  double f = 0.0;
  for (int i = 0; i < spec.states(); ++i) f += law(i) * erlang_density(lambda, spec.shapes()[i], scale);
  return f;
}

double lambda_mean(const ModelSpec& spec, int period) {
  const Eigen::RowVectorXd law = spec.state_law(period);
  double mean = 0.0;
  for (int i = 0; i < spec.states(); ++i) mean += law(i) * spec.shapes()[i];
  return mean * spec.erlang_scale(period);
}

IntensityPath sample_path(const ModelSpec& spec, int horizon, Stream& rng) {
  if (horizon < 1) throw DomainError("horizon must be at least 1");
  IntensityPath path;
  path.horizon = horizon;
  path.states.reserve(horizon);
  path.intensities.reserve(horizon);

  const Eigen::MatrixXd& gamma = spec.chain().matrix();
  const Eigen::RowVectorXd& pi1 = spec.initial().weights();
  std::vector<double> row(spec.states());
  std::exponential_distribution<double> unit_exp(1.0);

  int state = 0;
  for (int l = 1; l <= horizon; ++l) {
    if (l == 1) {
      for (int j = 0; j < spec.states(); ++j) row[j] = pi1(j);
    } else {
      for (int j = 0; j < spec.states(); ++j) row[j] = gamma(state, j);
    }
    state = rng.categorical(row);
    double lambda = 0.0;
    for (int s = 0; s < spec.shapes()[state]; ++s) lambda += unit_exp(rng);
    path.states.push_back(state);
    path.intensities.push_back(lambda * spec.erlang_scale(l));
  }
  return path;
}

}  // namespace coxclaims
