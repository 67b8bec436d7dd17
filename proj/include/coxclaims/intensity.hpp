#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "coxclaims/markov.hpp"
#include "coxclaims/rng.hpp"

namespace coxclaims {

// Parameters of the Erlang-HMM intensity. Periods are 1-based: period l covers
// [d_{l-1}, d_l) and, given hidden state i, carries intensity
// Lambda_l ~ Erlang(shape m_i, scale omega_l * theta).
//
// Hidden states are 0-based indices into `shapes`.
//
// The grid is finite. Periods past the last grid point repeat the last period
// length and the last exposure; callers that care can check
// `extrapolated(l)`.
class ModelSpec {
 public:
  ModelSpec(TransitionMatrix chain, StateDistribution initial, std::vector<int> shapes,
            double base_scale, std::vector<double> grid, std::vector<double> exposures);

  const TransitionMatrix& chain() const { return chain_; }
  const StateDistribution& initial() const { return initial_; }
  const std::vector<int>& shapes() const { return shapes_; }
  double base_scale() const { return theta_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& exposures() const { return exposures_; }

  int states() const { return chain_.states(); }
  // Number of periods described by the grid.
  int periods() const { return static_cast<int>(exposures_.size()); }
  bool extrapolated(int l) const { return l > periods(); }

  // d_l for l >= 0.
  double boundary(int l) const;
  double period_length(int l) const;
  double exposure(int l) const;
  // omega_l * theta, the Erlang scale of Lambda_l.
  double erlang_scale(int l) const;
  // (d_l - d_{l-1}) * omega_l * theta, the Pascal scale of N_l.
  double period_scale(int l) const;

  // pi_l = pi_1 Gamma^{l-1}.
  Eigen::RowVectorXd state_law(int l) const;

  // k such that d_k == t within 1e-9 * d_k, for k in [0, periods()].
  std::optional<int> grid_index(double t) const;

  // The model with a different base scale; everything else unchanged.
  ModelSpec with_base_scale(double theta) const;

 private:
  TransitionMatrix chain_;
  StateDistribution initial_;
  std::vector<int> shapes_;
  double theta_;
  std::vector<double> grid_;
  std::vector<double> exposures_;
};

struct IntensityPath {
  std::vector<int> states;
  std::vector<double> intensities;
  int horizon = 0;
};

// Erlang density f(lambda; m, scale).
double erlang_density(double lambda, int shape, double scale);

double state_dependent_density(const ModelSpec& spec, int period, int state, double lambda);

// sum_i pi_{l,i} f(lambda; m_i, omega_l theta).
double lambda_marginal_density(const ModelSpec& spec, int period, double lambda);

// E[Lambda_l] = sum_i pi_{l,i} m_i omega_l theta.
double lambda_mean(const ModelSpec& spec, int period);

// C_1 ~ pi_1, C_l | C_{l-1} ~ Gamma row, Lambda_l | C_l ~ Erlang as a sum of
// m_{C_l} exponential draws.
IntensityPath sample_path(const ModelSpec& spec, int horizon, Stream& rng);

}  // namespace coxclaims
