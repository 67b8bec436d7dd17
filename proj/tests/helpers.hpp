#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "coxclaims/delay.hpp"
#include "coxclaims/errors.hpp"
#include "coxclaims/intensity.hpp"
#include "coxclaims/markov.hpp"

namespace testing_support {

using namespace coxclaims;

// g = 2, Gamma = [[0.9, 0.1], [0.2, 0.8]], m = (1, 3), theta = 0.5, unit grid.
inline ModelSpec reference_spec(int periods = 3, std::vector<double> pi1 = {2.0 / 3.0, 1.0 / 3.0}) {
  std::vector<double> grid(periods + 1);
  for (int l = 0; l <= periods; ++l) grid[l] = l;
  return ModelSpec(TransitionMatrix::from_rows({{0.9, 0.1}, {0.2, 0.8}}),
                   StateDistribution::from_vector(pi1), {1, 3}, 0.5, grid,
                   std::vector<double>(periods, 1.0));
}

inline std::vector<double> random_simplex(std::mt19937_64& gen, int g) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(g);
  double s = 0.0;
  for (double& x : w) s += (x = e(gen));
  for (double& x : w) x /= s;
  // Force an exact unit sum on the last entry.
  double head = 0.0;
  for (int i = 0; i + 1 < g; ++i) head += w[i];
  w.back() = 1.0 - head;
  return w;
}

inline TransitionMatrix random_chain(std::mt19937_64& gen, int g) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < g; ++i) rows.push_back(random_simplex(gen, g));
  return TransitionMatrix::from_rows(rows);
}

struct RandomSpecOptions {
  int states = 2;
  int periods = 3;
  bool unit_exposure = false;  // (d_l - d_{l-1}) omega_l = 1
  int max_shape = 4;
};

inline ModelSpec random_spec(std::mt19937_64& gen, const RandomSpecOptions& o) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> shape(1, o.max_shape);
  std::vector<int> shapes(o.states);
  for (int& m : shapes) m = shape(gen);
  std::vector<double> grid{0.0};
  std::vector<double> exposures;
  for (int l = 0; l < o.periods; ++l) {
    const double len = 0.5 + u(gen);
    grid.push_back(grid.back() + len);
    exposures.push_back(o.unit_exposure ? 1.0 / len : 0.5 + 1.5 * u(gen));
  }
  return ModelSpec(random_chain(gen, o.states),
                   StateDistribution::from_vector(random_simplex(gen, o.states)), shapes,
                   0.2 + 1.3 * u(gen), grid, exposures);
}

// A random chain whose spectrum the spectral path accepts.
inline TransitionMatrix random_spectral_chain(std::mt19937_64& gen, int g) {
  for (;;) {
    TransitionMatrix t = random_chain(gen, g);
    try {
      spectral_decompose(t);
      stationary_distribution(t);
      return t;
    } catch (const DomainError&) {
    }
  }
}

inline DelayModel random_delay(std::mt19937_64& gen, int family) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (family % 5) {
    case 0:
      return DelayModel::exponential(0.3 + 2.0 * u(gen));
    case 1:
      return DelayModel::uniform(0.2 + 3.0 * u(gen));
    case 2:
      return DelayModel::weibull(0.5 + 2.5 * u(gen), 0.3 + 2.0 * u(gen));
    case 3: {
      std::vector<double> knots{0.0};
      std::vector<double> cdf{0.0};
      for (int i = 0; i < 4; ++i) {
        knots.push_back(knots.back() + 0.1 + u(gen));
        cdf.push_back(i == 3 ? 1.0 : std::min(1.0, cdf.back() + 0.05 + 0.3 * u(gen)));
      }
      return DelayModel::empirical(knots, cdf);
    }
    default:
      return DelayModel::degenerate(2.0 * u(gen));
  }
}

}  // namespace testing_support
