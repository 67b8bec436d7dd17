#pragma once

#include <vector>

#include <Eigen/Dense>

namespace coxclaims {

// Row-stochastic g x g matrix. Construction rejects rows that do not sum to
// one within 1e-12 or that hold entries outside [0, 1]; nothing is
// renormalized.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(Eigen::MatrixXd entries);
  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows);

  int states() const { return static_cast<int>(p_.rows()); }
  const Eigen::MatrixXd& matrix() const { return p_; }
  double operator()(int i, int j) const { return p_(i, j); }

 private:
  Eigen::MatrixXd p_;
};

// Probability row vector over the g hidden states.
class StateDistribution {
 public:
  explicit StateDistribution(Eigen::RowVectorXd weights);
  static StateDistribution from_vector(const std::vector<double>& weights);

  int states() const { return static_cast<int>(w_.size()); }
  const Eigen::RowVectorXd& weights() const { return w_; }
  double operator[](int i) const { return w_(i); }

 private:
  Eigen::RowVectorXd w_;
};

struct ChainDiagnosis {
  bool irreducible = false;
  bool aperiodic = false;
};

// Gamma^k = sum_i e_i^k u_i^T v_i, with u_i the columns of `right` and v_i the
// rows of `left`, paired so that v_i u_i^T = 1. Eigenvalues are sorted
// descending; u_1 is scaled to the all-ones vector, which makes v_1 the
// stationary law.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd right;
  Eigen::MatrixXd left;

  Eigen::MatrixXd power(int k) const;
};

ChainDiagnosis validate_chain(const TransitionMatrix& chain);

// Solves delta Gamma = delta with one balance equation replaced by the
// normalization. Throws UnsupportedChainError for reducible or periodic chains.
StateDistribution stationary_distribution(const TransitionMatrix& chain);

Eigen::MatrixXd k_step(const TransitionMatrix& chain, int k);

// Throws SpectralUnsupportedError when an eigenvalue has imaginary part
// >= 1e-10 or two eigenvalues are closer than 1e-8.
SpectralDecomposition spectral_decompose(const TransitionMatrix& chain);

// True when every row equals the first one exactly. Hidden states are then
// i.i.d. across periods (the Ammeter configuration when rows equal delta).
bool has_identical_rows(const TransitionMatrix& chain);

}  // namespace coxclaims
