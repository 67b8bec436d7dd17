#include "coxclaims/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "coxclaims/errors.hpp"

namespace coxclaims {

namespace {

constexpr double kSumTolerance = 1e-12;
constexpr double kImagTolerance = 1e-10;
constexpr double kEigenGap = 1e-8;

// Reachability in the digraph with an edge i -> j whenever gamma_ij > 0.
std::vector<std::vector<bool>> reachability(const Eigen::MatrixXd& p) {
  const int g = static_cast<int>(p.rows());
  std::vector<std::vector<bool>> reach(g, std::vector<bool>(g, false));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) reach[i][j] = p(i, j) > 0.0;
  for (int k = 0; k < g; ++k)
    for (int i = 0; i < g; ++i)
      if (reach[i][k])
        for (int j = 0; j < g; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

// Period of the strongly connected class containing `root`: gcd over the
// class's edges of level(u) + 1 - level(v), with BFS levels from root.
// Returns 0 when the class has no cycle.
long class_period(const Eigen::MatrixXd& p, const std::vector<int>& members, int root) {
  const int g = static_cast<int>(p.rows());
  std::vector<bool> in_class(g, false);
  for (int m : members) in_class[m] = true;
  std::vector<long> level(g, -1);
  level[root] = 0;
  std::queue<int> frontier;
  frontier.push(root);
  long period = 0;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v = 0; v < g; ++v) {
      if (!in_class[v] || p(u, v) <= 0.0) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      } else {
        period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  return period;
}

}  // namespace

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd entries) : p_(std::move(entries)) {
  if (p_.rows() < 1 || p_.rows() != p_.cols()) {
    std::ostringstream msg;
    msg << "transition matrix must be square with at least one state, got " << p_.rows() << "x"
        << p_.cols();
    throw ValidationError(msg.str());
  }
  for (Eigen::Index i = 0; i < p_.rows(); ++i) {
    for (Eigen::Index j = 0; j < p_.cols(); ++j) {
      const double v = p_(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        std::ostringstream msg;
        msg << "transition matrix row " << i + 1 << " has entry " << v << " outside [0,1]";
        throw ValidationError(msg.str());
      }
    }
    const double sum = p_.row(i).sum();
    if (std::abs(sum - 1.0) > kSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "transition matrix row " << i + 1 << " sums to " << sum << ", not 1";
      throw ValidationError(msg.str());
    }
  }
}

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const auto g = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != g) {
      std::ostringstream msg;
      msg << "transition matrix row " << i + 1 << " has " << rows[i].size() << " entries, expected "
          << g;
      throw ValidationError(msg.str());
    }
    for (Eigen::Index j = 0; j < g; ++j) m(i, j) = rows[i][j];
  }
  return TransitionMatrix(std::move(m));
}

StateDistribution::StateDistribution(Eigen::RowVectorXd weights) : w_(std::move(weights)) {
  if (w_.size() < 1) throw ValidationError("state distribution must have at least one state");
  for (Eigen::Index i = 0; i < w_.size(); ++i) {
    if (!std::isfinite(w_(i)) || w_(i) < 0.0) {
      std::ostringstream msg;
      msg << "state distribution entry " << i + 1 << " is " << w_(i) << ", must be nonnegative";
      throw ValidationError(msg.str());
    }
  }
  if (std::abs(w_.sum() - 1.0) > kSumTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "state distribution sums to " << w_.sum() << ", not 1";
    throw ValidationError(msg.str());
  }
}

StateDistribution StateDistribution::from_vector(const std::vector<double>& weights) {
  Eigen::RowVectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i) w(static_cast<Eigen::Index>(i)) = weights[i];
  return StateDistribution(std::move(w));
}

Eigen::MatrixXd SpectralDecomposition::power(int k) const {
  const auto g = eigenvalues.size();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g, g);
  for (Eigen::Index i = 0; i < g; ++i)
    out += std::pow(eigenvalues(i), k) * right.col(i) * left.row(i);
  return out;
}

ChainDiagnosis validate_chain(const TransitionMatrix& chain) {
  const Eigen::MatrixXd& p = chain.matrix();
  const int g = chain.states();
  const auto reach = reachability(p);

  ChainDiagnosis out;
  out.irreducible = true;
  for (int i = 0; i < g && out.irreducible; ++i)
    for (int j = 0; j < g; ++j)
      if (!reach[i][j]) {
        out.irreducible = false;
        break;
      }

  // Period = gcd of cycle lengths over all closed walks, computed class by class.
  std::vector<bool> assigned(g, false);
  long period = 0;
  for (int root = 0; root < g; ++root) {
    if (assigned[root]) continue;
    std::vector<int> members;
    for (int j = 0; j < g; ++j)
      if (j == root || (reach[root][j] && reach[j][root])) members.push_back(j);
    for (int m : members) assigned[m] = true;
    period = std::gcd(period, class_period(p, members, root));
  }
  out.aperiodic = period == 1;
  return out;
}

StateDistribution stationary_distribution(const TransitionMatrix& chain) {
  const auto diag = validate_chain(chain);
  if (!diag.irreducible) throw UnsupportedChainError("chain is reducible; no unique limiting law");
  if (!diag.aperiodic) throw UnsupportedChainError("chain is periodic; no limiting law");

  const int g = chain.states();
  // (Gamma^T - I) delta^T = 0 with the last equation replaced by sum(delta) = 1.
  Eigen::MatrixXd a = chain.matrix().transpose() - Eigen::MatrixXd::Identity(g, g);
  a.row(g - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g);
  rhs(g - 1) = 1.0;
  Eigen::VectorXd delta = a.fullPivLu().solve(rhs);
  for (int i = 0; i < g; ++i) delta(i) = std::max(delta(i), 0.0);
  delta /= delta.sum();
  return StateDistribution(delta.transpose());
}

Eigen::MatrixXd k_step(const TransitionMatrix& chain, int k) {
  if (k < 0) throw DomainError("k_step requires k >= 0");
  const int g = chain.states();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(g, g);
  Eigen::MatrixXd base = chain.matrix();
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

SpectralDecomposition spectral_decompose(const TransitionMatrix& chain) {
  const int g = chain.states();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(chain.matrix(), true);
  if (solver.info() != Eigen::Success)
    throw SpectralUnsupportedError("eigen decomposition did not converge; use the direct path");

  const Eigen::VectorXcd values = solver.eigenvalues();
  for (int i = 0; i < g; ++i) {
    if (std::abs(values(i).imag()) >= kImagTolerance) {
      std::ostringstream msg;
      msg << "transition matrix has complex eigenvalue " << values(i).real() << "+"
          << values(i).imag() << "i; use the direct covariance path";
      throw SpectralUnsupportedError(msg.str());
    }
  }

  std::vector<int> order(g);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values(a).real() > values(b).real(); });
  for (int i = 1; i < g; ++i) {
    if (values(order[i - 1]).real() - values(order[i]).real() <= kEigenGap) {
      std::ostringstream msg;
      msg << "transition matrix has repeated eigenvalue near " << values(order[i]).real()
          << "; use the direct covariance path";
      throw SpectralUnsupportedError(msg.str());
    }
  }

  SpectralDecomposition out;
  out.eigenvalues.resize(g);
  out.right.resize(g, g);
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  for (int i = 0; i < g; ++i) {
    out.eigenvalues(i) = values(order[i]).real();
    out.right.col(i) = vectors.col(order[i]).real();
  }
  if (std::abs(out.eigenvalues(0) - 1.0) > 1e-10)
    throw SpectralUnsupportedError("leading eigenvalue is not 1");

  // Leading right vector is constant; rescale it to ones so v_1 = delta.
  const double c = out.right.col(0).mean();
  out.right.col(0) /= c;
  // Rows of the inverse are the left vectors, already paired: v_i u_j^T = [i == j].
  out.left = out.right.inverse();
  return out;
}

bool has_identical_rows(const TransitionMatrix& chain) {
  const Eigen::MatrixXd& p = chain.matrix();
  for (Eigen::Index i = 1; i < p.rows(); ++i)
    if (p.row(i) != p.row(0)) return false;
  return true;
}

}  // namespace coxclaims
