#pragma once

// Joint factorization of the interaction matrix A (n x n) and engagement
// matrix C (n x m):
//
//   min ||A - U Hu U^T||^2 + ||C - U Hs V^T||^2 + alpha tr(U^T Lu U) + beta tr(V^T Ls V)
//   s.t. U, V, Hu, Hs >= 0,  U^T U = V^T V = I
//
// solved with multiplicative updates. Orthogonality is soft: it enters only
// through the Lagrange multiplier terms inside the U and V rules.

#include "ideofactor/data_model.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ideofactor {

struct SolverConfig {
  int k = 2;
  double alpha = 0.0;
  double beta = 0.0;
  int max_iters = 500;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;
  double eps = 1e-12;  // denominator floor

  /// Throws InputError when a field is out of range.
  void validate() const;
};

struct FactorSet {
  MatrixXd U;   // n x k
  MatrixXd V;   // m x k
  MatrixXd Hu;  // k x k
  MatrixXd Hs;  // k x k

  Index n() const { return U.rows(); }
  Index m() const { return V.rows(); }
  Index k() const { return U.cols(); }
};

struct ObjectiveTerms {
  double interaction = 0.0;       // ||A - U Hu U^T||^2
  double engagement = 0.0;        // ||C - U Hs V^T||^2
  double user_smoothness = 0.0;   // alpha tr(U^T Lu U)
  double source_smoothness = 0.0; // beta tr(V^T Ls V)

  double total() const { return interaction + engagement + user_smoothness + source_smoothness; }
};

struct FitReport {
  std::vector<double> objective_trace;  // includes the value at initialization
  int iterations_run = 0;
  bool converged = false;
  double final_objective = 0.0;
  ObjectiveTerms terms;
  std::vector<std::string> warnings;
};

struct FitResult {
  FactorSet factors;
  FitReport report;
};

/// Similarity S, degree diagonal D and Laplacian L = D - S of one side of the
/// problem. An empty regularizer contributes nothing to the updates.
struct GraphRegularizer {
  MatrixXd similarity;
  VectorXd degree;
  MatrixXd laplacian;

  static GraphRegularizer from_affinity(const AffinityMatrix& affinity);
  bool empty() const { return similarity.size() == 0; }
};

/// U, V ~ Uniform[0,1) drawn row-major from `config.seed` (U first), Hu = Hs = I.
FactorSet init_factors(Index n, Index m, const SolverConfig& config);

ObjectiveTerms objective(const MatrixXd& a, const MatrixXd& c, const FactorSet& f,
                         const MatrixXd& user_laplacian, const MatrixXd& source_laplacian,
                         double alpha, double beta);

MatrixXd update_u(const MatrixXd& a, const MatrixXd& c, const FactorSet& f,
                  const GraphRegularizer& users, double alpha, double eps);
MatrixXd update_v(const MatrixXd& c, const FactorSet& f, const GraphRegularizer& sources,
                  double beta, double eps);
MatrixXd update_hu(const MatrixXd& a, const FactorSet& f, double eps);
MatrixXd update_hs(const MatrixXd& c, const FactorSet& f, double eps);

/// Called after every iteration with the 1-based iteration index.
using IterationObserver = std::function<void(int iteration, const FactorSet&, double objective)>;

/// Runs the updates in the order U, V, Hu, Hs until the relative objective
/// change drops below `rel_tol` or `max_iters` is reached. The user and source
/// graphs are the Laplacians of C's row and column affinities.
FitResult fit(const MatrixXd& a, const MatrixXd& c, const SolverConfig& config,
              const IterationObserver& observer = {});

/// Same, with caller-supplied regularization graphs.
FitResult fit(const MatrixXd& a, const MatrixXd& c, const SolverConfig& config,
              const GraphRegularizer& users, const GraphRegularizer& sources,
              const IterationObserver& observer = {});

FitResult fit(const InteractionMatrix& a, const EngagementMatrix& c, const SolverConfig& config,
              const IterationObserver& observer = {});

}  // namespace ideofactor
