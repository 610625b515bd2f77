#pragma once

// Single-view comparison methods sharing the IFD numerics: symmetric NMF,
// orthogonal tri-factorization (ONMTF), its dual-manifold regularized variant
// (DMCC), and IFD without graph regularization.

#include "ideofactor/solver.hpp"

#include <optional>
#include <string_view>

namespace ideofactor {

enum class BaselineMethod { NmfSymm, Onmtf, Dmcc, IfdNgr };

std::string_view to_string(BaselineMethod method);

struct BaselineResult {
  BaselineMethod method;
  MatrixXd row_factors;                  // p x k
  std::optional<MatrixXd> col_factors;   // q x k
  std::optional<MatrixXd> mid_factor;    // k x k
  std::vector<double> objective_trace;
  int iterations_run = 0;
  bool converged = false;
};

/// X ~ W H W^T for symmetric non-negative X. Only k, max_iters, rel_tol,
/// seed and eps are read from `config`.
BaselineResult fit_nmf_symm(const MatrixXd& x, const SolverConfig& config);

/// X ~ W H Z^T with soft W^T W = Z^T Z = I.
BaselineResult fit_onmtf(const MatrixXd& x, const SolverConfig& config);

/// ONMTF plus alpha tr(W^T Lw W) + beta tr(Z^T Lz Z), with Lw, Lz the
/// Laplacians of X's row and column affinities.
BaselineResult fit_dmcc(const MatrixXd& x, double alpha, double beta, const SolverConfig& config);

/// IFD with alpha = beta = 0. `col_factors` holds V and `mid_factor` holds Hs.
BaselineResult fit_ifd_ngr(const MatrixXd& a, const MatrixXd& c, const SolverConfig& config);

}  // namespace ideofactor
