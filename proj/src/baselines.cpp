#include "ideofactor/baselines.hpp"

#include "ideofactor/error.hpp"
#include "ideofactor/rng.hpp"
#include "multiplicative.hpp"

#include <cmath>

namespace ideofactor {

using detail::multiplicative_step;
using detail::require_finite;
using detail::split_sign;

std::string_view to_string(BaselineMethod method) {
  switch (method) {
    case BaselineMethod::NmfSymm: return "nmf-symm";
    case BaselineMethod::Onmtf: return "onmtf";
    case BaselineMethod::Dmcc: return "dmcc";
    case BaselineMethod::IfdNgr: return "ifd-ngr";
  }
  return "unknown";
}

namespace {

void require_non_negative(const MatrixXd& x, const char* what) {
  if (!x.allFinite() || (x.array() < 0.0).any())
    throw InputError(std::string(what) + " must be finite and non-negative");
}

// Iteration bookkeeping shared by the baseline loops. Returns true when the
// relative change falls below tolerance.
bool record(BaselineResult& r, int it, double value, const SolverConfig& config) {
  if (!std::isfinite(value))
    throw NumericError("objective is not finite at iteration " + std::to_string(it), it);
  const double previous = r.objective_trace.back();
  r.objective_trace.push_back(value);
  r.iterations_run = it;
  if (detail::relative_change(previous, value, config.eps) < config.rel_tol) {
    r.converged = true;
    return true;
  }
  return false;
}

double smoothness(const MatrixXd& factor, const GraphRegularizer& g) {
  if (g.empty()) return 0.0;
  return (factor.transpose() * g.laplacian * factor).trace();
}

// Tri-factorization X ~ W H Z^T with optional row/column graph penalties.
// ONMTF is this loop with empty graphs.
BaselineResult fit_trifactor(const MatrixXd& x, const GraphRegularizer& rows,
                             const GraphRegularizer& cols, double alpha, double beta,
                             const SolverConfig& config, BaselineMethod method) {
  config.validate();
  require_non_negative(x, "X");
  if (x.rows() < 1 || x.cols() < 1) throw InputError("X must be non-empty");

  const FactorSet init = init_factors(x.rows(), x.cols(), config);
  MatrixXd w = init.U;
  MatrixXd z = init.V;
  MatrixXd h = init.Hs;

  auto evaluate = [&] {
    return (x - w * h * z.transpose()).squaredNorm() + alpha * smoothness(w, rows) +
           beta * smoothness(z, cols);
  };

  BaselineResult r{method, {}, {}, {}, {evaluate()}, 0, false};
  for (int it = 1; it <= config.max_iters; ++it) {
    try {
      {
        const MatrixXd xz_ht = x * z * h.transpose();
        const MatrixXd gram = h * (z.transpose() * z) * h.transpose();
        MatrixXd lambda = w.transpose() * xz_ht - gram;
        MatrixXd num = xz_ht;
        MatrixXd den = w * gram;
        if (!rows.empty()) {
          const MatrixXd sw = rows.similarity * w;
          const MatrixXd dw = rows.degree.asDiagonal() * w;
          lambda -= alpha * (w.transpose() * (dw - sw));
          num += alpha * sw;
          den += alpha * dw;
        }
        const auto split = split_sign(lambda);
        num += w * split.minus;
        den += w * split.plus;
        w = multiplicative_step(w, num, den, config.eps);
        require_finite(w, "W");
      }
      {
        const MatrixXd xtw_h = x.transpose() * w * h;
        const MatrixXd gram = h.transpose() * (w.transpose() * w) * h;
        MatrixXd lambda = z.transpose() * xtw_h - gram;
        MatrixXd num = xtw_h;
        MatrixXd den = z * gram;
        if (!cols.empty()) {
          const MatrixXd sz = cols.similarity * z;
          const MatrixXd dz = cols.degree.asDiagonal() * z;
          lambda -= beta * (z.transpose() * (dz - sz));
          num += beta * sz;
          den += beta * dz;
        }
        const auto split = split_sign(lambda);
        num += z * split.minus;
        den += z * split.plus;
        z = multiplicative_step(z, num, den, config.eps);
        require_finite(z, "Z");
      }
      h = multiplicative_step(h, w.transpose() * x * z,
                              (w.transpose() * w) * h * (z.transpose() * z), config.eps);
      require_finite(h, "H");
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at iteration " + std::to_string(it), it);
    }
    if (record(r, it, evaluate(), config)) break;
  }
  r.row_factors = std::move(w);
  r.col_factors = std::move(z);
  r.mid_factor = std::move(h);
  return r;
}

}  // namespace

BaselineResult fit_nmf_symm(const MatrixXd& x, const SolverConfig& config) {
  config.validate();
  require_non_negative(x, "X");
  if (x.rows() != x.cols() || x.rows() < 1) throw InputError("nmf-symm needs a non-empty square matrix");
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = j + 1; i < x.rows(); ++i)
      if (std::abs(x(i, j) - x(j, i)) > 1e-9 * std::max(1.0, std::abs(x(i, j))))
        throw InputError("nmf-symm needs a symmetric matrix");

  Rng rng(config.seed);
  MatrixXd w = detail::uniform_matrix(x.rows(), config.k, rng);
  MatrixXd h = MatrixXd::Identity(config.k, config.k);
  auto evaluate = [&] { return (x - w * h * w.transpose()).squaredNorm(); };

  BaselineResult r{BaselineMethod::NmfSymm, {}, {}, {}, {evaluate()}, 0, false};
  for (int it = 1; it <= config.max_iters; ++it) {
    try {
      const MatrixXd xw_ht = x * w * h.transpose();
      const MatrixXd gram = h * (w.transpose() * w) * h.transpose();
      const auto split = split_sign(w.transpose() * xw_ht - gram);
      w = multiplicative_step(w, xw_ht + w * split.minus, w * gram + w * split.plus, config.eps);
      require_finite(w, "W");
      const MatrixXd wtw = w.transpose() * w;
      h = multiplicative_step(h, w.transpose() * x * w, wtw * h * wtw, config.eps);
      require_finite(h, "H");
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at iteration " + std::to_string(it), it);
    }
    if (record(r, it, evaluate(), config)) break;
  }
  r.row_factors = std::move(w);
  r.mid_factor = std::move(h);
  return r;
}

BaselineResult fit_onmtf(const MatrixXd& x, const SolverConfig& config) {
  return fit_trifactor(x, {}, {}, 0.0, 0.0, config, BaselineMethod::Onmtf);
}

BaselineResult fit_dmcc(const MatrixXd& x, double alpha, double beta, const SolverConfig& config) {
  if (!(alpha >= 0.0) || !(beta >= 0.0)) throw InputError("alpha and beta must be >= 0");
  require_non_negative(x, "X");
  return fit_trifactor(x, GraphRegularizer::from_affinity(affinity_rows(x)),
                       GraphRegularizer::from_affinity(affinity_cols(x)), alpha, beta, config,
                       BaselineMethod::Dmcc);
}

BaselineResult fit_ifd_ngr(const MatrixXd& a, const MatrixXd& c, const SolverConfig& config) {
  SolverConfig plain = config;
  plain.alpha = 0.0;
  plain.beta = 0.0;
  FitResult fitted = fit(a, c, plain);
  BaselineResult r{BaselineMethod::IfdNgr,
                   std::move(fitted.factors.U),
                   std::move(fitted.factors.V),
                   std::move(fitted.factors.Hs),
                   std::move(fitted.report.objective_trace),
                   fitted.report.iterations_run,
                   fitted.report.converged};
  return r;
}

}  // namespace ideofactor
