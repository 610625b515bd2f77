#include "ideofactor/solver.hpp"

#include "ideofactor/error.hpp"
#include "ideofactor/rng.hpp"
#include "multiplicative.hpp"

#include <cmath>
#include <sstream>

namespace ideofactor {

using detail::multiplicative_step;
using detail::require_finite;
using detail::split_sign;

void SolverConfig::validate() const {
  if (k < 1) throw InputError("k must be at least 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be finite and >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InputError("beta must be finite and >= 0");
  if (max_iters < 1) throw InputError("max_iters must be at least 1");
  if (!(rel_tol > 0.0)) throw InputError("rel_tol must be > 0");
  if (!(eps > 0.0)) throw InputError("eps must be > 0");
}

GraphRegularizer GraphRegularizer::from_affinity(const AffinityMatrix& affinity) {
  LaplacianMatrix l = ideofactor::laplacian(affinity);
  return {affinity.values, std::move(l.degree), std::move(l.values)};
}

FactorSet init_factors(Index n, Index m, const SolverConfig& config) {
  if (n < 1 || m < 1) throw InputError("init_factors needs n, m >= 1");
  config.validate();
  Rng rng(config.seed);
  FactorSet f;
  f.U = detail::uniform_matrix(n, config.k, rng);
  f.V = detail::uniform_matrix(m, config.k, rng);
  f.Hu = MatrixXd::Identity(config.k, config.k);
  f.Hs = MatrixXd::Identity(config.k, config.k);
  return f;
}

namespace {

double smoothness(const MatrixXd& factor, const MatrixXd& lap) {
  if (lap.size() == 0) return 0.0;
  return (factor.transpose() * lap * factor).trace();
}

}  // namespace

ObjectiveTerms objective(const MatrixXd& a, const MatrixXd& c, const FactorSet& f,
                         const MatrixXd& user_laplacian, const MatrixXd& source_laplacian,
                         double alpha, double beta) {
  ObjectiveTerms t;
  t.interaction = (a - f.U * f.Hu * f.U.transpose()).squaredNorm();
  t.engagement = (c - f.U * f.Hs * f.V.transpose()).squaredNorm();
  t.user_smoothness = alpha * smoothness(f.U, user_laplacian);
  t.source_smoothness = beta * smoothness(f.V, source_laplacian);
  return t;
}

MatrixXd update_u(const MatrixXd& a, const MatrixXd& c, const FactorSet& f,
                  const GraphRegularizer& users, double alpha, double eps) {
  const MatrixXd& u = f.U;
  const MatrixXd utu = u.transpose() * u;
  const MatrixXd vtv = f.V.transpose() * f.V;
  const MatrixXd au_hut = a * u * f.Hu.transpose();
  const MatrixXd cv_hst = c * f.V * f.Hs.transpose();
  const MatrixXd hu_gram = f.Hu * utu * f.Hu.transpose();
  const MatrixXd hs_gram = f.Hs * vtv * f.Hs.transpose();

  MatrixXd lambda = u.transpose() * au_hut + u.transpose() * cv_hst - hu_gram - hs_gram;
  MatrixXd num = au_hut + cv_hst;
  MatrixXd den = u * hu_gram + u * hs_gram;
  if (!users.empty()) {
    const MatrixXd su = users.similarity * u;
    const MatrixXd du = users.degree.asDiagonal() * u;
    lambda -= alpha * (u.transpose() * (du - su));
    num += alpha * su;
    den += alpha * du;
  }
  const auto split = split_sign(lambda);
  num += u * split.minus;
  den += u * split.plus;

  MatrixXd out = multiplicative_step(u, num, den, eps);
  require_finite(out, "U");
  return out;
}

// The gradient of ||C - U Hs V^T||^2 in V involves Hs^T U^T U Hs, so Hs^T
// appears on the left of the Gram term.
MatrixXd update_v(const MatrixXd& c, const FactorSet& f, const GraphRegularizer& sources,
                  double beta, double eps) {
  const MatrixXd& v = f.V;
  const MatrixXd ctu_hs = c.transpose() * f.U * f.Hs;
  const MatrixXd hs_gram = f.Hs.transpose() * (f.U.transpose() * f.U) * f.Hs;

  MatrixXd lambda = v.transpose() * ctu_hs - hs_gram;
  MatrixXd num = ctu_hs;
  MatrixXd den = v * hs_gram;
  if (!sources.empty()) {
    const MatrixXd sv = sources.similarity * v;
    const MatrixXd dv = sources.degree.asDiagonal() * v;
    lambda -= beta * (v.transpose() * (dv - sv));
    num += beta * sv;
    den += beta * dv;
  }
  const auto split = split_sign(lambda);
  num += v * split.minus;
  den += v * split.plus;

  MatrixXd out = multiplicative_step(v, num, den, eps);
  require_finite(out, "V");
  return out;
}

MatrixXd update_hu(const MatrixXd& a, const FactorSet& f, double eps) {
  const MatrixXd utu = f.U.transpose() * f.U;
  const MatrixXd num = f.U.transpose() * a * f.U;
  const MatrixXd den = utu * f.Hu * utu;
  MatrixXd out = multiplicative_step(f.Hu, num, den, eps);
  require_finite(out, "Hu");
  return out;
}

MatrixXd update_hs(const MatrixXd& c, const FactorSet& f, double eps) {
  const MatrixXd num = f.U.transpose() * c * f.V;
  const MatrixXd den = (f.U.transpose() * f.U) * f.Hs * (f.V.transpose() * f.V);
  MatrixXd out = multiplicative_step(f.Hs, num, den, eps);
  require_finite(out, "Hs");
  return out;
}

FitResult fit(const MatrixXd& a, const MatrixXd& c, const SolverConfig& config,
              const GraphRegularizer& users, const GraphRegularizer& sources,
              const IterationObserver& observer) {
  config.validate();
  const Index n = c.rows();
  const Index m = c.cols();
  if (a.rows() != a.cols()) throw InputError("A must be square");
  if (a.rows() != n)
    throw InputError("A is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                     " but C has " + std::to_string(n) + " rows");
  if (!users.empty() && users.similarity.rows() != n) throw InputError("user graph size does not match n");
  if (!sources.empty() && sources.similarity.rows() != m) throw InputError("source graph size does not match m");

  FitResult result;
  result.factors = init_factors(n, m, config);
  FactorSet& f = result.factors;
  FitReport& report = result.report;

  auto evaluate = [&] {
    return objective(a, c, f, users.laplacian, sources.laplacian, config.alpha, config.beta);
  };
  report.terms = evaluate();
  report.objective_trace.push_back(report.terms.total());

  for (int it = 1; it <= config.max_iters; ++it) {
    try {
      f.U = update_u(a, c, f, users, config.alpha, config.eps);
      f.V = update_v(c, f, sources, config.beta, config.eps);
      f.Hu = update_hu(a, f, config.eps);
      f.Hs = update_hs(c, f, config.eps);
    } catch (const NumericError& e) {
      throw NumericError(std::string(e.what()) + " at iteration " + std::to_string(it), it);
    }
    report.terms = evaluate();
    const double current = report.terms.total();
    if (!std::isfinite(current))
      throw NumericError("objective is not finite at iteration " + std::to_string(it), it);
    const double previous = report.objective_trace.back();
    report.objective_trace.push_back(current);
    report.iterations_run = it;
    if (current > previous * 1.01) {
      std::ostringstream msg;
      msg << "objective rose from " << previous << " to " << current << " at iteration " << it;
      report.warnings.push_back(msg.str());
    }
    if (observer) observer(it, f, current);
    if (detail::relative_change(previous, current, config.eps) < config.rel_tol) {
      report.converged = true;
      break;
    }
  }
  report.final_objective = report.objective_trace.back();
  return result;
}

FitResult fit(const MatrixXd& a, const MatrixXd& c, const SolverConfig& config,
              const IterationObserver& observer) {
  return fit(a, c, config, GraphRegularizer::from_affinity(affinity_rows(c)),
             GraphRegularizer::from_affinity(affinity_cols(c)), observer);
}

FitResult fit(const InteractionMatrix& a, const EngagementMatrix& c, const SolverConfig& config,
              const IterationObserver& observer) {
  if (a.user_ids() != c.user_ids()) throw InputError("A and C must index the same users in the same order");
  return fit(a.values(), c.values(), config, observer);
}

}  // namespace ideofactor
