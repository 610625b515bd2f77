#include "ideofactor/pipeline.hpp"

#include "ideofactor/error.hpp"
#include "ideofactor/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>

namespace ideofactor {

LoadedInputs load_inputs(const std::filesystem::path& edges, const std::filesystem::path& engagement,
                         InteractionMode mode) {
  const auto records = read_engagement_file(engagement);
  const auto edge_list =
      mode == InteractionMode::FollowCommonNeighbors ? read_follow_file(edges) : read_edge_file(edges);

  IdIndex universe;
  for (const auto& r : records) universe.intern(r.user);
  for (const auto& e : edge_list) {
    universe.intern(e.src);
    // Followees are not users unless they appear elsewhere.
    if (mode != InteractionMode::FollowCommonNeighbors) universe.intern(e.dst);
  }
  const auto& ids = universe.ids();
  return {build_interaction_matrix(edge_list, mode, ids), build_engagement_matrix(records, ids)};
}

Method parse_method(std::string_view name) {
  if (name == "ifd") return Method::Ifd;
  if (name == "ifd-ngr") return Method::IfdNgr;
  if (name == "nmf-symm") return Method::NmfSymm;
  if (name == "onmtf") return Method::Onmtf;
  if (name == "dmcc") return Method::Dmcc;
  throw InputError("unknown method '" + std::string(name) + "' (ifd, ifd-ngr, nmf-symm, onmtf, dmcc)");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Ifd: return "ifd";
    case Method::IfdNgr: return "ifd-ngr";
    case Method::NmfSymm: return "nmf-symm";
    case Method::Onmtf: return "onmtf";
    case Method::Dmcc: return "dmcc";
  }
  return "?";
}

namespace {

FactorDocument document_shell(Method method, const InteractionMatrix& a, const EngagementMatrix& c,
                              const SolverConfig& config) {
  FactorDocument doc;
  doc.method = std::string(to_string(method));
  doc.config = config;
  doc.user_ids = a.user_ids();
  doc.source_ids = c.source_ids();
  return doc;
}

void take_trace(FactorDocument& doc, const BaselineResult& r) {
  doc.objective_trace = r.objective_trace;
  doc.iterations_run = r.iterations_run;
  doc.converged = r.converged;
}

}  // namespace

FactorDocument run_method(Method method, const InteractionMatrix& a, const EngagementMatrix& c,
                          const SolverConfig& config) {
  config.validate();
  if (a.user_ids() != c.user_ids()) throw InputError("interaction and engagement user orders differ");
  FactorDocument doc = document_shell(method, a, c, config);

  switch (method) {
    case Method::Ifd:
    case Method::IfdNgr: {
      if (method == Method::IfdNgr) doc.config.alpha = doc.config.beta = 0.0;
      auto r = fit(a, c, doc.config);
      doc.factors = std::move(r.factors);
      doc.objective_trace = std::move(r.report.objective_trace);
      doc.iterations_run = r.report.iterations_run;
      doc.converged = r.report.converged;
      break;
    }
    case Method::NmfSymm: {
      const MatrixXd sym = 0.5 * (a.values() + a.values().transpose());
      auto users = fit_nmf_symm(sym, config);
      SolverConfig src_config = config;
      src_config.seed = derive_seed(config.seed, 1);
      auto sources = fit_nmf_symm(c.values().transpose() * c.values(), src_config);
      doc.factors.U = users.row_factors;
      doc.factors.Hu = *users.mid_factor;
      doc.factors.V = sources.row_factors;
      doc.factors.Hs = *sources.mid_factor;
      take_trace(doc, users);
      doc.converged = users.converged && sources.converged;
      break;
    }
    case Method::Onmtf:
    case Method::Dmcc: {
      auto r = method == Method::Onmtf ? fit_onmtf(c.values(), config)
                                       : fit_dmcc(c.values(), config.alpha, config.beta, config);
      doc.factors.U = r.row_factors;
      doc.factors.V = *r.col_factors;
      doc.factors.Hs = *r.mid_factor;
      take_trace(doc, r);
      break;
    }
  }
  return doc;
}

namespace {

Prediction side_prediction(const ScoredSpace& space, bool sources) {
  const auto& side = sources ? space.sources : space.users;
  Prediction p;
  for (const auto& e : side) {
    p.ids.push_back(e.id);
    p.clusters.push_back(e.cluster);
    if (e.ideology) p.ideology.push_back(*e.ideology);
    if (e.popularity) p.popularity.push_back(*e.popularity);
  }
  if (p.ideology.size() != p.ids.size()) p.ideology.clear();
  if (p.popularity.size() != p.ids.size()) p.popularity.clear();
  return p;
}

GridCell run_cell(const InteractionMatrix& a, const EngagementMatrix& c, const ScoreSeries& truth,
                  const std::vector<Anchor>& anchors, SolverConfig config, double alpha, double beta,
                  bool target_sources) {
  config.alpha = alpha;
  config.beta = beta;
  FitResult r;
  try {
    r = fit(a, c, config);
  } catch (const NumericError& e) {
    GridCell failed;
    failed.alpha = alpha;
    failed.beta = beta;
    failed.iterations = e.iteration();
    failed.numeric_error = e.what();
    return failed;
  }
  FactorSet f = std::move(r.factors);
  if (f.k() == 2) f = orient(f, a.user_ids(), c.source_ids(), anchors).factors;
  const ScoredSpace space = score_all(f, a.user_ids(), c.source_ids());
  const EvaluationReport e = evaluate(side_prediction(space, target_sources), truth);
  GridCell cell;
  cell.alpha = alpha;
  cell.beta = beta;
  cell.purity = e.purity;
  cell.corr_i = e.corr_i;
  cell.final_objective = r.report.final_objective;
  cell.iterations = r.report.iterations_run;
  return cell;
}

bool better(const GridCell& x, const GridCell& y) {
  if (x.numeric_error || y.numeric_error) return !x.numeric_error && y.numeric_error;
  if (x.purity != y.purity) return x.purity > y.purity;
  const double cx = x.corr_i.value_or(-2.0), cy = y.corr_i.value_or(-2.0);
  if (cx != cy) return cx > cy;
  return x.alpha + x.beta < y.alpha + y.beta;
}

}  // namespace

GridReport grid_search(const InteractionMatrix& a, const EngagementMatrix& c, const ScoreSeries& truth,
                       const SolverConfig& base, const std::vector<double>& alphas,
                       const std::vector<double>& betas, bool target_sources, int threads) {
  base.validate();
  if (alphas.empty() || betas.empty()) throw InputError("grid must have at least one alpha and one beta");
  for (double v : alphas)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("grid alpha values must be finite and >= 0");
  for (double v : betas)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("grid beta values must be finite and >= 0");

  std::vector<double> as = alphas, bs = betas;
  std::sort(as.begin(), as.end());
  as.erase(std::unique(as.begin(), as.end()), as.end());
  std::sort(bs.begin(), bs.end());
  bs.erase(std::unique(bs.begin(), bs.end()), bs.end());

  std::vector<Anchor> anchors;
  for (std::size_t i = 0; i < truth.size(); ++i) anchors.push_back({truth.ids[i], truth.values[i]});

  const std::size_t total = as.size() * bs.size();
  std::vector<GridCell> cells(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        cells[i] = run_cell(a, c, truth, anchors, base, as[i / bs.size()], bs[i % bs.size()], target_sources);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = std::clamp<int>(threads, 1, static_cast<int>(total));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  GridReport report;
  report.cells = std::move(cells);
  report.target = target_sources ? "sources" : "users";
  report.best = report.cells.front();
  for (const auto& cell : report.cells)
    if (better(cell, report.best)) report.best = cell;
  if (report.best.numeric_error) throw NumericError("every grid cell diverged: " + *report.best.numeric_error);
  return report;
}

Json to_json(const GridReport& report) {
  auto cell_json = [](const GridCell& c) {
    Json j;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["purity"] = c.purity;
    j["corr_i"] = c.corr_i ? Json(*c.corr_i) : Json(nullptr);
    j["final_objective"] = c.final_objective;
    j["iterations"] = c.iterations;
    j["status"] = c.numeric_error ? "numeric_error" : "ok";
    if (c.numeric_error) j["error"] = *c.numeric_error;
    return j;
  };
  Json j;
  j["target"] = report.target;
  j["best"] = cell_json(report.best);
  j["cells"] = Json::array();
  for (const auto& c : report.cells) j["cells"].push_back(cell_json(c));
  return j;
}

int thread_cap() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("IDEOFACTOR_THREADS");
  if (!env || !*env) return static_cast<int>(hw);
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw InputError("IDEOFACTOR_THREADS must be a positive integer");
  return static_cast<int>(v);
}

namespace {

EngagementMatrix align_engagement(const EngagementMatrix& c, const std::vector<std::string>& users,
                                  const std::vector<std::string>& sources) {
  MatrixXd values = MatrixXd::Zero(static_cast<Index>(users.size()), static_cast<Index>(sources.size()));
  std::vector<Index> cols(sources.size());
  for (std::size_t j = 0; j < sources.size(); ++j) cols[j] = c.sources().find(sources[j]);
  for (std::size_t i = 0; i < users.size(); ++i) {
    const Index row = c.users().find(users[i]);
    if (row < 0) continue;
    for (std::size_t j = 0; j < sources.size(); ++j)
      if (cols[j] >= 0) values(static_cast<Index>(i), static_cast<Index>(j)) = c.values()(row, cols[j]);
  }
  return EngagementMatrix(std::move(values), users, sources);
}

std::vector<double> row_of(const MatrixXd& m, Index i) {
  std::vector<double> out(static_cast<std::size_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j) out[static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

}  // namespace

Explorer::Explorer(const FactorDocument& doc, const EngagementMatrix& c, std::span<const Anchor> anchors,
                   const ScoreOptions& options)
    : engagement_(align_engagement(c, doc.user_ids, doc.source_ids)), users_(doc.user_ids) {
  FactorSet f = doc.factors;
  if (f.k() == 2 && !anchors.empty()) {
    auto o = orient(f, doc.user_ids, doc.source_ids, anchors);
    f = std::move(o.factors);
    flipped_ = o.flipped;
  }
  space_ = score_all(f, doc.user_ids, doc.source_ids, options);
  if (f.k() == 2) {
    for (std::size_t i = 0; i < space_.users.size(); ++i) {
      const auto row = row_of(engagement_.values(), static_cast<Index>(i));
      positions_.push_back(place_user(space_.users[i], row, space_.sources));
    }
  }
}

Json Explorer::space_json() const { return ideofactor::space_json(space_, positions_, engagement_); }

std::vector<Recommendation> Explorer::recommend(const std::string& user_id, const ToleranceBox& box,
                                                const RecommendOptions& options) const {
  const Index i = users_.find(user_id);
  if (i < 0) throw InputError("unknown user '" + user_id + "'");
  if (positions_.empty()) throw InputError("recommendations need a k = 2 factorization");
  const auto row = row_of(engagement_.values(), i);
  return ideofactor::recommend(positions_[static_cast<std::size_t>(i)], space_.sources, box, row, options);
}

Json Explorer::recommend_json(const std::string& user_id, const ToleranceBox& box,
                              const RecommendOptions& options) const {
  return recommendation_json(user_id, box, recommend(user_id, box, options));
}

}  // namespace ideofactor
