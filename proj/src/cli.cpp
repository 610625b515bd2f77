#include "ideofactor/cli.hpp"

#include "ideofactor/error.hpp"
#include "ideofactor/pipeline.hpp"
#include "ideofactor/server.hpp"
#include "ideofactor/synthetic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <ostream>

namespace ideofactor {

namespace fs = std::filesystem;

namespace {

struct SolverFlags {
  int k = 2;
  double alpha = 0.0;
  double beta = 0.0;
  int max_iters = 500;
  double rel_tol = 1e-6;
  std::uint64_t seed = 0;

  void attach(CLI::App* app, bool with_regularization = true) {
    app->add_option("--k", k, "Latent dimension")->capture_default_str();
    if (with_regularization) {
      app->add_option("--alpha", alpha, "User graph weight")->capture_default_str();
      app->add_option("--beta", beta, "Source graph weight")->capture_default_str();
    }
    app->add_option("--max-iters", max_iters)->capture_default_str();
    app->add_option("--rel-tol", rel_tol)->capture_default_str();
    app->add_option("--seed", seed)->capture_default_str();
  }

  SolverConfig config() const {
    SolverConfig c;
    c.k = k;
    c.alpha = alpha;
    c.beta = beta;
    c.max_iters = max_iters;
    c.rel_tol = rel_tol;
    c.seed = seed;
    c.validate();
    return c;
  }
};

std::vector<Anchor> anchors_from(const std::string& path) {
  std::vector<Anchor> anchors;
  if (path.empty()) return anchors;
  const ScoreSeries s = read_score_file(path);
  for (std::size_t i = 0; i < s.size(); ++i) anchors.push_back({s.ids[i], s.values[i]});
  return anchors;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f) throw InputError("failed writing " + path.string());
}

Json file_entry(const fs::path& path) {
  return Json{{"path", fs::absolute(path).lexically_normal().string()}, {"sha256", sha256_file(path)}};
}

Json config_json(const SolverConfig& c) {
  return Json{{"k", c.k},           {"alpha", c.alpha}, {"beta", c.beta}, {"max_iters", c.max_iters},
              {"rel_tol", c.rel_tol}, {"seed", c.seed},   {"eps", c.eps}};
}

SolverConfig config_from_json(const Json& j) {
  SolverConfig c;
  c.k = j.at("k").get<int>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.max_iters = j.at("max_iters").get<int>();
  c.rel_tol = j.at("rel_tol").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.eps = j.at("eps").get<double>();
  c.validate();
  return c;
}

// Runs a fit and writes factors.json into `out_dir`. Returns the factor path.
fs::path fit_to_dir(Method method, InteractionMode mode, const fs::path& edges, const fs::path& engagement,
                    const SolverConfig& config, const fs::path& out_dir, std::ostream& out) {
  const LoadedInputs in = load_inputs(edges, engagement, mode);
  const FactorDocument doc = run_method(method, in.A, in.C, config);
  const fs::path factors = out_dir / "factors.json";
  write_text(factors, dump(to_json(doc)));
  const double last = doc.objective_trace.empty() ? 0.0 : doc.objective_trace.back();
  out << to_string(method) << ": n=" << in.A.n() << " m=" << in.C.m() << " k=" << config.k
      << " iterations=" << doc.iterations_run << " converged=" << (doc.converged ? "yes" : "no")
      << " objective=" << last << "\n";
  return factors;
}

Prediction prediction_from_file(const fs::path& path, bool sources) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path.string());
  std::string header;
  std::getline(f, header);
  Prediction p;
  if (header.rfind("id,kind", 0) == 0) {
    const ScoredSpace space = read_scores_table(path);
    for (const auto& e : sources ? space.sources : space.users) {
      p.ids.push_back(e.id);
      p.clusters.push_back(e.cluster);
      if (e.ideology) p.ideology.push_back(*e.ideology);
      if (e.popularity) p.popularity.push_back(*e.popularity);
    }
    if (p.ideology.size() != p.ids.size()) p.ideology.clear();
    if (p.popularity.size() != p.ids.size()) p.popularity.clear();
    return p;
  }
  // Plain id,score labels: the score is both the ideology and, thresholded, the cluster.
  const ScoreSeries s = read_score_file(path);
  p.ids = s.ids;
  p.ideology = s.values;
  p.clusters = threshold_labels(s).labels;
  return p;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  for (const auto& part : CLI::detail::split(text, ',')) {
    const std::string t = CLI::detail::trim_copy(part);
    if (t.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size()) throw InputError("bad grid value '" + t + "'");
    values.push_back(v);
  }
  if (values.empty()) throw InputError("empty grid '" + text + "'");
  return values;
}

bool parse_bool(const std::string& v) {
  if (v.empty()) return true;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("expected true or false, got '" + v + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ideology factorization toolkit", "ideofactor"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a planted two-block instance");
  SyntheticSpec spec;
  std::string gen_out;
  gen->add_option("--users", spec.n_users)->capture_default_str();
  gen->add_option("--sources", spec.m_sources)->capture_default_str();
  gen->add_option("--block-fraction", spec.block_fraction)->capture_default_str();
  gen->add_option("--p-in", spec.p_in)->capture_default_str();
  gen->add_option("--p-out", spec.p_out)->capture_default_str();
  gen->add_option("--lambda-in", spec.lambda_in)->capture_default_str();
  gen->add_option("--lambda-out", spec.lambda_out)->capture_default_str();
  gen->add_option("--spread", spec.ideology_spread)->capture_default_str();
  gen->add_option("--seed", spec.seed)->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Factorize and write factors.json plus manifest.json");
  SolverFlags fit_flags;
  std::string method_name = "ifd", edge_mode = "retweet", edges, engagement, fit_out;
  fit_cmd->add_option("--method", method_name, "ifd | ifd-ngr | nmf-symm | onmtf | dmcc")->capture_default_str();
  fit_cmd->add_option("--edge-mode", edge_mode, "retweet | follow | raw")->capture_default_str();
  fit_cmd->add_option("--edges", edges)->required();
  fit_cmd->add_option("--engagement", engagement)->required();
  fit_cmd->add_option("--out", fit_out, "Output directory")->required();
  fit_flags.attach(fit_cmd);

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a fit from its manifest and compare output hashes");
  std::string manifest_path, replay_out;
  replay->add_option("--manifest", manifest_path)->required();
  replay->add_option("--out", replay_out, "Output directory")->required();

  // gridsearch
  auto* grid = app.add_subcommand("gridsearch", "Select alpha and beta against validation labels");
  SolverFlags grid_flags;
  std::string grid_edges, grid_engagement, grid_truth, grid_out, grid_values, alpha_grid, beta_grid,
      grid_mode = "retweet", grid_target = "users";
  grid->add_option("--edges", grid_edges)->required();
  grid->add_option("--engagement", grid_engagement)->required();
  grid->add_option("--truth", grid_truth, "Validation scores (id,score)");
  grid->add_option("--edge-mode", grid_mode)->capture_default_str();
  grid->add_option("--target", grid_target, "users | sources")->capture_default_str();
  grid->add_option("--grid", grid_values, "Comma-separated values for both alpha and beta");
  grid->add_option("--alpha-grid", alpha_grid);
  grid->add_option("--beta-grid", beta_grid);
  grid->add_option("--out", grid_out, "Report JSON path");
  grid_flags.attach(grid, false);

  // score
  auto* score = app.add_subcommand("score", "Ideology and popularity scores from a factor file");
  std::string score_factors, score_truth, score_out;
  bool normalize = false;
  score->add_option("--factors", score_factors)->required();
  score->add_option("--truth", score_truth, "Anchor scores used to orient the axes");
  score->add_flag("--normalize-columns", normalize);
  score->add_option("--out", score_out, "Scores CSV path");

  // eval
  auto* eval = app.add_subcommand("eval", "Compare predictions with ground truth");
  std::string eval_pred, eval_truth, eval_target = "users", eval_pop, eval_engagement, eval_out,
      eval_method = "unknown";
  bool content_truth = false;
  double threshold = 0.5;
  eval->add_option("--pred", eval_pred, "Scores table or id,score labels")->required();
  eval->add_option("--truth", eval_truth)->required();
  eval->add_option("--target", eval_target, "users | sources")->capture_default_str();
  eval->add_option("--popularity-truth", eval_pop);
  eval->add_option("--engagement", eval_engagement, "Source popularity truth from share totals");
  eval->add_flag("--content-truth", content_truth, "Truth holds source scores; users get their engagement-weighted mean");
  eval->add_option("--threshold", threshold)->capture_default_str();
  eval->add_option("--method", eval_method)->capture_default_str();
  eval->add_option("--out", eval_out, "Report JSON path");

  // recommend
  auto* rec = app.add_subcommand("recommend", "Sample sources inside a tolerance box");
  std::string rec_factors, rec_engagement, rec_truth, rec_user, rec_out, exclude = "true";
  ToleranceBox box;
  RecommendOptions rec_options;
  rec->add_option("--factors", rec_factors)->required();
  rec->add_option("--engagement", rec_engagement)->required();
  rec->add_option("--truth", rec_truth, "Anchor scores used to orient the axes");
  rec->add_option("--user", rec_user)->required();
  rec->add_option("--theta", box.theta)->capture_default_str();
  rec->add_option("--delta", box.delta)->capture_default_str();
  rec->add_option("--count", rec_options.count)->capture_default_str();
  rec->add_option("--seed", rec_options.seed)->capture_default_str();
  rec->add_option("--exclude-consumed", exclude, "true | false (bare flag means true)")
      ->expected(0, 1)
      ->default_str("true");
  rec->add_option("--out", rec_out, "Output JSON path");

  // export-space
  auto* exp = app.add_subcommand("export-space", "Write the space JSON and optionally serve it");
  std::string exp_factors, exp_engagement, exp_truth, exp_out, host = "127.0.0.1";
  int port = -1;
  exp->add_option("--factors", exp_factors)->required();
  exp->add_option("--engagement", exp_engagement)->required();
  exp->add_option("--truth", exp_truth, "Anchor scores used to orient the axes");
  exp->add_option("--out", exp_out, "Space JSON path");
  exp->add_option("--serve", port, "Serve GET /space and GET /recommend on this port");
  exp->add_option("--host", host)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*gen) {
      const SyntheticInstance inst = generate(spec);
      const SyntheticFiles files = write_instance(inst, gen_out);
      out << "wrote " << files.edges.string() << ", " << files.engagement.string() << ", "
          << files.user_truth.string() << ", " << files.source_truth.string() << "\n";
      return kExitOk;
    }

    if (*fit_cmd) {
      const Method method = parse_method(method_name);
      const InteractionMode mode = parse_interaction_mode(edge_mode);
      const SolverConfig config = fit_flags.config();
      const auto start = std::chrono::steady_clock::now();
      const fs::path factors = fit_to_dir(method, mode, edges, engagement, config, fit_out, out);
      const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
      Json manifest;
      manifest["tool"] = "ideofactor";
      manifest["version"] = kToolVersion;
      manifest["command"] = "fit";
      manifest["method"] = std::string(to_string(method));
      manifest["edge_mode"] = std::string(to_string(mode));
      manifest["config"] = config_json(config);
      manifest["inputs"] = Json{{"edges", file_entry(edges)}, {"engagement", file_entry(engagement)}};
      manifest["outputs"] = Json{{"factors", file_entry(factors)}};
      manifest["wall_clock_ms"] = elapsed.count();
      write_text(fs::path(fit_out) / "manifest.json", dump(manifest));
      return kExitOk;
    }

    if (*replay) {
      const Json m = read_json(manifest_path);
      try {
        const auto& inputs = m.at("inputs");
        for (const char* role : {"edges", "engagement"}) {
          const auto& entry = inputs.at(role);
          const fs::path p = entry.at("path").get<std::string>();
          if (sha256_file(p) != entry.at("sha256").get<std::string>())
            throw InputError("input " + p.string() + " changed since the manifest was written");
        }
        const Method method = parse_method(m.at("method").get<std::string>());
        const InteractionMode mode = parse_interaction_mode(m.at("edge_mode").get<std::string>());
        const SolverConfig config = config_from_json(m.at("config"));
        const fs::path factors =
            fit_to_dir(method, mode, inputs.at("edges").at("path").get<std::string>(),
                       inputs.at("engagement").at("path").get<std::string>(), config, replay_out, out);
        const std::string expected = m.at("outputs").at("factors").at("sha256").get<std::string>();
        const std::string actual = sha256_file(factors);
        if (actual != expected) {
          err << "replay mismatch: factors " << actual << " != " << expected << "\n";
          return kExitFailure;
        }
        out << "replay ok: factors sha256 " << actual << "\n";
        return kExitOk;
      } catch (const Json::exception& e) {
        throw InputError(manifest_path + ": " + e.what());
      }
    }

    if (*grid) {
      if (grid_truth.empty())
        throw InputError(
            "gridsearch needs --truth: selecting by objective value always picks alpha = beta = 0");
      if (grid_target != "users" && grid_target != "sources")
        throw InputError("--target must be users or sources");
      const std::vector<double> base_grid = grid_values.empty() ? kDefaultGrid : parse_grid(grid_values);
      const auto alphas = alpha_grid.empty() ? base_grid : parse_grid(alpha_grid);
      const auto betas = beta_grid.empty() ? base_grid : parse_grid(beta_grid);
      const LoadedInputs in = load_inputs(grid_edges, grid_engagement, parse_interaction_mode(grid_mode));
      const ScoreSeries truth = read_score_file(grid_truth);
      const GridReport report = grid_search(in.A, in.C, truth, grid_flags.config(), alphas, betas,
                                            grid_target == "sources", thread_cap());
      const std::string text = dump(to_json(report));
      if (!grid_out.empty()) write_text(grid_out, text);
      out << text;
      return kExitOk;
    }

    if (*score) {
      const FactorDocument doc = read_factor_document(score_factors);
      FactorSet f = doc.factors;
      const auto anchors = anchors_from(score_truth);
      if (!anchors.empty()) {
        if (f.k() != 2) throw InputError("--truth orientation needs k = 2");
        f = orient(f, doc.user_ids, doc.source_ids, anchors).factors;
      }
      const ScoredSpace space = score_all(f, doc.user_ids, doc.source_ids, {normalize});
      const std::string table = scores_table(space);
      if (!score_out.empty()) write_text(score_out, table);
      else out << table;
      return kExitOk;
    }

    if (*eval) {
      if (eval_target != "users" && eval_target != "sources")
        throw InputError("--target must be users or sources");
      const bool sources = eval_target == "sources";
      const Prediction pred = prediction_from_file(eval_pred, sources);
      ScoreSeries truth = read_score_file(eval_truth);
      std::optional<EngagementMatrix> c;
      if (!eval_engagement.empty()) c = build_engagement_matrix(read_engagement_file(eval_engagement));
      if (content_truth) {
        if (!c) throw InputError("--content-truth needs --engagement");
        if (sources) throw InputError("--content-truth applies to --target users");
        truth = avg_content_truth(*c, truth);
      }
      std::optional<ScoreSeries> pop;
      if (!eval_pop.empty()) {
        pop = read_score_file(eval_pop);
      } else if (sources && c) {
        std::vector<double> totals(c->source_ids().size());
        for (Index j = 0; j < c->m(); ++j) totals[static_cast<std::size_t>(j)] = c->values().col(j).sum();
        pop = ScoreSeries(c->source_ids(), totals);
      }
      EvaluationReport report = evaluate(pred, truth, pop ? &*pop : nullptr, threshold);
      report.method = eval_method;
      report.target = eval_target;
      const std::string text = dump(to_json(report));
      if (!eval_out.empty()) write_text(eval_out, text);
      out << text;
      return kExitOk;
    }

    if (*rec) {
      rec_options.exclude_consumed = parse_bool(exclude);
      const FactorDocument doc = read_factor_document(rec_factors);
      const EngagementMatrix c = build_engagement_matrix(read_engagement_file(rec_engagement));
      const auto anchors = anchors_from(rec_truth);
      const Explorer explorer(doc, c, anchors);
      const std::string text = dump(explorer.recommend_json(rec_user, box, rec_options));
      if (!rec_out.empty()) write_text(rec_out, text);
      out << text;
      return kExitOk;
    }

    if (*exp) {
      const FactorDocument doc = read_factor_document(exp_factors);
      const EngagementMatrix c = build_engagement_matrix(read_engagement_file(exp_engagement));
      const auto anchors = anchors_from(exp_truth);
      auto explorer = std::make_shared<const Explorer>(doc, c, anchors);
      if (!exp_out.empty()) write_text(exp_out, dump(explorer->space_json()));
      if (port < 0) {
        if (exp_out.empty()) out << dump(explorer->space_json());
        return kExitOk;
      }
      SpaceServer server(explorer);
      const int bound = server.bind(host, port);
      if (bound < 0) throw InputError("cannot bind " + host + ":" + std::to_string(port));
      out << "serving http://" << host << ":" << bound << " (GET /space, GET /recommend)" << std::endl;
      server.serve();
      return kExitOk;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const InsufficientOverlapError& e) {
    err << "insufficient overlap: " << e.what() << "\n";
    return kExitOverlap;
  } catch (const ZeroVarianceError& e) {
    err << "insufficient overlap: " << e.what() << "\n";
    return kExitOverlap;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace ideofactor
