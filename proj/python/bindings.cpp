#include "ideofactor/baselines.hpp"
#include "ideofactor/cli.hpp"
#include "ideofactor/error.hpp"
#include "ideofactor/metrics.hpp"
#include "ideofactor/pipeline.hpp"
#include "ideofactor/scoring.hpp"
#include "ideofactor/solver.hpp"
#include "ideofactor/synthetic.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace ideofactor;

namespace {

py::dict factors_dict(const FactorSet& f) {
  py::dict d;
  d["U"] = f.U;
  d["V"] = f.V;
  d["Hu"] = f.Hu;
  d["Hs"] = f.Hs;
  return d;
}

py::dict baseline_dict(const BaselineResult& r) {
  py::dict d;
  d["method"] = std::string(to_string(r.method));
  d["row_factors"] = r.row_factors;
  d["col_factors"] = r.col_factors;
  d["mid_factor"] = r.mid_factor;
  d["objective_trace"] = r.objective_trace;
  d["iterations_run"] = r.iterations_run;
  d["converged"] = r.converged;
  return d;
}

LabeledPartition partition(const std::vector<int>& labels) { return LabeledPartition(labels); }

std::vector<Anchor> anchors_of(const std::optional<std::filesystem::path>& truth) {
  std::vector<Anchor> out;
  if (!truth) return out;
  const ScoreSeries s = read_score_file(*truth);
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back({s.ids[i], s.values[i]});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Joint non-negative factorization of interaction and engagement matrices";
  m.attr("__version__") = kToolVersion;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<InsufficientOverlapError>(m, "InsufficientOverlapError", PyExc_ValueError);
  py::register_exception<ZeroVarianceError>(m, "ZeroVarianceError", PyExc_ValueError);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init([](int k, double alpha, double beta, int max_iters, double rel_tol, std::uint64_t seed,
                       double eps) {
             SolverConfig c;
             c.k = k;
             c.alpha = alpha;
             c.beta = beta;
             c.max_iters = max_iters;
             c.rel_tol = rel_tol;
             c.seed = seed;
             c.eps = eps;
             c.validate();
             return c;
           }),
           py::arg("k") = 2, py::arg("alpha") = 0.0, py::arg("beta") = 0.0, py::arg("max_iters") = 500,
           py::arg("rel_tol") = 1e-6, py::arg("seed") = 0, py::arg("eps") = 1e-12)
      .def_readwrite("k", &SolverConfig::k)
      .def_readwrite("alpha", &SolverConfig::alpha)
      .def_readwrite("beta", &SolverConfig::beta)
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("rel_tol", &SolverConfig::rel_tol)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("eps", &SolverConfig::eps);

  m.def(
      "fit",
      [](const MatrixXd& a, const MatrixXd& c, const SolverConfig& config) {
        FitResult r;
        {
          py::gil_scoped_release release;
          r = fit(a, c, config);
        }
        py::dict d = factors_dict(r.factors);
        d["objective_trace"] = r.report.objective_trace;
        d["iterations_run"] = r.report.iterations_run;
        d["converged"] = r.report.converged;
        d["final_objective"] = r.report.final_objective;
        d["warnings"] = r.report.warnings;
        return d;
      },
      py::arg("A"), py::arg("C"), py::arg("config") = SolverConfig{},
      "Fit the joint model; returns U, V, Hu, Hs and the objective trace.");

  m.def("fit_nmf_symm", [](const MatrixXd& x, const SolverConfig& c) { return baseline_dict(fit_nmf_symm(x, c)); },
        py::arg("X"), py::arg("config") = SolverConfig{});
  m.def("fit_onmtf", [](const MatrixXd& x, const SolverConfig& c) { return baseline_dict(fit_onmtf(x, c)); },
        py::arg("X"), py::arg("config") = SolverConfig{});
  m.def(
      "fit_dmcc",
      [](const MatrixXd& x, double alpha, double beta, const SolverConfig& c) {
        return baseline_dict(fit_dmcc(x, alpha, beta, c));
      },
      py::arg("X"), py::arg("alpha"), py::arg("beta"), py::arg("config") = SolverConfig{});
  m.def(
      "fit_ifd_ngr",
      [](const MatrixXd& a, const MatrixXd& c, const SolverConfig& config) {
        return baseline_dict(fit_ifd_ngr(a, c, config));
      },
      py::arg("A"), py::arg("C"), py::arg("config") = SolverConfig{});

  m.def("ideology_score", &ideology_score, py::arg("x"), py::arg("y"));
  m.def("popularity_score", &popularity_score, py::arg("x"), py::arg("y"));
  m.def("hard_clusters", &hard_clusters, py::arg("factor"));

  m.def("affinity_rows", [](const MatrixXd& x) { return affinity_rows(x).values; }, py::arg("X"));
  m.def("affinity_cols", [](const MatrixXd& x) { return affinity_cols(x).values; }, py::arg("X"));
  m.def("laplacian", [](const MatrixXd& w) { return laplacian(w).values; }, py::arg("W"));

  m.def("purity", [](const std::vector<int>& p, const std::vector<int>& t) { return purity(partition(p), partition(t)); },
        py::arg("pred"), py::arg("truth"));
  m.def(
      "adjusted_rand_index",
      [](const std::vector<int>& p, const std::vector<int>& t) {
        return adjusted_rand_index(partition(p), partition(t));
      },
      py::arg("pred"), py::arg("truth"));
  m.def(
      "mutual_information_scores",
      [](const std::vector<int>& p, const std::vector<int>& t) {
        const auto s = mutual_information_scores(partition(p), partition(t));
        py::dict d;
        d["mi"] = s.mi;
        d["nmi"] = s.nmi;
        d["ami"] = s.ami;
        return d;
      },
      py::arg("pred"), py::arg("truth"));
  m.def(
      "pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
      py::arg("x"), py::arg("y"));

  m.def(
      "generate",
      [](int n_users, int m_sources, double block_fraction, double p_in, double p_out, double lambda_in,
         double lambda_out, double ideology_spread, std::uint64_t seed) {
        SyntheticSpec spec;
        spec.n_users = n_users;
        spec.m_sources = m_sources;
        spec.block_fraction = block_fraction;
        spec.p_in = p_in;
        spec.p_out = p_out;
        spec.lambda_in = lambda_in;
        spec.lambda_out = lambda_out;
        spec.ideology_spread = ideology_spread;
        spec.seed = seed;
        const SyntheticInstance inst = generate(spec);
        py::dict d;
        d["A"] = inst.A.values();
        d["C"] = inst.C.values();
        d["user_ids"] = inst.A.user_ids();
        d["source_ids"] = inst.C.source_ids();
        d["user_blocks"] = inst.user_blocks;
        d["source_blocks"] = inst.source_blocks;
        d["user_ideology"] = inst.user_ideology;
        d["source_ideology"] = inst.source_ideology;
        return d;
      },
      py::arg("n_users") = 200, py::arg("m_sources") = 60, py::arg("block_fraction") = 0.5, py::arg("p_in") = 0.10,
      py::arg("p_out") = 0.01, py::arg("lambda_in") = 3.0, py::arg("lambda_out") = 0.2,
      py::arg("ideology_spread") = 0.15, py::arg("seed") = 0);

  py::class_<Explorer, std::shared_ptr<Explorer>>(m, "Explorer")
      .def(py::init([](const std::filesystem::path& factors, const std::filesystem::path& engagement,
                       const std::optional<std::filesystem::path>& truth) {
             const FactorDocument doc = read_factor_document(factors);
             const EngagementMatrix c = build_engagement_matrix(read_engagement_file(engagement));
             return std::make_shared<Explorer>(doc, c, anchors_of(truth));
           }),
           py::arg("factors"), py::arg("engagement"), py::arg("truth") = py::none())
      .def_property_readonly("flipped", &Explorer::flipped)
      .def("space_json", [](const Explorer& e) { return dump(e.space_json()); })
      .def(
          "recommend_json",
          [](const Explorer& e, const std::string& user, double theta, double delta, int count, std::uint64_t seed,
             bool exclude_consumed) {
            RecommendOptions o;
            o.count = count;
            o.seed = seed;
            o.exclude_consumed = exclude_consumed;
            return dump(e.recommend_json(user, ToleranceBox{theta, delta}, o));
          },
          py::arg("user"), py::arg("theta") = 0.1, py::arg("delta") = 0.1, py::arg("count") = 10,
          py::arg("seed") = 0, py::arg("exclude_consumed") = true);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run the command line in-process; returns (exit_code, stdout, stderr).");
}
