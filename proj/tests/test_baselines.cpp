#include "fixtures.hpp"
#include "oracles.hpp"

#include "ideofactor/baselines.hpp"
#include "ideofactor/error.hpp"
#include "ideofactor/metrics.hpp"
#include "ideofactor/scoring.hpp"
#include "ideofactor/synthetic.hpp"

#include <doctest.h>

using namespace ideofactor;

namespace {

// Rows [0, p/2) and columns [0, q/2) form block 0.
MatrixXd noisy_bipartite(Index p, Index q, double in, double out, std::uint64_t seed) {
  Rng rng(seed);
  MatrixXd x(p, q);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < q; ++j) x(i, j) = rng.poisson(((i < p / 2) == (j < q / 2)) ? in : out);
  return x;
}

std::vector<int> halves(Index count) {
  std::vector<int> labels;
  for (Index i = 0; i < count; ++i) labels.push_back(i < count / 2 ? 0 : 1);
  return labels;
}

double purity_of(const MatrixXd& factor, const std::vector<int>& truth) {
  return purity(LabeledPartition(hard_clusters(factor)), LabeledPartition(truth));
}

bool nonnegative(const BaselineResult& r) {
  bool ok = r.row_factors.allFinite() && r.row_factors.minCoeff() >= 0.0;
  if (r.col_factors) ok = ok && r.col_factors->allFinite() && r.col_factors->minCoeff() >= 0.0;
  if (r.mid_factor) ok = ok && r.mid_factor->allFinite() && r.mid_factor->minCoeff() >= 0.0;
  return ok;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("nmf-symm recovers two all-ones blocks") {
  MatrixXd x = MatrixXd::Zero(10, 10);
  x.topLeftCorner(4, 4).setOnes();
  x.bottomRightCorner(6, 6).setOnes();
  SolverConfig c;
  c.seed = 3;
  const auto r = fit_nmf_symm(x, c);
  CHECK(r.method == BaselineMethod::NmfSymm);
  CHECK(nonnegative(r));
  const auto labels = hard_clusters(r.row_factors);
  std::vector<int> truth{0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
  CHECK(purity(LabeledPartition(labels), LabeledPartition(truth)) == 1.0);
  CHECK(LabeledPartition(labels).n_clusters() == 2);
}

TEST_CASE("nmf-symm fits a rank-one matrix") {
  Rng rng(8);
  VectorXd v(12);
  for (Index i = 0; i < v.size(); ++i) v(i) = 0.2 + rng.uniform();
  const MatrixXd x = v * v.transpose();
  SolverConfig c;
  c.k = 1;
  c.max_iters = 20000;
  c.rel_tol = 1e-14;
  const auto r = fit_nmf_symm(x, c);
  CHECK(r.objective_trace.back() <= 1e-6 * x.squaredNorm());
}

TEST_CASE("nmf-symm on the zero matrix") {
  const auto r = fit_nmf_symm(MatrixXd::Zero(5, 5), SolverConfig{});
  CHECK(r.objective_trace.back() == 0.0);
  CHECK(nonnegative(r));
}

TEST_CASE("nmf-symm rejects asymmetric input") {
  MatrixXd x = MatrixXd::Zero(3, 3);
  x(0, 1) = 1.0;
  CHECK_THROWS_AS(fit_nmf_symm(x, SolverConfig{}), InputError);
}

TEST_CASE("onmtf recovers a planted co-cluster") {
  const MatrixXd x = noisy_bipartite(30, 20, 3.0, 0.0, 1);
  SolverConfig c;
  c.seed = 1;
  const auto r = fit_onmtf(x, c);
  CHECK(nonnegative(r));
  REQUIRE(r.col_factors);
  CHECK(purity_of(r.row_factors, halves(30)) == 1.0);
  CHECK(purity_of(*r.col_factors, halves(20)) == 1.0);
}

TEST_CASE("onmtf on identical rows lowers the objective") {
  MatrixXd x(6, 4);
  for (Index i = 0; i < 6; ++i) x.row(i) << 1, 3, 0, 2;
  const auto r = fit_onmtf(x, SolverConfig{});
  CHECK(nonnegative(r));
  CHECK(r.objective_trace.back() < r.objective_trace.front());
}

TEST_CASE("baselines are deterministic") {
  const MatrixXd x = noisy_bipartite(20, 12, 3.0, 0.5, 2);
  SolverConfig c;
  c.seed = 5;
  CHECK(fit_onmtf(x, c).objective_trace == fit_onmtf(x, c).objective_trace);
  CHECK(fit_dmcc(x, 1, 1, c).objective_trace == fit_dmcc(x, 1, 1, c).objective_trace);
  const MatrixXd s = x * x.transpose();
  CHECK(fit_nmf_symm(s, c).objective_trace == fit_nmf_symm(s, c).objective_trace);
}

TEST_CASE("dmcc without regularization is onmtf, bitwise") {
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const MatrixXd x = noisy_bipartite(24, 16, 3.0, 0.4, seed);
    SolverConfig c;
    c.seed = seed;
    const auto a = fit_dmcc(x, 0.0, 0.0, c);
    const auto b = fit_onmtf(x, c);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK(a.row_factors == b.row_factors);
  }
}

TEST_CASE("ifd-ngr is fit without regularization, bitwise") {
  SyntheticSpec spec;
  spec.seed = 3;
  const auto inst = generate(spec);
  SolverConfig c;
  c.seed = 3;
  c.alpha = 5.0;  // ignored by ifd-ngr
  c.beta = 5.0;
  const auto ngr = fit_ifd_ngr(inst.A.values(), inst.C.values(), c);
  c.alpha = c.beta = 0.0;
  const auto plain = fit(inst.A.values(), inst.C.values(), c);
  CHECK(ngr.objective_trace == plain.report.objective_trace);
  CHECK(ngr.row_factors == plain.factors.U);
  CHECK(*ngr.col_factors == plain.factors.V);
  CHECK(*ngr.mid_factor == plain.factors.Hs);
}

TEST_CASE("dmcc is at least as pure as onmtf on noisy co-clusters") {
  double dmcc = 0.0, onmtf = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const MatrixXd x = noisy_bipartite(100, 40, 3.0, 1.5, 100 + seed);
    SolverConfig c;
    c.seed = seed;
    dmcc += purity_of(fit_dmcc(x, 1.0, 1.0, c).row_factors, halves(100));
    onmtf += purity_of(fit_onmtf(x, c).row_factors, halves(100));
  }
  MESSAGE("mean row purity dmcc=" << dmcc / 10 << " onmtf=" << onmtf / 10);
  CHECK(dmcc >= onmtf);
}

}  // TEST_SUITE
