#include "fixtures.hpp"

#include "ideofactor/cli.hpp"
#include "ideofactor/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace ideofactor;
using fixture::read_text;
using fixture::TempDir;
using fixture::write_text;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Generates the default instance (seed 3) into `dir`.
void generate_into(const TempDir& dir, const std::string& extra_seed = "3") {
  REQUIRE(cli({"generate", "--seed", extra_seed, "--out", dir.path().string()}).code == kExitOk);
}

std::string p(const TempDir& dir, const std::string& file) { return (dir / file).string(); }

// alpha = beta = 1 and seed 7 unless `extra` sets them.
Run fit_into(const TempDir& dir, const std::string& out, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"fit", "--edges", p(dir, "edges.tsv"), "--engagement", p(dir, "engagement.tsv"),
                                "--out", p(dir, out)};
  for (const char* flag : {"--alpha", "--beta"})
    if (std::find(extra.begin(), extra.end(), flag) == extra.end()) args.insert(args.end(), {flag, "1"});
  if (std::find(extra.begin(), extra.end(), "--seed") == extra.end()) args.insert(args.end(), {"--seed", "7"});
  args.insert(args.end(), extra.begin(), extra.end());
  return cli(args);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and version exit cleanly") {
  CHECK(cli({"--help"}).code == kExitOk);
  const auto v = cli({"--version"});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find(kToolVersion) != std::string::npos);
  CHECK(cli({}).code == kExitInput);
  CHECK(cli({"fit", "--bogus"}).code == kExitInput);
}

TEST_CASE("fit is byte-identical across runs and replays") {
  TempDir dir("cli_fit");
  generate_into(dir);
  REQUIRE(fit_into(dir, "a").code == kExitOk);
  REQUIRE(fit_into(dir, "b").code == kExitOk);
  CHECK(read_text(dir / "a/factors.json") == read_text(dir / "b/factors.json"));
  const Json manifest = read_json(dir / "a/manifest.json");
  CHECK(manifest["config"]["alpha"] == 1.0);
  CHECK(manifest["outputs"]["factors"]["sha256"] == sha256_file(dir / "a/factors.json"));

  const auto replay = cli({"replay", "--manifest", p(dir, "a/manifest.json"), "--out", p(dir, "r")});
  CHECK(replay.code == kExitOk);
  CHECK(read_text(dir / "r/factors.json") == read_text(dir / "a/factors.json"));

  write_text(dir / "engagement.tsv", read_text(dir / "engagement.tsv") + "u000\ts000\t1\n");
  CHECK(cli({"replay", "--manifest", p(dir, "a/manifest.json"), "--out", p(dir, "r2")}).code == kExitInput);
}

TEST_CASE("dmcc without regularization traces like onmtf") {
  TempDir dir("cli_dmcc");
  generate_into(dir);
  REQUIRE(fit_into(dir, "d", {"--method", "dmcc", "--alpha", "0", "--beta", "0"}).code == kExitOk);
  REQUIRE(fit_into(dir, "o", {"--method", "onmtf"}).code == kExitOk);
  const auto d = read_factor_document(dir / "d/factors.json");
  const auto o = read_factor_document(dir / "o/factors.json");
  CHECK(d.objective_trace == o.objective_trace);
  CHECK(d.factors.U == o.factors.U);
}

TEST_CASE("the full pipeline recovers the planted sides") {
  TempDir dir("cli_full");
  generate_into(dir);
  REQUIRE(fit_into(dir, "f").code == kExitOk);
  const auto score = cli({"score", "--factors", p(dir, "f/factors.json"), "--truth", p(dir, "user_truth.csv"),
                          "--out", p(dir, "scores.csv")});
  REQUIRE(score.code == kExitOk);
  const auto users = cli({"eval", "--pred", p(dir, "scores.csv"), "--truth", p(dir, "user_truth.csv")});
  REQUIRE(users.code == kExitOk);
  CHECK(Json::parse(users.out)["purity"].get<double>() >= 0.95);
  const auto sources = cli({"eval", "--pred", p(dir, "scores.csv"), "--truth", p(dir, "source_truth.csv"),
                            "--target", "sources", "--engagement", p(dir, "engagement.tsv")});
  REQUIRE(sources.code == kExitOk);
  const Json s = Json::parse(sources.out);
  CHECK(s["purity"].get<double>() >= 0.9);
  CHECK_FALSE(s["corr_rho"].is_null());
}

TEST_CASE("eval of a label file against itself is perfect") {
  TempDir dir("cli_eval");
  write_text(dir / "l.csv", "id,score\na,0.1\nb,0.2\nc,0.8\nd,0.9\n");
  const auto r = cli({"eval", "--pred", p(dir, "l.csv"), "--truth", p(dir, "l.csv")});
  REQUIRE(r.code == kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["purity"] == 1.0);
  CHECK(j["ari"] == 1.0);
  CHECK(j["corr_i"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("eval without overlap exits 4") {
  TempDir dir("cli_overlap");
  write_text(dir / "a.csv", "a,0.1\nb,0.9\n");
  write_text(dir / "b.csv", "c,0.1\nd,0.9\n");
  const auto r = cli({"eval", "--pred", p(dir, "a.csv"), "--truth", p(dir, "b.csv")});
  CHECK(r.code == kExitOverlap);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("input errors exit 2") {
  TempDir dir("cli_input");
  write_text(dir / "bad.tsv", "a\tb\n");
  write_text(dir / "c.tsv", "a\ts\t1\n");
  CHECK(cli({"fit", "--edges", p(dir, "bad.tsv"), "--engagement", p(dir, "c.tsv"), "--out", p(dir, "o")}).code ==
        kExitInput);
  CHECK(cli({"fit", "--edges", p(dir, "missing.tsv"), "--engagement", p(dir, "c.tsv"), "--out", p(dir, "o")})
            .code == kExitInput);
  CHECK(cli({"score", "--factors", p(dir, "c.tsv")}).code == kExitInput);
  generate_into(dir);
  CHECK(fit_into(dir, "o", {"--method", "svd"}).code == kExitInput);
  CHECK(fit_into(dir, "o", {"--k", "0"}).code == kExitInput);
}

TEST_CASE("divergent fits exit 3") {
  TempDir dir("cli_numeric");
  generate_into(dir);
  const auto r = fit_into(dir, "o", {"--alpha", "100"});
  CHECK(r.code == kExitNumeric);
  CHECK(r.err.find("iteration") != std::string::npos);
}

TEST_CASE("gridsearch refuses to run without validation labels") {
  TempDir dir("cli_grid");
  generate_into(dir);
  const auto refused = cli({"gridsearch", "--edges", p(dir, "edges.tsv"), "--engagement", p(dir, "engagement.tsv")});
  CHECK(refused.code == kExitInput);
  CHECK(refused.err.find("--truth") != std::string::npos);
  const auto ok = cli({"gridsearch", "--edges", p(dir, "edges.tsv"), "--engagement", p(dir, "engagement.tsv"),
                       "--truth", p(dir, "user_truth.csv"), "--grid", "0,1", "--out", p(dir, "grid.json")});
  REQUIRE(ok.code == kExitOk);
  const Json j = read_json(dir / "grid.json");
  CHECK(j["cells"].size() == 4);
  CHECK(j["best"]["purity"].get<double>() >= 0.9);
}

TEST_CASE("recommend output is deterministic and respects the box") {
  TempDir dir("cli_rec");
  generate_into(dir);
  REQUIRE(fit_into(dir, "f").code == kExitOk);
  const std::vector<std::string> base{"recommend", "--factors", p(dir, "f/factors.json"), "--engagement",
                                      p(dir, "engagement.tsv"), "--truth", p(dir, "user_truth.csv"),
                                      "--user", "u000"};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return cli(args);
  };
  const auto a = with({"--theta", "0.3", "--delta", "2", "--count", "5", "--seed", "11"});
  const auto b = with({"--theta", "0.3", "--delta", "2", "--count", "5", "--seed", "11"});
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(Json::parse(a.out)["items"].size() <= 5);

  const auto none = with({"--theta", "0", "--delta", "0"});
  REQUIRE(none.code == kExitOk);
  CHECK(Json::parse(none.out)["items"].empty());

  CHECK(with({"--exclude-consumed", "maybe"}).code == kExitInput);
  const auto bare = with({"--theta", "0.3", "--delta", "2", "--count", "5", "--seed", "11", "--exclude-consumed"});
  REQUIRE(bare.code == kExitOk);
  CHECK(bare.out == a.out);
  CHECK(with({"--theta", "-1"}).code == kExitInput);
  auto unknown = base;
  unknown.back() = "nobody";
  CHECK(cli(unknown).code == kExitInput);
}

TEST_CASE("export-space writes the space JSON") {
  TempDir dir("cli_export");
  generate_into(dir);
  REQUIRE(fit_into(dir, "f").code == kExitOk);
  const auto r = cli({"export-space", "--factors", p(dir, "f/factors.json"), "--engagement",
                      p(dir, "engagement.tsv"), "--out", p(dir, "space.json")});
  REQUIRE(r.code == kExitOk);
  const Json j = read_json(dir / "space.json");
  CHECK(j["users"].size() == 200);
  CHECK(j["sources"].size() == 60);
  CHECK_FALSE(j["edges"].empty());
}

}  // TEST_SUITE
