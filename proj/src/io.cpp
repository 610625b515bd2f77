#include "ideofactor/io.hpp"

#include "ideofactor/error.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ideofactor {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  return in;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot write file");
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(std::string_view(line).substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

[[noreturn]] void fail(const fs::path& path, std::size_t line, const std::string& msg) {
  throw InputError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

// Calls `row(fields, line_no)` for every non-blank, non-comment line.
template <class F>
void for_each_record(const fs::path& path, char sep, F&& row) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    row(split(t, sep), line_no);
  }
}

double parse_weight(const fs::path& path, std::size_t line_no, const std::string& field) {
  double w = 0.0;
  if (!parse_double(field, w)) fail(path, line_no, "weight '" + field + "' is not a number");
  if (w < 0.0) fail(path, line_no, "negative weight " + field);
  return w;
}

// Shortest text that reads back to the same double.
std::string format_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Json matrix_json(const MatrixXd& x) {
  Json rows = Json::array();
  for (Index i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const Json& j, const char* name) {
  if (j.is_null()) return {};
  if (!j.is_array()) throw InputError(std::string("factor field '") + name + "' must be an array of rows");
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) return {};
  const Index cols = static_cast<Index>(j.at(0).size());
  MatrixXd x(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw InputError(std::string("factor field '") + name + "' is ragged");
    for (Index c = 0; c < cols; ++c) x(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return x;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

std::vector<Edge> read_edge_file(const fs::path& path) {
  std::vector<Edge> edges;
  for_each_record(path, '\t', [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 3) fail(path, line, "expected src<TAB>dst<TAB>weight, got " + std::to_string(f.size()) + " fields");
    if (f[0].empty() || f[1].empty()) fail(path, line, "empty id");
    edges.push_back({f[0], f[1], parse_weight(path, line, f[2])});
  });
  return edges;
}

std::vector<Edge> read_follow_file(const fs::path& path) {
  std::vector<Edge> edges;
  for_each_record(path, '\t', [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 2) fail(path, line, "expected user<TAB>followee, got " + std::to_string(f.size()) + " fields");
    if (f[0].empty() || f[1].empty()) fail(path, line, "empty id");
    edges.push_back({f[0], f[1], 1.0});
  });
  return edges;
}

std::vector<Engagement> read_engagement_file(const fs::path& path) {
  std::vector<Engagement> records;
  for_each_record(path, '\t', [&](const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != 3) fail(path, line, "expected user<TAB>source<TAB>count, got " + std::to_string(f.size()) + " fields");
    if (f[0].empty() || f[1].empty()) fail(path, line, "empty id");
    records.push_back({f[0], f[1], parse_weight(path, line, f[2])});
  });
  return records;
}

ScoreSeries read_score_file(const fs::path& path) {
  std::vector<std::string> ids;
  std::vector<double> values;
  bool first = true;
  for_each_record(path, ',', [&](std::vector<std::string> f, std::size_t line) {
    if (f.size() == 1) f = split(f[0], '\t');
    if (f.size() != 2) fail(path, line, "expected id,score");
    double v = 0.0;
    if (!parse_double(f[1], v)) {
      if (first) {
        first = false;
        return;
      }
      fail(path, line, "score '" + f[1] + "' is not a number");
    }
    first = false;
    ids.push_back(f[0]);
    values.push_back(v);
  });
  try {
    return ScoreSeries(std::move(ids), std::move(values));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_edge_file(const fs::path& path, const std::vector<Edge>& edges) {
  auto out = open_output(path);
  out << "# src\tdst\tweight\n";
  for (const auto& e : edges) out << e.src << '\t' << e.dst << '\t' << format_number(e.weight) << '\n';
}

void write_engagement_file(const fs::path& path, const std::vector<Engagement>& records) {
  auto out = open_output(path);
  out << "# user\tsource\tcount\n";
  for (const auto& r : records) out << r.user << '\t' << r.source << '\t' << format_number(r.count) << '\n';
}

void write_score_file(const fs::path& path, const ScoreSeries& scores) {
  auto out = open_output(path);
  out << "id,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) out << scores.ids[i] << ',' << format_number(scores.values[i]) << '\n';
}

Json to_json(const FactorDocument& doc) {
  const FactorSet& f = doc.factors;
  Json j;
  j["method"] = doc.method;
  j["n"] = f.U.rows();
  j["m"] = f.V.rows();
  j["k"] = f.U.cols();
  j["U"] = matrix_json(f.U);
  j["V"] = f.V.size() ? matrix_json(f.V) : Json(nullptr);
  j["Hu"] = f.Hu.size() ? matrix_json(f.Hu) : Json(nullptr);
  j["Hs"] = f.Hs.size() ? matrix_json(f.Hs) : Json(nullptr);
  j["config"] = {{"k", doc.config.k},
                 {"alpha", doc.config.alpha},
                 {"beta", doc.config.beta},
                 {"max_iters", doc.config.max_iters},
                 {"rel_tol", doc.config.rel_tol},
                 {"seed", doc.config.seed},
                 {"eps", doc.config.eps}};
  j["objective_trace"] = doc.objective_trace;
  j["iterations_run"] = doc.iterations_run;
  j["converged"] = doc.converged;
  j["user_ids"] = doc.user_ids;
  j["source_ids"] = doc.source_ids;
  return j;
}

FactorDocument factor_document_from_json(const Json& j) {
  try {
    FactorDocument doc;
    doc.method = j.value("method", std::string("ifd"));
    doc.factors.U = matrix_from_json(j.at("U"), "U");
    doc.factors.V = matrix_from_json(j.value("V", Json(nullptr)), "V");
    doc.factors.Hu = matrix_from_json(j.value("Hu", Json(nullptr)), "Hu");
    doc.factors.Hs = matrix_from_json(j.value("Hs", Json(nullptr)), "Hs");
    if (j.contains("config")) {
      const Json& c = j.at("config");
      doc.config.k = c.value("k", doc.config.k);
      doc.config.alpha = c.value("alpha", doc.config.alpha);
      doc.config.beta = c.value("beta", doc.config.beta);
      doc.config.max_iters = c.value("max_iters", doc.config.max_iters);
      doc.config.rel_tol = c.value("rel_tol", doc.config.rel_tol);
      doc.config.seed = c.value("seed", doc.config.seed);
      doc.config.eps = c.value("eps", doc.config.eps);
    }
    doc.objective_trace = j.value("objective_trace", std::vector<double>{});
    doc.iterations_run = j.value("iterations_run", 0);
    doc.converged = j.value("converged", false);
    doc.user_ids = j.value("user_ids", std::vector<std::string>{});
    doc.source_ids = j.value("source_ids", std::vector<std::string>{});

    const Index n = j.at("n").get<Index>();
    const Index m = j.at("m").get<Index>();
    const Index k = j.at("k").get<Index>();
    const FactorSet& f = doc.factors;
    if (f.U.rows() != n || f.U.cols() != k) throw InputError("U shape does not match n, k");
    if (f.V.size() && (f.V.rows() != m || f.V.cols() != k)) throw InputError("V shape does not match m, k");
    if (f.Hu.size() && (f.Hu.rows() != k || f.Hu.cols() != k)) throw InputError("Hu must be k x k");
    if (f.Hs.size() && (f.Hs.rows() != k || f.Hs.cols() != k)) throw InputError("Hs must be k x k");
    if (!doc.user_ids.empty() && static_cast<Index>(doc.user_ids.size()) != n)
      throw InputError("user_ids length does not match n");
    if (!doc.source_ids.empty() && static_cast<Index>(doc.source_ids.size()) != m)
      throw InputError("source_ids length does not match m");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed factor document: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const fs::path& path, const Json& j) {
  auto out = open_output(path);
  out << dump(j);
}

Json read_json(const fs::path& path) {
  auto in = open_input(path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

FactorDocument read_factor_document(const fs::path& path) {
  try {
    return factor_document_from_json(read_json(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json to_json(const ScoredEntity& e) {
  Json j;
  j["id"] = e.id;
  j["kind"] = std::string(to_string(e.kind));
  j["latent"] = e.latent;
  j["ideology"] = optional_number(e.ideology);
  j["popularity"] = optional_number(e.popularity);
  j["cluster"] = e.cluster;
  j["degenerate"] = e.degenerate;
  return j;
}

std::string scores_table(const ScoredSpace& space) {
  std::ostringstream out;
  out << "id,kind,ideology,popularity,cluster,degenerate\n";
  auto rows = [&](const std::vector<ScoredEntity>& entities) {
    for (const auto& e : entities) {
      out << e.id << ',' << to_string(e.kind) << ',';
      if (e.ideology) out << format_number(*e.ideology);
      out << ',';
      if (e.popularity) out << format_number(*e.popularity);
      out << ',' << e.cluster << ',' << (e.degenerate ? 1 : 0) << '\n';
    }
  };
  rows(space.users);
  rows(space.sources);
  return out.str();
}

void write_scores_table(const fs::path& path, const ScoredSpace& space) {
  auto out = open_output(path);
  out << scores_table(space);
}

ScoredSpace read_scores_table(const fs::path& path) {
  ScoredSpace space;
  bool header = true;
  for_each_record(path, ',', [&](const std::vector<std::string>& f, std::size_t line) {
    if (header) {
      header = false;
      if (f.size() == 6 && f[0] == "id") return;
    }
    if (f.size() != 6) fail(path, line, "expected id,kind,ideology,popularity,cluster,degenerate");
    ScoredEntity e;
    e.id = f[0];
    if (f[1] == "user") e.kind = EntityKind::User;
    else if (f[1] == "source") e.kind = EntityKind::Source;
    else fail(path, line, "kind must be 'user' or 'source'");
    double v = 0.0;
    if (!f[2].empty()) {
      if (!parse_double(f[2], v)) fail(path, line, "bad ideology '" + f[2] + "'");
      e.ideology = v;
    }
    if (!f[3].empty()) {
      if (!parse_double(f[3], v)) fail(path, line, "bad popularity '" + f[3] + "'");
      e.popularity = v;
    }
    if (!parse_double(f[4], v) || v < 0.0 || v != std::floor(v)) fail(path, line, "bad cluster '" + f[4] + "'");
    e.cluster = static_cast<int>(v);
    e.degenerate = f[5] == "1" || f[5] == "true";
    (e.kind == EntityKind::User ? space.users : space.sources).push_back(std::move(e));
  });
  return space;
}

Json space_json(const ScoredSpace& space, const std::vector<UserPosition>& positions,
                const EngagementMatrix& c) {
  // Positions exist only for k = 2 factorizations.
  if (!positions.empty() && positions.size() != space.users.size())
    throw InputError("one position per user is required");
  Json users = Json::array();
  for (std::size_t i = 0; i < space.users.size(); ++i) {
    Json u = to_json(space.users[i]);
    if (!positions.empty())
      u["position"] = {{"ideology", positions[i].ideology},
                       {"popularity", positions[i].popularity},
                       {"fallback", positions[i].fallback}};
    users.push_back(std::move(u));
  }
  Json sources = Json::array();
  for (const auto& s : space.sources) sources.push_back(to_json(s));
  Json edges = Json::array();
  for (Index u = 0; u < c.n(); ++u)
    for (Index s = 0; s < c.m(); ++s)
      if (c.values()(u, s) > 0.0)
        edges.push_back(Json::array({c.user_ids()[static_cast<std::size_t>(u)],
                                     c.source_ids()[static_cast<std::size_t>(s)], c.values()(u, s)}));
  Json j;
  j["users"] = std::move(users);
  j["sources"] = std::move(sources);
  j["edges"] = std::move(edges);
  return j;
}

Json recommendation_json(const std::string& user_id, const ToleranceBox& box,
                         const std::vector<Recommendation>& items) {
  Json list = Json::array();
  for (const auto& r : items)
    list.push_back({{"source_id", r.source_id},
                    {"ideology", r.ideology},
                    {"popularity", r.popularity},
                    {"sample_weight", r.sample_weight},
                    {"novel", r.novel}});
  Json j;
  j["user_id"] = user_id;
  j["box"] = {{"theta", box.theta}, {"delta", box.delta}};
  j["items"] = std::move(list);
  return j;
}

Json to_json(const EvaluationReport& r) {
  Json j;
  j["method"] = r.method;
  j["target"] = r.target;
  j["purity"] = r.purity;
  j["ari"] = r.ari;
  j["ami"] = r.ami;
  j["nmi"] = r.nmi;
  j["corr_i"] = optional_number(r.corr_i);
  j["corr_rho"] = optional_number(r.corr_rho);
  j["coverage"] = {{"predicted", r.coverage.predicted}, {"truth", r.coverage.truth}, {"common", r.coverage.common}};
  j["mi_normalization"] = r.normalization;
  return j;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string sha256_file(const fs::path& path) {
  auto in = open_input(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

}  // namespace ideofactor
