#pragma once

// File formats: tab-separated edge / follow / engagement lists, id,score
// CSVs, the factor JSON document, scores tables and the space / recommendation
// / evaluation JSON payloads.

#include "ideofactor/data_model.hpp"
#include "ideofactor/metrics.hpp"
#include "ideofactor/recommender.hpp"
#include "ideofactor/scoring.hpp"
#include "ideofactor/solver.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ideofactor {

using Json = nlohmann::ordered_json;

// Readers throw InputError with "path:line: message" diagnostics.
std::vector<Edge> read_edge_file(const std::filesystem::path& path);
std::vector<Edge> read_follow_file(const std::filesystem::path& path);
std::vector<Engagement> read_engagement_file(const std::filesystem::path& path);

/// `id,score` per line; a header whose score column is not numeric is skipped.
ScoreSeries read_score_file(const std::filesystem::path& path);

void write_edge_file(const std::filesystem::path& path, const std::vector<Edge>& edges);
void write_engagement_file(const std::filesystem::path& path, const std::vector<Engagement>& records);
void write_score_file(const std::filesystem::path& path, const ScoreSeries& scores);

/// Exported factorization. Factors that a method does not produce are empty.
struct FactorDocument {
  std::string method = "ifd";
  FactorSet factors;
  SolverConfig config;
  std::vector<double> objective_trace;
  std::vector<std::string> user_ids;
  std::vector<std::string> source_ids;
  bool converged = false;
  int iterations_run = 0;
};

Json to_json(const FactorDocument& doc);
FactorDocument factor_document_from_json(const Json& j);

FactorDocument read_factor_document(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// Canonical text form used for every JSON artifact (2-space indent, trailing newline).
std::string dump(const Json& j);

Json to_json(const ScoredEntity& e);

/// CSV: id,kind,ideology,popularity,cluster,degenerate (empty cells when k != 2).
void write_scores_table(const std::filesystem::path& path, const ScoredSpace& space);
std::string scores_table(const ScoredSpace& space);
ScoredSpace read_scores_table(const std::filesystem::path& path);

/// {users, sources, edges: [[user, source, weight]]}; for k = 2 users carry their
/// plane position under "position".
Json space_json(const ScoredSpace& space, const std::vector<UserPosition>& positions,
                const EngagementMatrix& c);

Json recommendation_json(const std::string& user_id, const ToleranceBox& box,
                         const std::vector<Recommendation>& items);

Json to_json(const EvaluationReport& r);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

}  // namespace ideofactor
