#pragma once

// End-to-end plumbing shared by the command line tool, the HTTP export and
// the Python bindings.

#include "ideofactor/baselines.hpp"
#include "ideofactor/io.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ideofactor {

struct LoadedInputs {
  InteractionMatrix A;
  EngagementMatrix C;
};

/// Reads the edge (or follow) list and the engagement file and aligns both on
/// one user index: engagement users first, then edge-only users.
LoadedInputs load_inputs(const std::filesystem::path& edges, const std::filesystem::path& engagement,
                         InteractionMode mode);

enum class Method { Ifd, IfdNgr, NmfSymm, Onmtf, Dmcc };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

/// Runs one method and packages its factors for export.
///
/// nmf-symm factorizes (A + A^T)/2 for users (U, Hu) and C^T C for sources
/// (V, Hs, seeded from a derived stream). onmtf and dmcc factorize C (U = W,
/// V = Z, Hs = H). The user-side trace is stored in `objective_trace`.
FactorDocument run_method(Method method, const InteractionMatrix& a, const EngagementMatrix& c,
                          const SolverConfig& config);

struct GridCell {
  double alpha = 0.0;
  double beta = 0.0;
  double purity = 0.0;
  std::optional<double> corr_i;
  double final_objective = 0.0;
  int iterations = 0;
  /// Set when the fit aborted on a non-finite update; such cells are never selected.
  std::optional<std::string> numeric_error;
};

struct GridReport {
  GridCell best;
  std::vector<GridCell> cells;  // sorted by (alpha, beta)
  std::string target;
};

inline const std::vector<double> kDefaultGrid{0.0, 0.01, 0.1, 1.0, 10.0, 100.0};

/// Fits IFD on every (alpha, beta) cell and keeps the one with the highest
/// validation purity, then higher corr_i, then smaller alpha + beta.
/// Cells whose fit diverges are reported but skipped; NumericError is thrown
/// only when every cell diverges. `threads` <= 1 runs serially; results do
/// not depend on it.
GridReport grid_search(const InteractionMatrix& a, const EngagementMatrix& c, const ScoreSeries& truth,
                       const SolverConfig& base, const std::vector<double>& alphas,
                       const std::vector<double>& betas, bool target_sources = false, int threads = 1);

Json to_json(const GridReport& report);

/// Thread cap from IDEOFACTOR_THREADS (default: hardware concurrency).
int thread_cap();

/// Read-only view over one fitted factorization: scored entities, user
/// positions and per-user engagement aligned with the factor's source order.
class Explorer {
 public:
  Explorer(const FactorDocument& doc, const EngagementMatrix& c, std::span<const Anchor> anchors = {},
           const ScoreOptions& options = {});

  const ScoredSpace& space() const { return space_; }
  const std::vector<UserPosition>& positions() const { return positions_; }
  bool flipped() const { return flipped_; }

  Json space_json() const;

  /// Throws InputError for an unknown user.
  std::vector<Recommendation> recommend(const std::string& user_id, const ToleranceBox& box,
                                        const RecommendOptions& options) const;
  Json recommend_json(const std::string& user_id, const ToleranceBox& box,
                      const RecommendOptions& options) const;

 private:
  ScoredSpace space_;
  std::vector<UserPosition> positions_;
  EngagementMatrix engagement_;  // users x sources in factor order
  IdIndex users_;
  bool flipped_ = false;
};

}  // namespace ideofactor
