#pragma once

#include "ideofactor/solver.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ideofactor {

enum class EntityKind { User, Source };

std::string_view to_string(EntityKind kind);

/// Normalized angle of a non-negative latent vector: atan2(y, x) / (pi/2).
/// (0,0) maps to 0.5. Rejects negative components.
double ideology_score(double x, double y);

/// Euclidean magnitude of a non-negative latent vector.
double popularity_score(double x, double y);

/// Row-wise argmax; ties go to the lowest column.
std::vector<int> hard_clusters(const MatrixXd& factor);

struct ScoredEntity {
  std::string id;
  EntityKind kind = EntityKind::User;
  std::vector<double> latent;
  std::optional<double> ideology;    // only when k == 2
  std::optional<double> popularity;  // only when k == 2
  int cluster = 0;
  bool degenerate = false;           // all-zero latent vector
};

struct ScoredSpace {
  std::vector<ScoredEntity> users;
  std::vector<ScoredEntity> sources;
};

struct ScoreOptions {
  /// Scale every latent column to unit Euclidean norm before scoring.
  bool normalize_columns = false;
};

ScoredEntity score_entity(std::string id, EntityKind kind, std::span<const double> latent);

/// Scores every row of U (users) and V (sources). Rejects id lists whose
/// length differs from the factor rows.
ScoredSpace score_all(const FactorSet& f, std::span<const std::string> user_ids,
                      std::span<const std::string> source_ids, const ScoreOptions& options = {});

/// Known-side scores used to orient the latent axes.
struct Anchor {
  std::string id;
  double score;
};

struct Orientation {
  FactorSet factors;
  bool flipped = false;
  bool anchored = false;          // false: axis order is arbitrary
  std::size_t anchors_used = 0;
};

/// Swaps latent columns 0 and 1 (and the matching rows/columns of Hu, Hs).
FactorSet swap_axes(const FactorSet& f);

/// For k == 2, swaps the latent axes if the covariance between ideology
/// scores and anchor scores is negative. Anchors are matched against user ids
/// and then source ids; unmatched anchors are ignored.
Orientation orient(const FactorSet& f, std::span<const std::string> user_ids,
                   std::span<const std::string> source_ids, std::span<const Anchor> anchors);

}  // namespace ideofactor
