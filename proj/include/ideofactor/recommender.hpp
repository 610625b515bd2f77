#pragma once

// Tolerance-box content sampling in the ideology-popularity plane.

#include "ideofactor/scoring.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ideofactor {

/// Half-widths of the exploration box around the user's position.
struct ToleranceBox {
  double theta = 0.1;  // ideology
  double delta = 0.1;  // popularity

  void validate() const;
};

/// Where a user sits in the plane. Popularity is the engagement-weighted mean
/// popularity of the sources the user consumed.
struct UserPosition {
  std::string id;
  double ideology = 0.5;
  double popularity = 0.0;
  bool fallback = false;  // no scored engagement; popularity is the source median
};

struct Recommendation {
  std::string source_id;
  double ideology = 0.0;
  double popularity = 0.0;
  double sample_weight = 0.0;
  bool novel = true;
};

struct RecommendOptions {
  int count = 10;
  bool exclude_consumed = true;
  bool truncate = true;          // false: Gaussian weights over every source
  double sigma_factor = 0.5;     // sigma = tolerance * sigma_factor
  std::uint64_t seed = 0;
};

/// Engagement-weighted mean popularity of consumed, scored sources.
/// `engagement` is aligned with `sources`. Returns nullopt when the user has
/// no engagement on a scored source.
std::optional<double> user_popularity_position(std::span<const double> engagement,
                                               std::span<const ScoredEntity> sources);

/// Median popularity of the scored sources, 0 when none are scored.
double median_source_popularity(std::span<const ScoredEntity> sources);

/// Builds the user's position; falls back to the median source popularity
/// when the user is unplaceable. Rejects users without an ideology score.
UserPosition place_user(const ScoredEntity& user, std::span<const double> engagement,
                        std::span<const ScoredEntity> sources);

/// Product of the two Gaussian densities at a source's coordinates. A zero
/// sigma contributes a factor of 1 on that axis.
double gaussian_box_weight(const UserPosition& user, const ToleranceBox& box, double ideology,
                           double popularity, double sigma_factor = 0.5);

/// Sources inside the box (minus consumed ones when requested), in input order,
/// with their weights. Used both for sampling and as the analytic reference.
std::vector<Recommendation> candidates(const UserPosition& user, std::span<const ScoredEntity> sources,
                                       const ToleranceBox& box, std::span<const double> engagement,
                                       const RecommendOptions& options);

/// Draws up to `count` candidates without replacement, proportional to weight.
std::vector<Recommendation> recommend(const UserPosition& user, std::span<const ScoredEntity> sources,
                                      const ToleranceBox& box, std::span<const double> engagement,
                                      const RecommendOptions& options);

/// Places `user` first, then recommends.
std::vector<Recommendation> recommend(const ScoredEntity& user, std::span<const ScoredEntity> sources,
                                      const ToleranceBox& box, std::span<const double> engagement,
                                      const RecommendOptions& options);

}  // namespace ideofactor
