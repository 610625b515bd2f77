#include "ideofactor/recommender.hpp"

#include "ideofactor/error.hpp"
#include "ideofactor/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ideofactor {

void ToleranceBox::validate() const {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw InputError("theta must be finite and >= 0");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw InputError("delta must be finite and >= 0");
}

namespace {

void require_aligned(std::span<const double> engagement, std::span<const ScoredEntity> sources) {
  if (!engagement.empty() && engagement.size() != sources.size())
    throw InputError("engagement row has " + std::to_string(engagement.size()) + " entries for " +
                     std::to_string(sources.size()) + " sources");
}

double normal_density(double x, double mean, double sigma) {
  if (sigma == 0.0) return 1.0;
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

std::optional<double> user_popularity_position(std::span<const double> engagement,
                                               std::span<const ScoredEntity> sources) {
  require_aligned(engagement, sources);
  double weight = 0.0, total = 0.0;
  for (std::size_t s = 0; s < engagement.size(); ++s) {
    if (engagement[s] <= 0.0 || !sources[s].popularity) continue;
    weight += engagement[s];
    total += engagement[s] * *sources[s].popularity;
  }
  if (weight == 0.0) return std::nullopt;
  return total / weight;
}

double median_source_popularity(std::span<const ScoredEntity> sources) {
  std::vector<double> values;
  for (const auto& s : sources)
    if (s.popularity) values.push_back(*s.popularity);
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

UserPosition place_user(const ScoredEntity& user, std::span<const double> engagement,
                        std::span<const ScoredEntity> sources) {
  if (!user.ideology) throw InputError("user '" + user.id + "' has no ideology score (k != 2)");
  UserPosition p{user.id, *user.ideology, 0.0, false};
  if (auto pop = user_popularity_position(engagement, sources)) {
    p.popularity = *pop;
  } else {
    p.popularity = median_source_popularity(sources);
    p.fallback = true;
  }
  return p;
}

double gaussian_box_weight(const UserPosition& user, const ToleranceBox& box, double ideology,
                           double popularity, double sigma_factor) {
  return normal_density(ideology, user.ideology, box.theta * sigma_factor) *
         normal_density(popularity, user.popularity, box.delta * sigma_factor);
}

std::vector<Recommendation> candidates(const UserPosition& user, std::span<const ScoredEntity> sources,
                                       const ToleranceBox& box, std::span<const double> engagement,
                                       const RecommendOptions& options) {
  box.validate();
  require_aligned(engagement, sources);
  if (!options.truncate && (box.theta == 0.0 || box.delta == 0.0))
    throw InputError("untruncated sampling needs theta > 0 and delta > 0");
  std::vector<Recommendation> out;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const auto& src = sources[s];
    if (!src.ideology || !src.popularity) continue;
    const bool consumed = !engagement.empty() && engagement[s] > 0.0;
    if (consumed && options.exclude_consumed) continue;
    if (options.truncate && (std::abs(*src.ideology - user.ideology) > box.theta ||
                             std::abs(*src.popularity - user.popularity) > box.delta))
      continue;
    const double w = gaussian_box_weight(user, box, *src.ideology, *src.popularity, options.sigma_factor);
    if (!(w > 0.0)) continue;  // underflow far outside the box
    out.push_back({src.id, *src.ideology, *src.popularity, w, !consumed});
  }
  return out;
}

std::vector<Recommendation> recommend(const UserPosition& user, std::span<const ScoredEntity> sources,
                                      const ToleranceBox& box, std::span<const double> engagement,
                                      const RecommendOptions& options) {
  if (options.count < 1) throw InputError("count must be at least 1");
  std::vector<Recommendation> pool = candidates(user, sources, box, engagement, options);
  Rng rng(options.seed);
  std::vector<Recommendation> picked;
  const std::size_t draws = std::min(pool.size(), static_cast<std::size_t>(options.count));
  picked.reserve(draws);
  while (picked.size() < draws) {
    double total = 0.0;
    for (const auto& r : pool) total += r.sample_weight;
    const double target = rng.uniform() * total;
    std::size_t chosen = pool.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      acc += pool[i].sample_weight;
      if (target < acc) {
        chosen = i;
        break;
      }
    }
    picked.push_back(std::move(pool[chosen]));
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(chosen));
  }
  return picked;
}

std::vector<Recommendation> recommend(const ScoredEntity& user, std::span<const ScoredEntity> sources,
                                      const ToleranceBox& box, std::span<const double> engagement,
                                      const RecommendOptions& options) {
  return recommend(place_user(user, engagement, sources), sources, box, engagement, options);
}

}  // namespace ideofactor
