#include "ideofactor/scoring.hpp"

#include "ideofactor/error.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace ideofactor {

std::string_view to_string(EntityKind kind) { return kind == EntityKind::User ? "user" : "source"; }

double ideology_score(double x, double y) {
  if (x < 0.0 || y < 0.0 || std::isnan(x) || std::isnan(y))
    throw InputError("ideology score needs non-negative latent components");
  if (x == 0.0 && y == 0.0) return 0.5;
  return std::atan2(y, x) / (std::numbers::pi / 2.0);
}

double popularity_score(double x, double y) {
  if (x < 0.0 || y < 0.0 || std::isnan(x) || std::isnan(y))
    throw InputError("popularity score needs non-negative latent components");
  return std::hypot(x, y);
}

std::vector<int> hard_clusters(const MatrixXd& factor) {
  std::vector<int> labels(static_cast<std::size_t>(factor.rows()), 0);
  for (Index i = 0; i < factor.rows(); ++i) {
    Index best = 0;
    for (Index j = 1; j < factor.cols(); ++j)
      if (factor(i, j) > factor(i, best)) best = j;
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return labels;
}

ScoredEntity score_entity(std::string id, EntityKind kind, std::span<const double> latent) {
  ScoredEntity e;
  e.id = std::move(id);
  e.kind = kind;
  e.latent.assign(latent.begin(), latent.end());
  bool all_zero = true;
  for (std::size_t j = 0; j < latent.size(); ++j) {
    if (latent[j] < 0.0 || !std::isfinite(latent[j]))
      throw InputError("latent vector of '" + e.id + "' has a negative or non-finite entry");
    if (latent[j] != 0.0) all_zero = false;
    if (latent[j] > latent[static_cast<std::size_t>(e.cluster)]) e.cluster = static_cast<int>(j);
  }
  e.degenerate = all_zero;
  if (latent.size() == 2) {
    e.ideology = ideology_score(latent[0], latent[1]);
    e.popularity = popularity_score(latent[0], latent[1]);
  }
  return e;
}

namespace {

std::vector<ScoredEntity> score_rows(const MatrixXd& factor, std::span<const std::string> ids,
                                     EntityKind kind) {
  if (static_cast<Index>(ids.size()) != factor.rows())
    throw InputError(std::string(to_string(kind)) + " id count " + std::to_string(ids.size()) +
                     " does not match factor rows " + std::to_string(factor.rows()));
  std::vector<ScoredEntity> out;
  out.reserve(ids.size());
  std::vector<double> row(static_cast<std::size_t>(factor.cols()));
  for (Index i = 0; i < factor.rows(); ++i) {
    for (Index j = 0; j < factor.cols(); ++j) row[static_cast<std::size_t>(j)] = factor(i, j);
    out.push_back(score_entity(ids[static_cast<std::size_t>(i)], kind, row));
  }
  return out;
}

}  // namespace

ScoredSpace score_all(const FactorSet& f, std::span<const std::string> user_ids,
                      std::span<const std::string> source_ids, const ScoreOptions& options) {
  if (options.normalize_columns)
    return {score_rows(col_normalize(f.U), user_ids, EntityKind::User),
            score_rows(col_normalize(f.V), source_ids, EntityKind::Source)};
  return {score_rows(f.U, user_ids, EntityKind::User),
          score_rows(f.V, source_ids, EntityKind::Source)};
}

FactorSet swap_axes(const FactorSet& f) {
  if (f.k() < 2) throw InputError("swap_axes needs k >= 2");
  Eigen::PermutationMatrix<Eigen::Dynamic> p(f.k());
  p.setIdentity();
  p.applyTranspositionOnTheRight(0, 1);
  FactorSet out;
  out.U = f.U * p;
  out.V = f.V * p;
  if (f.Hu.size() != 0) out.Hu = p.transpose() * f.Hu * p;
  if (f.Hs.size() != 0) out.Hs = p.transpose() * f.Hs * p;
  return out;
}

Orientation orient(const FactorSet& f, std::span<const std::string> user_ids,
                   std::span<const std::string> source_ids, std::span<const Anchor> anchors) {
  if (f.k() != 2) throw InputError("orient needs k == 2");
  if (static_cast<Index>(user_ids.size()) != f.U.rows() ||
      static_cast<Index>(source_ids.size()) != f.V.rows())
    throw InputError("orient id counts do not match factor rows");

  std::unordered_map<std::string, Index> users, sources;
  for (std::size_t i = 0; i < user_ids.size(); ++i) users.emplace(user_ids[i], static_cast<Index>(i));
  for (std::size_t i = 0; i < source_ids.size(); ++i) sources.emplace(source_ids[i], static_cast<Index>(i));

  std::vector<double> truth, estimate;
  for (const auto& a : anchors) {
    if (auto it = users.find(a.id); it != users.end()) {
      truth.push_back(a.score);
      estimate.push_back(ideology_score(f.U(it->second, 0), f.U(it->second, 1)));
    } else if (auto jt = sources.find(a.id); jt != sources.end()) {
      truth.push_back(a.score);
      estimate.push_back(ideology_score(f.V(jt->second, 0), f.V(jt->second, 1)));
    }
  }

  Orientation out{f, false, !truth.empty(), truth.size()};
  if (truth.empty()) return out;
  double mt = 0.0, me = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    mt += truth[i];
    me += estimate[i];
  }
  mt /= static_cast<double>(truth.size());
  me /= static_cast<double>(truth.size());
  double cov = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) cov += (truth[i] - mt) * (estimate[i] - me);
  if (cov < 0.0) {
    out.factors = swap_axes(f);
    out.flipped = true;
  }
  return out;
}

}  // namespace ideofactor
