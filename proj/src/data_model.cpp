#include "ideofactor/data_model.hpp"

#include "ideofactor/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ideofactor {

std::string_view to_string(InteractionMode mode) {
  switch (mode) {
    case InteractionMode::FollowCommonNeighbors: return "follow";
    case InteractionMode::RetweetCount: return "retweet";
    case InteractionMode::Raw: return "raw";
  }
  return "raw";
}

InteractionMode parse_interaction_mode(std::string_view name) {
  if (name == "follow" || name == "follow-common-neighbors") return InteractionMode::FollowCommonNeighbors;
  if (name == "retweet" || name == "retweet-count") return InteractionMode::RetweetCount;
  if (name == "raw") return InteractionMode::Raw;
  throw InputError("unknown interaction mode '" + std::string(name) + "'");
}

IdIndex::IdIndex(std::vector<std::string> ids) {
  ids_.reserve(ids.size());
  for (auto& id : ids) {
    if (lookup_.count(id)) throw InputError("duplicate id '" + id + "'");
    lookup_.emplace(id, static_cast<Index>(ids_.size()));
    ids_.push_back(std::move(id));
  }
}

Index IdIndex::intern(const std::string& id) {
  auto [it, inserted] = lookup_.emplace(id, static_cast<Index>(ids_.size()));
  if (inserted) ids_.push_back(id);
  return it->second;
}

Index IdIndex::find(const std::string& id) const {
  auto it = lookup_.find(id);
  return it == lookup_.end() ? -1 : it->second;
}

namespace {

void require_non_negative_finite(const MatrixXd& x, const char* what) {
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) {
      const double v = x(i, j);
      if (!std::isfinite(v) || v < 0.0)
        throw InputError(std::string(what) + " entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") must be finite and non-negative");
    }
}

Eigen::SparseMatrix<double> to_sparse(const MatrixXd& x) { return x.sparseView(); }

}  // namespace

InteractionMatrix::InteractionMatrix(MatrixXd values, std::vector<std::string> user_ids,
                                     InteractionMode mode)
    : values_(std::move(values)), users_(std::move(user_ids)), mode_(mode) {
  if (values_.rows() != values_.cols()) throw InputError("interaction matrix must be square");
  if (users_.size() != values_.rows()) throw InputError("interaction matrix id count does not match its size");
  require_non_negative_finite(values_, "interaction matrix");
  for (Index i = 0; i < values_.rows(); ++i)
    if (values_(i, i) != 0.0) throw InputError("interaction matrix diagonal must be zero");
  if (mode_ == InteractionMode::FollowCommonNeighbors && values_ != values_.transpose())
    throw InputError("follow-mode interaction matrix must be symmetric");
}

Eigen::SparseMatrix<double> InteractionMatrix::sparse() const { return to_sparse(values_); }

EngagementMatrix::EngagementMatrix(MatrixXd values, std::vector<std::string> user_ids,
                                   std::vector<std::string> source_ids)
    : values_(std::move(values)), users_(std::move(user_ids)), sources_(std::move(source_ids)) {
  if (values_.rows() < 1 || values_.cols() < 1) throw InputError("engagement matrix needs at least one user and one source");
  if (users_.size() != values_.rows()) throw InputError("engagement matrix user id count does not match its rows");
  if (sources_.size() != values_.cols()) throw InputError("engagement matrix source id count does not match its columns");
  require_non_negative_finite(values_, "engagement matrix");
}

Eigen::SparseMatrix<double> EngagementMatrix::sparse() const { return to_sparse(values_); }

InteractionMatrix build_interaction_matrix(std::span<const Edge> edges, InteractionMode mode,
                                           std::span<const std::string> universe) {
  const bool fixed = !universe.empty();
  IdIndex users(fixed ? std::vector<std::string>(universe.begin(), universe.end())
                      : std::vector<std::string>{});

  auto resolve = [&](const std::string& id) {
    if (!fixed) return users.intern(id);
    const Index i = users.find(id);
    if (i < 0) throw InputError("unknown user id '" + id + "'");
    return i;
  };

  for (const auto& e : edges)
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw InputError("negative or non-finite weight on edge " + e.src + " -> " + e.dst);

  if (mode == InteractionMode::FollowCommonNeighbors) {
    // Followees are features, not rows, so they never need to be in the universe.
    std::map<Index, std::set<std::string>> follows;
    for (const auto& e : edges) follows[resolve(e.src)].insert(e.dst);
    const Index n = users.size();
    MatrixXd a = MatrixXd::Zero(n, n);
    for (auto it = follows.begin(); it != follows.end(); ++it) {
      for (auto jt = std::next(it); jt != follows.end(); ++jt) {
        std::size_t common = 0;
        const auto& lhs = it->second;
        const auto& rhs = jt->second;
        auto l = lhs.begin();
        auto r = rhs.begin();
        while (l != lhs.end() && r != rhs.end()) {
          if (*l < *r) ++l;
          else if (*r < *l) ++r;
          else { ++common; ++l; ++r; }
        }
        a(it->first, jt->first) = a(jt->first, it->first) = static_cast<double>(common);
      }
    }
    return InteractionMatrix(std::move(a), users.ids(), mode);
  }

  std::vector<std::tuple<Index, Index, double>> resolved;
  resolved.reserve(edges.size());
  for (const auto& e : edges) {
    const Index s = resolve(e.src);
    const Index d = resolve(e.dst);
    resolved.emplace_back(s, d, e.weight);
  }
  const Index n = users.size();
  MatrixXd a = MatrixXd::Zero(n, n);
  for (const auto& [s, d, w] : resolved)
    if (s != d) a(s, d) += w;
  return InteractionMatrix(std::move(a), users.ids(), mode);
}

EngagementMatrix build_engagement_matrix(std::span<const Engagement> records,
                                         std::span<const std::string> user_universe) {
  const bool fixed = !user_universe.empty();
  IdIndex users(fixed ? std::vector<std::string>(user_universe.begin(), user_universe.end())
                      : std::vector<std::string>{});
  IdIndex sources;
  std::vector<std::tuple<Index, Index, double>> resolved;
  resolved.reserve(records.size());
  for (const auto& r : records) {
    if (!(r.count >= 0.0) || !std::isfinite(r.count))
      throw InputError("negative or non-finite count for " + r.user + " / " + r.source);
    Index u = fixed ? users.find(r.user) : users.intern(r.user);
    if (u < 0) throw InputError("unknown user id '" + r.user + "'");
    resolved.emplace_back(u, sources.intern(r.source), r.count);
  }
  MatrixXd c = MatrixXd::Zero(users.size(), sources.size());
  for (const auto& [u, s, w] : resolved) c(u, s) += w;
  return EngagementMatrix(std::move(c), users.ids(), sources.ids());
}

MatrixXd row_normalize(const MatrixXd& x) {
  MatrixXd out = x;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0) out.row(i) /= norm;
  }
  return out;
}

MatrixXd col_normalize(const MatrixXd& x) {
  MatrixXd out = x;
  for (Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm > 0.0) out.col(j) /= norm;
  }
  return out;
}

AffinityMatrix affinity_rows(const MatrixXd& x) {
  const MatrixXd r = row_normalize(x);
  MatrixXd w = r * r.transpose();
  // Exact symmetry and unit self-similarity; rounding can otherwise leave
  // 1 + ulp on the diagonal or break W == W^T.
  w = (0.5 * (w + w.transpose())).eval();
  for (Index i = 0; i < w.rows(); ++i) w(i, i) = r.row(i).squaredNorm() > 0.0 ? 1.0 : 0.0;
  w = w.cwiseMax(-1.0).cwiseMin(1.0);
  return {std::move(w), Axis::Rows};
}

AffinityMatrix affinity_cols(const MatrixXd& x) {
  AffinityMatrix a = affinity_rows(x.transpose());
  a.axis = Axis::Columns;
  return a;
}

LaplacianMatrix laplacian(const MatrixXd& w) {
  if (w.rows() != w.cols()) throw InputError("laplacian needs a square matrix");
  for (Index j = 0; j < w.cols(); ++j)
    for (Index i = j + 1; i < w.rows(); ++i)
      if (std::abs(w(i, j) - w(j, i)) > 1e-9)
        throw InputError("laplacian needs a symmetric matrix");
  LaplacianMatrix out;
  out.degree = w.rowwise().sum();
  out.values = -w;
  out.values.diagonal() += out.degree;
  return out;
}

}  // namespace ideofactor
