#pragma once

// Input matrices for the joint factorization: the user-user interaction
// matrix, the user-source engagement matrix, cosine affinities and their
// graph Laplacians.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ideofactor {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class InteractionMode { FollowCommonNeighbors, RetweetCount, Raw };

std::string_view to_string(InteractionMode mode);
InteractionMode parse_interaction_mode(std::string_view name);

/// One weighted directed record. In follow mode `dst` is a followee and the
/// weight is ignored.
struct Edge {
  std::string src;
  std::string dst;
  double weight = 1.0;
};

struct Engagement {
  std::string user;
  std::string source;
  double count = 1.0;
};

/// Ordered list of unique ids with a reverse lookup.
class IdIndex {
 public:
  IdIndex() = default;
  explicit IdIndex(std::vector<std::string> ids);

  /// Appends `id` if unseen and returns its index.
  Index intern(const std::string& id);
  /// Returns -1 when the id is unknown.
  Index find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id) >= 0; }

  const std::vector<std::string>& ids() const { return ids_; }
  Index size() const { return static_cast<Index>(ids_.size()); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> lookup_;
};

/// Square non-negative user-user matrix with zero diagonal.
class InteractionMatrix {
 public:
  InteractionMatrix(MatrixXd values, std::vector<std::string> user_ids, InteractionMode mode);

  const MatrixXd& values() const { return values_; }
  const std::vector<std::string>& user_ids() const { return users_.ids(); }
  const IdIndex& users() const { return users_; }
  InteractionMode mode() const { return mode_; }
  Index n() const { return values_.rows(); }

  Eigen::SparseMatrix<double> sparse() const;

 private:
  MatrixXd values_;
  IdIndex users_;
  InteractionMode mode_;
};

/// Non-negative n x m share counts; rows are users, columns are sources.
class EngagementMatrix {
 public:
  EngagementMatrix(MatrixXd values, std::vector<std::string> user_ids,
                   std::vector<std::string> source_ids);

  const MatrixXd& values() const { return values_; }
  const std::vector<std::string>& user_ids() const { return users_.ids(); }
  const std::vector<std::string>& source_ids() const { return sources_.ids(); }
  const IdIndex& users() const { return users_; }
  const IdIndex& sources() const { return sources_; }
  Index n() const { return values_.rows(); }
  Index m() const { return values_.cols(); }

  Eigen::SparseMatrix<double> sparse() const;

 private:
  MatrixXd values_;
  IdIndex users_;
  IdIndex sources_;
};

/// Builds A from edge records.
///
/// Retweet and raw modes sum duplicate (src, dst) weights. Follow mode reads
/// the records as follow lists and sets A(u,v) to the number of followees u
/// and v share. The diagonal is always zero.
///
/// When `universe` is non-empty it fixes the row order and any row id outside
/// it is rejected; otherwise ids are indexed in order of first appearance.
InteractionMatrix build_interaction_matrix(std::span<const Edge> edges, InteractionMode mode,
                                           std::span<const std::string> universe = {});

/// Builds C from engagement records, summing duplicates. A non-empty
/// `user_universe` fixes the row order (users without records get zero rows).
EngagementMatrix build_engagement_matrix(std::span<const Engagement> records,
                                         std::span<const std::string> user_universe = {});

/// Divides each nonzero row by its Euclidean norm; zero rows stay zero.
MatrixXd row_normalize(const MatrixXd& x);
MatrixXd col_normalize(const MatrixXd& x);

enum class Axis { Rows, Columns };

/// Cosine similarities between the rows (or columns) of a matrix.
struct AffinityMatrix {
  MatrixXd values;
  Axis axis = Axis::Rows;

  Index size() const { return values.rows(); }
};

AffinityMatrix affinity_rows(const MatrixXd& x);
AffinityMatrix affinity_cols(const MatrixXd& x);
inline AffinityMatrix affinity_rows(const EngagementMatrix& c) { return affinity_rows(c.values()); }
inline AffinityMatrix affinity_cols(const EngagementMatrix& c) { return affinity_cols(c.values()); }

struct LaplacianMatrix {
  MatrixXd values;
  VectorXd degree;

  Index size() const { return values.rows(); }
};

/// L = D - W with D the diagonal of row sums. Rejects W that is not
/// symmetric within 1e-9.
LaplacianMatrix laplacian(const MatrixXd& w);
inline LaplacianMatrix laplacian(const AffinityMatrix& w) { return laplacian(w.values); }

}  // namespace ideofactor
