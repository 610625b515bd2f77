#pragma once

// External clustering agreement (purity, ARI, NMI, AMI), Pearson correlation
// and the ground-truth derivations used for evaluation.

#include "ideofactor/data_model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ideofactor {

/// Per-item cluster ids. Labels must be non-negative; they need not be dense.
struct LabeledPartition {
  std::vector<int> labels;

  LabeledPartition() = default;
  explicit LabeledPartition(std::vector<int> labels);

  std::size_t n_items() const { return labels.size(); }
  std::size_t n_clusters() const;
};

/// Scores keyed by unique ids. May cover only part of a population.
struct ScoreSeries {
  std::vector<std::string> ids;
  std::vector<double> values;

  ScoreSeries() = default;
  ScoreSeries(std::vector<std::string> ids, std::vector<double> values);

  std::size_t size() const { return ids.size(); }
};

double purity(const LabeledPartition& pred, const LabeledPartition& truth);

double adjusted_rand_index(const LabeledPartition& pred, const LabeledPartition& truth);

struct MutualInformation {
  double mi = 0.0;   // nats
  double nmi = 0.0;  // arithmetic-mean normalization
  double ami = 0.0;  // permutation-model adjustment, arithmetic-mean normalization
};

inline constexpr const char* kMiNormalization = "arithmetic";

MutualInformation mutual_information_scores(const LabeledPartition& pred, const LabeledPartition& truth);

/// Pearson r over aligned samples. Throws InsufficientOverlapError for fewer
/// than two samples and ZeroVarianceError when either side is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Pearson r over the ids present in both series.
double pearson(const ScoreSeries& xs, const ScoreSeries& ys);

/// 0 below `threshold`, 1 at or above it.
LabeledPartition threshold_labels(const ScoreSeries& scores, double threshold = 0.5);
LabeledPartition threshold_labels(std::span<const double> scores, double threshold = 0.5);

/// Engagement-weighted mean score of the scored sources each user shared.
/// Users with no engagement on a scored source are left out.
ScoreSeries avg_content_truth(const EngagementMatrix& c, const ScoreSeries& source_scores);

struct Coverage {
  std::size_t predicted = 0;
  std::size_t truth = 0;
  std::size_t common = 0;
};

struct EvaluationReport {
  std::string method;
  std::string target;  // "users" or "sources"
  double purity = 0.0;
  double ari = 0.0;
  double ami = 0.0;
  double nmi = 0.0;
  std::optional<double> corr_i;
  std::optional<double> corr_rho;
  Coverage coverage;
  std::string normalization = kMiNormalization;
};

/// Predicted clusters and scores for one side of the factorization.
struct Prediction {
  std::vector<std::string> ids;
  std::vector<int> clusters;
  std::vector<double> ideology;    // empty when unavailable
  std::vector<double> popularity;  // empty when unavailable
};

/// Compares predictions with ground-truth scores on the id intersection.
/// Truth clusters come from thresholding at `threshold`. Correlations that
/// cannot be computed (constant series) are left empty; fewer than two common
/// ids throws InsufficientOverlapError.
EvaluationReport evaluate(const Prediction& pred, const ScoreSeries& truth,
                          const ScoreSeries* popularity_truth = nullptr, double threshold = 0.5);

}  // namespace ideofactor
