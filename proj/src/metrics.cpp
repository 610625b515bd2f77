#include "ideofactor/metrics.hpp"

#include "ideofactor/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace ideofactor {

LabeledPartition::LabeledPartition(std::vector<int> l) : labels(std::move(l)) {
  for (int v : labels)
    if (v < 0) throw InputError("cluster labels must be non-negative");
}

std::size_t LabeledPartition::n_clusters() const {
  return std::set<int>(labels.begin(), labels.end()).size();
}

ScoreSeries::ScoreSeries(std::vector<std::string> i, std::vector<double> v)
    : ids(std::move(i)), values(std::move(v)) {
  if (ids.size() != values.size()) throw InputError("score series ids and values differ in length");
  std::unordered_set<std::string> seen;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!seen.insert(ids[k]).second) throw InputError("duplicate id '" + ids[k] + "' in score series");
    if (!std::isfinite(values[k])) throw InputError("non-finite score for '" + ids[k] + "'");
  }
}

namespace {

// Dense contingency table: rows are predicted clusters, columns truth clusters.
struct Contingency {
  std::vector<std::vector<long long>> counts;
  std::vector<long long> row_sums;
  std::vector<long long> col_sums;
  long long n = 0;
};

Contingency contingency(const LabeledPartition& pred, const LabeledPartition& truth) {
  if (pred.n_items() != truth.n_items())
    throw InputError("partitions differ in length (" + std::to_string(pred.n_items()) + " vs " +
                     std::to_string(truth.n_items()) + ")");
  std::map<int, std::size_t> rows, cols;
  for (int v : pred.labels) rows.emplace(v, rows.size());
  for (int v : truth.labels) cols.emplace(v, cols.size());
  Contingency t;
  t.counts.assign(rows.size(), std::vector<long long>(cols.size(), 0));
  t.row_sums.assign(rows.size(), 0);
  t.col_sums.assign(cols.size(), 0);
  for (std::size_t i = 0; i < pred.n_items(); ++i) {
    const auto r = rows[pred.labels[i]];
    const auto c = cols[truth.labels[i]];
    ++t.counts[r][c];
    ++t.row_sums[r];
    ++t.col_sums[c];
  }
  t.n = static_cast<long long>(pred.n_items());
  return t;
}

long long pairs(long long x) { return x * (x - 1) / 2; }

double entropy(const std::vector<long long>& sums, long long n) {
  double h = 0.0;
  for (long long s : sums) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / static_cast<double>(n);
    h -= p * std::log(p);
  }
  return h;
}

double mutual_information(const Contingency& t) {
  const double n = static_cast<double>(t.n);
  double mi = 0.0;
  for (std::size_t i = 0; i < t.row_sums.size(); ++i)
    for (std::size_t j = 0; j < t.col_sums.size(); ++j) {
      const long long nij = t.counts[i][j];
      if (nij == 0) continue;
      const double v = static_cast<double>(nij);
      mi += v / n * std::log(n * v / (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
    }
  return std::max(mi, 0.0);
}

// Expected mutual information under the hypergeometric (permutation) model.
double expected_mutual_information(const Contingency& t) {
  const long long n = t.n;
  const double dn = static_cast<double>(n);
  const double lg_n = std::lgamma(dn + 1.0);
  double emi = 0.0;
  for (long long a : t.row_sums)
    for (long long b : t.col_sums) {
      const long long lo = std::max(1LL, a + b - n);
      const long long hi = std::min(a, b);
      for (long long nij = lo; nij <= hi; ++nij) {
        const double v = static_cast<double>(nij);
        const double term = v / dn * std::log(dn * v / (static_cast<double>(a) * static_cast<double>(b)));
        const double log_p = std::lgamma(a + 1.0) + std::lgamma(b + 1.0) +
                             std::lgamma(static_cast<double>(n - a) + 1.0) +
                             std::lgamma(static_cast<double>(n - b) + 1.0) - lg_n - std::lgamma(v + 1.0) -
                             std::lgamma(static_cast<double>(a - nij) + 1.0) -
                             std::lgamma(static_cast<double>(b - nij) + 1.0) -
                             std::lgamma(static_cast<double>(n - a - b + nij) + 1.0);
        emi += term * std::exp(log_p);
      }
    }
  return emi;
}

}  // namespace

double purity(const LabeledPartition& pred, const LabeledPartition& truth) {
  const Contingency t = contingency(pred, truth);
  if (t.n == 0) throw InputError("purity of an empty partition");
  long long hits = 0;
  for (const auto& row : t.counts) hits += *std::max_element(row.begin(), row.end());
  return static_cast<double>(hits) / static_cast<double>(t.n);
}

double adjusted_rand_index(const LabeledPartition& pred, const LabeledPartition& truth) {
  const Contingency t = contingency(pred, truth);
  long long same_both = 0, same_pred = 0, same_truth = 0;
  for (const auto& row : t.counts)
    for (long long v : row) same_both += pairs(v);
  for (long long v : t.row_sums) same_pred += pairs(v);
  for (long long v : t.col_sums) same_truth += pairs(v);
  const long long tp = same_both;
  const long long fp = same_pred - tp;
  const long long fn = same_truth - tp;
  const long long tn = pairs(t.n) - tp - fp - fn;
  if (fn == 0 && fp == 0) return 1.0;
  __extension__ typedef __int128 wide;
  const wide num = 2 * (static_cast<wide>(tp) * tn - static_cast<wide>(fn) * fp);
  const wide den = static_cast<wide>(tp + fn) * (fn + tn) + static_cast<wide>(tp + fp) * (fp + tn);
  return static_cast<double>(num) / static_cast<double>(den);
}

MutualInformation mutual_information_scores(const LabeledPartition& pred, const LabeledPartition& truth) {
  const Contingency t = contingency(pred, truth);
  const std::size_t kp = t.row_sums.size();
  const std::size_t kt = t.col_sums.size();
  MutualInformation out;
  // Both sides unsplit (or empty): a perfect match by convention.
  if ((kp == 1 && kt == 1) || (kp == 0 && kt == 0)) {
    out.nmi = out.ami = 1.0;
    return out;
  }
  out.mi = mutual_information(t);
  const double h_pred = entropy(t.row_sums, t.n);
  const double h_truth = entropy(t.col_sums, t.n);
  const double mean_h = 0.5 * (h_pred + h_truth);
  out.nmi = out.mi == 0.0 ? 0.0 : out.mi / mean_h;

  const double emi = expected_mutual_information(t);
  constexpr double tiny = 2.220446049250313e-16;
  double den = mean_h - emi;
  den = den < 0.0 ? std::min(den, -tiny) : std::max(den, tiny);
  out.ami = (out.mi - emi) / den;
  return out;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InputError("pearson needs equal-length samples");
  if (xs.size() < 2) throw InsufficientOverlapError("pearson needs at least two common items");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVarianceError("pearson needs non-constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(const ScoreSeries& xs, const ScoreSeries& ys) {
  std::unordered_map<std::string, double> lookup;
  for (std::size_t i = 0; i < ys.size(); ++i) lookup.emplace(ys.ids[i], ys.values[i]);
  std::vector<double> a, b;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (auto it = lookup.find(xs.ids[i]); it != lookup.end()) {
      a.push_back(xs.values[i]);
      b.push_back(it->second);
    }
  return pearson(a, b);
}

LabeledPartition threshold_labels(std::span<const double> scores, double threshold) {
  std::vector<int> labels;
  labels.reserve(scores.size());
  for (double s : scores) labels.push_back(s < threshold ? 0 : 1);
  return LabeledPartition(std::move(labels));
}

LabeledPartition threshold_labels(const ScoreSeries& scores, double threshold) {
  return threshold_labels(scores.values, threshold);
}

ScoreSeries avg_content_truth(const EngagementMatrix& c, const ScoreSeries& source_scores) {
  std::vector<std::pair<Index, double>> covered;
  for (std::size_t i = 0; i < source_scores.size(); ++i) {
    const Index col = c.sources().find(source_scores.ids[i]);
    if (col >= 0) covered.emplace_back(col, source_scores.values[i]);
  }
  std::vector<std::string> ids;
  std::vector<double> values;
  for (Index u = 0; u < c.n(); ++u) {
    double weight = 0.0, total = 0.0;
    for (const auto& [col, score] : covered) {
      const double w = c.values()(u, col);
      weight += w;
      total += w * score;
    }
    if (weight > 0.0) {
      ids.push_back(c.user_ids()[static_cast<std::size_t>(u)]);
      values.push_back(total / weight);
    }
  }
  return ScoreSeries(std::move(ids), std::move(values));
}

EvaluationReport evaluate(const Prediction& pred, const ScoreSeries& truth,
                          const ScoreSeries* popularity_truth, double threshold) {
  if (pred.clusters.size() != pred.ids.size()) throw InputError("prediction ids and clusters differ in length");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pred.ids.size(); ++i) index.emplace(pred.ids[i], i);

  std::vector<int> pred_labels;
  std::vector<double> truth_scores, pred_scores;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    auto it = index.find(truth.ids[i]);
    if (it == index.end()) continue;
    pred_labels.push_back(pred.clusters[it->second]);
    truth_scores.push_back(truth.values[i]);
    if (!pred.ideology.empty()) pred_scores.push_back(pred.ideology[it->second]);
  }

  EvaluationReport r;
  r.coverage = {pred.ids.size(), truth.size(), pred_labels.size()};
  if (pred_labels.size() < 2)
    throw InsufficientOverlapError("only " + std::to_string(pred_labels.size()) +
                                   " ids overlap between prediction and ground truth");
  const LabeledPartition p(pred_labels);
  const LabeledPartition t = threshold_labels(truth_scores, threshold);
  r.purity = purity(p, t);
  r.ari = adjusted_rand_index(p, t);
  const auto mi = mutual_information_scores(p, t);
  r.nmi = mi.nmi;
  r.ami = mi.ami;
  try {
    if (!pred_scores.empty()) r.corr_i = pearson(pred_scores, truth_scores);
  } catch (const ZeroVarianceError&) {
  }
  if (popularity_truth && !pred.popularity.empty()) {
    try {
      r.corr_rho = pearson(ScoreSeries(pred.ids, pred.popularity), *popularity_truth);
    } catch (const ZeroVarianceError&) {
    } catch (const InsufficientOverlapError&) {
    }
  }
  return r;
}

}  // namespace ideofactor
