#include "ideofactor/synthetic.hpp"

#include "ideofactor/error.hpp"
#include "ideofactor/io.hpp"
#include "ideofactor/rng.hpp"

#include <cmath>
#include <numeric>

namespace ideofactor {

void SyntheticSpec::validate() const {
  if (n_users < 1 || m_sources < 1) throw InputError("a synthetic instance needs at least one user and one source");
  if (!(block_fraction > 0.0 && block_fraction < 1.0)) throw InputError("block_fraction must lie in (0,1)");
  if (!(0.0 <= p_out && p_out <= p_in && p_in <= 1.0)) throw InputError("need 0 <= p_out <= p_in <= 1");
  if (!(0.0 <= lambda_out && lambda_out <= lambda_in)) throw InputError("need 0 <= lambda_out <= lambda_in");
  if (!(0.0 <= ideology_spread && ideology_spread < 0.5)) throw InputError("ideology_spread must lie in [0, 0.5)");
}

namespace {

std::vector<std::string> make_ids(char prefix, int count) {
  const int width = std::max(3, static_cast<int>(std::to_string(count - 1).size()));
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::string digits = std::to_string(i);
    ids.push_back(prefix + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, digits.size()), '0') + digits);
  }
  return ids;
}

// Exactly round(fraction * count) members in block 0, positions shuffled.
std::vector<int> assign_blocks(int count, double fraction, Rng& rng) {
  const int zeros = static_cast<int>(std::lround(fraction * count));
  std::vector<int> blocks(static_cast<std::size_t>(count), 1);
  std::fill_n(blocks.begin(), std::min(zeros, count), 0);
  for (std::size_t i = blocks.size(); i > 1; --i) std::swap(blocks[i - 1], blocks[rng.below(i)]);
  return blocks;
}

std::vector<double> plant_ideology(const std::vector<int>& blocks, double spread, Rng& rng) {
  std::vector<double> out;
  out.reserve(blocks.size());
  for (int b : blocks) {
    const double center = b == 0 ? 0.25 : 0.75;
    out.push_back(center + spread * (2.0 * rng.uniform() - 1.0));
  }
  return out;
}

}  // namespace

SyntheticInstance generate(const SyntheticSpec& spec) {
  spec.validate();
  Rng block_rng(derive_seed(spec.seed, 0));
  Rng ideology_rng(derive_seed(spec.seed, 1));
  Rng edge_rng(derive_seed(spec.seed, 2));
  Rng count_rng(derive_seed(spec.seed, 3));

  auto user_blocks = assign_blocks(spec.n_users, spec.block_fraction, block_rng);
  auto source_blocks = assign_blocks(spec.m_sources, spec.block_fraction, block_rng);
  auto user_ideology = plant_ideology(user_blocks, spec.ideology_spread, ideology_rng);
  auto source_ideology = plant_ideology(source_blocks, spec.ideology_spread, ideology_rng);

  const Index n = spec.n_users;
  const Index m = spec.m_sources;
  MatrixXd a = MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const bool same = user_blocks[static_cast<std::size_t>(i)] == user_blocks[static_cast<std::size_t>(j)];
      if (edge_rng.bernoulli(same ? spec.p_in : spec.p_out)) a(i, j) = a(j, i) = 1.0;
    }

  MatrixXd c = MatrixXd::Zero(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index s = 0; s < m; ++s) {
      const bool aligned = user_blocks[static_cast<std::size_t>(i)] == source_blocks[static_cast<std::size_t>(s)];
      c(i, s) = count_rng.poisson(aligned ? spec.lambda_in : spec.lambda_out);
    }

  auto users = make_ids('u', spec.n_users);
  auto sources = make_ids('s', spec.m_sources);
  return SyntheticInstance{InteractionMatrix(std::move(a), users, InteractionMode::Raw),
                           EngagementMatrix(std::move(c), users, std::move(sources)),
                           std::move(user_blocks),
                           std::move(source_blocks),
                           std::move(user_ideology),
                           std::move(source_ideology)};
}

SyntheticFiles write_instance(const SyntheticInstance& instance, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  SyntheticFiles files{dir / "edges.tsv", dir / "engagement.tsv", dir / "user_truth.csv",
                       dir / "source_truth.csv"};

  const auto& users = instance.A.user_ids();
  std::vector<Edge> edges;
  const MatrixXd& a = instance.A.values();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) edges.push_back({users[static_cast<std::size_t>(i)], users[static_cast<std::size_t>(j)], a(i, j)});
  write_edge_file(files.edges, edges);

  std::vector<Engagement> records;
  const MatrixXd& c = instance.C.values();
  const auto& sources = instance.C.source_ids();
  for (Index i = 0; i < c.rows(); ++i)
    for (Index s = 0; s < c.cols(); ++s)
      if (c(i, s) != 0.0) records.push_back({users[static_cast<std::size_t>(i)], sources[static_cast<std::size_t>(s)], c(i, s)});
  write_engagement_file(files.engagement, records);

  write_score_file(files.user_truth, ScoreSeries(users, instance.user_ideology));
  write_score_file(files.source_truth, ScoreSeries(sources, instance.source_ideology));
  return files;
}

}  // namespace ideofactor
