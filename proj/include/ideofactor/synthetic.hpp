#pragma once

// Two-block planted instances with known user/source sides and continuous
// ideologies.

#include "ideofactor/data_model.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace ideofactor {

struct SyntheticSpec {
  int n_users = 200;
  int m_sources = 60;
  double block_fraction = 0.5;  // share of block 0 (liberal side)
  double p_in = 0.10;
  double p_out = 0.01;
  double lambda_in = 3.0;
  double lambda_out = 0.2;
  double ideology_spread = 0.15;  // half-width of uniform noise around 0.25 / 0.75
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticInstance {
  InteractionMatrix A;
  EngagementMatrix C;
  std::vector<int> user_blocks;
  std::vector<int> source_blocks;
  std::vector<double> user_ideology;
  std::vector<double> source_ideology;
};

/// Undirected Bernoulli user graph (symmetric A, weight 1) and Poisson share
/// counts; block membership is shuffled over ids with exact block sizes.
SyntheticInstance generate(const SyntheticSpec& spec);

struct SyntheticFiles {
  std::filesystem::path edges;
  std::filesystem::path engagement;
  std::filesystem::path user_truth;
  std::filesystem::path source_truth;
};

/// Writes edges.tsv, engagement.tsv, user_truth.csv and source_truth.csv.
SyntheticFiles write_instance(const SyntheticInstance& instance, const std::filesystem::path& dir);

}  // namespace ideofactor
