#pragma once

#include "ideofactor/rng.hpp"
#include "ideofactor/solver.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>
#include <string>

namespace fixture {

using Eigen::MatrixXd;

/// A = U* Hu* U*^T and C = U* Hs* V*^T exactly, with column-orthonormal U*, V*
/// on disjoint row supports and diagonal Hu*, Hs*. The planted factors are a
/// fixed point of every update rule.
struct PlantedExact {
  MatrixXd A, C;
  ideofactor::FactorSet truth;
};

inline MatrixXd block_orthonormal(Eigen::Index rows, ideofactor::Rng& rng) {
  MatrixXd x = MatrixXd::Zero(rows, 2);
  const Eigen::Index half = rows / 2;
  for (Eigen::Index i = 0; i < rows; ++i) x(i, i < half ? 0 : 1) = 0.5 + rng.uniform();
  for (Eigen::Index j = 0; j < 2; ++j) x.col(j) /= x.col(j).norm();
  return x;
}

inline PlantedExact planted_exact(Eigen::Index n, Eigen::Index m, std::uint64_t seed) {
  ideofactor::Rng rng(seed);
  PlantedExact p;
  p.truth.U = block_orthonormal(n, rng);
  p.truth.V = block_orthonormal(m, rng);
  p.truth.Hu = Eigen::Vector2d(3.0 + rng.uniform(), 2.0 + rng.uniform()).asDiagonal();
  p.truth.Hs = Eigen::Vector2d(4.0 + rng.uniform(), 2.5 + rng.uniform()).asDiagonal();
  p.A = p.truth.U * p.truth.Hu * p.truth.U.transpose();
  p.C = p.truth.U * p.truth.Hs * p.truth.V.transpose();
  return p;
}

inline bool all_nonnegative_finite(const ideofactor::FactorSet& f) {
  for (const MatrixXd* m : {&f.U, &f.V, &f.Hu, &f.Hs})
    if (m->size() && (!m->allFinite() || m->minCoeff() < 0.0)) return false;
  return true;
}

inline double off_diagonal_ratio(const MatrixXd& u) {
  const MatrixXd g = u.transpose() * u;
  MatrixXd off = g;
  off.diagonal().setZero();
  return off.norm() / g.norm();
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("ideofactor_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& file) const { return path_ / file; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixture
