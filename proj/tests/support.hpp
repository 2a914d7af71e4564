#pragma once

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include "firenose/firenose.hpp"

namespace testing_support {

using firenose::Matrix;

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

inline Eigen::VectorXd random_unit(Eigen::Index dims, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXd v(dims);
  for (Eigen::Index i = 0; i < dims; ++i) v(i) = n(rng);
  return v / v.norm();
}

// Data whose sample covariance (divisor N-1) is exactly Q diag(latent) Q^T.
inline Matrix data_with_covariance(const Eigen::VectorXd& latent, Eigen::Index n, unsigned seed) {
  const Eigen::Index d = latent.size();
  Eigen::MatrixXd z = gaussian_matrix(n, d, seed);
  z.rowwise() -= z.colwise().mean();
  Eigen::MatrixXd cov = z.transpose() * z / static_cast<double>(n - 1);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  Eigen::MatrixXd white = llt.matrixU().transpose().solve(z.transpose()).transpose();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian_matrix(d, d, seed + 1));
  Eigen::MatrixXd q = qr.householderQ();
  return Matrix(white * latent.cwiseSqrt().asDiagonal() * q.transpose());
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(std::filesystem::temp_directory_path() / ("firenose_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testing_support
