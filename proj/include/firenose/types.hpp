#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace firenose {

// Samples are rows; row-major keeps a sample contiguous in memory.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

using ClassId = int;
using Labels = std::vector<ClassId>;
using IndexList = std::vector<std::size_t>;
using Seed = std::uint64_t;

// splitmix64 finalizer. Used to derive independent, reproducible sub-seeds.
inline Seed mix_seed(Seed a, Seed b) {
  Seed z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Rows of `m` selected by `idx`, in order.
inline Matrix take_rows(const Matrix& m, const IndexList& idx) {
  Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
  return out;
}

inline Labels take_labels(const Labels& labels, const IndexList& idx) {
  Labels out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(labels[i]);
  return out;
}

}  // namespace firenose
