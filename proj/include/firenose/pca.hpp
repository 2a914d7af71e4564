#pragma once

#include <filesystem>
#include <vector>

#include "firenose/types.hpp"

namespace firenose {

// Covariance PCA. Loadings are the unit eigenvectors of the sample covariance
// (divisor N-1) as columns, ordered by descending eigenvalue. Each column is
// signed so that its largest-magnitude entry is non-negative.
struct PcaModel {
  Vector mean;        // D
  Matrix loadings;    // D x D
  Vector latent;      // D eigenvalues, descending, >= 0
  Vector proportion;  // latent / sum(latent)
  Vector cumulative;  // running sum of proportion
  Eigen::Index n_samples = 0;

  Eigen::Index dims() const { return mean.size(); }
};

struct VarianceRow {
  int component;  // 1-based
  double latent;
  double proportion;
  double cumulative;
};

// Throws DimensionError when N < 2 ("insufficient samples") and DomainError on
// non-finite input.
PcaModel fit_pca(const Matrix& data);

// Scores of `data` on the first `pc_count` components.
Matrix transform(const PcaModel& model, const Matrix& data, Eigen::Index pc_count);

// Maps scores on the first k components back to the input space.
Matrix inverse_transform(const PcaModel& model, const Matrix& scores);

std::vector<VarianceRow> variance_table(const PcaModel& model);

// `pc,latent,proportion,cumulative`
void write_variance_table(const PcaModel& model, const std::filesystem::path& path);

}  // namespace firenose
