#include "firenose/pca.hpp"

#include <cmath>
#include <string>

#include "firenose/csv.hpp"
#include "firenose/error.hpp"

namespace firenose {

PcaModel fit_pca(const Matrix& data) {
  if (data.rows() < 2) throw DimensionError("insufficient samples: PCA needs at least 2 rows, got " + std::to_string(data.rows()));
  if (data.cols() < 1) throw DimensionError("PCA needs at least one column");
  if (!data.allFinite()) throw DomainError("PCA input contains non-finite values");

  const auto n = data.rows();
  const auto d = data.cols();
  PcaModel model;
  model.n_samples = n;
  model.mean = data.colwise().mean().transpose();
  Matrix centered = data.rowwise() - model.mean.transpose();
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  cov = 0.5 * (cov + cov.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw DomainError("covariance eigendecomposition failed");

  // Eigen returns ascending order.
  model.latent.resize(d);
  model.loadings.resize(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    model.latent(j) = eig.eigenvalues()(d - 1 - j);
    model.loadings.col(j) = eig.eigenvectors().col(d - 1 - j);
  }

  const double clamp = 1e-12 * std::max(1.0, cov.trace());
  for (Eigen::Index j = 0; j < d; ++j)
    if (model.latent(j) < clamp) model.latent(j) = 0.0;

  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index arg = 0;
    model.loadings.col(j).cwiseAbs().maxCoeff(&arg);
    if (model.loadings(arg, j) < 0.0) model.loadings.col(j) *= -1.0;
  }

  const double total = model.latent.sum();
  model.proportion = total > 0.0 ? Vector(model.latent / total) : Vector(Vector::Zero(d));
  model.cumulative.resize(d);
  double run = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    run += model.proportion(j);
    model.cumulative(j) = run;
  }
  return model;
}

Matrix transform(const PcaModel& model, const Matrix& data, Eigen::Index pc_count) {
  if (data.cols() != model.dims())
    throw DimensionError("PCA input has " + std::to_string(data.cols()) + " columns, model expects " +
                         std::to_string(model.dims()));
  if (pc_count < 1 || pc_count > model.dims())
    throw ConfigError("principal component count " + std::to_string(pc_count) + " outside [1, " +
                      std::to_string(model.dims()) + "]");
  return (data.rowwise() - model.mean.transpose()) * model.loadings.leftCols(pc_count);
}

Matrix inverse_transform(const PcaModel& model, const Matrix& scores) {
  if (scores.cols() < 1 || scores.cols() > model.dims()) throw DimensionError("score width outside model range");
  Matrix out = scores * model.loadings.leftCols(scores.cols()).transpose();
  out.rowwise() += model.mean.transpose();
  return out;
}

std::vector<VarianceRow> variance_table(const PcaModel& model) {
  std::vector<VarianceRow> rows;
  for (Eigen::Index j = 0; j < model.dims(); ++j)
    rows.push_back({static_cast<int>(j + 1), model.latent(j), model.proportion(j), model.cumulative(j)});
  return rows;
}

void write_variance_table(const PcaModel& model, const std::filesystem::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : variance_table(model))
    rows.push_back({std::to_string(r.component), format_double(r.latent), format_double(r.proportion),
                    format_double(r.cumulative)});
  write_table(path, {"pc", "latent", "proportion", "cumulative"}, rows);
}

}  // namespace firenose
