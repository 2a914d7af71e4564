#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace firenose;
using testing_support::data_with_covariance;
using testing_support::gaussian_matrix;

namespace {

// Points on y = x with small isotropic noise.
Matrix diagonal_line(Eigen::Index n) {
  Matrix noise = gaussian_matrix(n, 2, 21, 1e-3);
  Matrix x(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = -2.0 + 4.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    x.row(i) << t + noise(i, 0), t + noise(i, 1);
  }
  return x;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("line y = x: leading direction and proportion against the 2x2 closed form") {
  Matrix x = diagonal_line(200);
  auto model = fit_pca(x);

  // Sample covariance entries written out, then the 2x2 symmetric eigenproblem by formula.
  const double n = 200.0;
  double mx = 0, my = 0;
  for (Eigen::Index i = 0; i < 200; ++i) mx += x(i, 0), my += x(i, 1);
  mx /= n, my /= n;
  double a = 0, b = 0, c = 0;
  for (Eigen::Index i = 0; i < 200; ++i) {
    a += (x(i, 0) - mx) * (x(i, 0) - mx);
    b += (x(i, 0) - mx) * (x(i, 1) - my);
    c += (x(i, 1) - my) * (x(i, 1) - my);
  }
  a /= n - 1, b /= n - 1, c /= n - 1;
  const double mid = (a + c) / 2.0, rad = std::sqrt((a - c) * (a - c) / 4.0 + b * b);
  const double l1 = mid + rad, l2 = mid - rad;
  double ex = b, ey = l1 - a;
  const double en = std::hypot(ex, ey);
  ex /= en, ey /= en;

  CHECK(std::abs(model.latent(0) - l1) < 1e-12);
  CHECK(std::abs(model.latent(1) - l2) < 1e-12);
  CHECK(std::abs(std::abs(model.loadings(0, 0)) - std::abs(ex)) < 1e-9);
  CHECK(std::abs(std::abs(model.loadings(1, 0)) - std::abs(ey)) < 1e-9);
  CHECK(std::abs(model.loadings(0, 0) - 1.0 / std::sqrt(2.0)) < 1e-3);
  CHECK(std::abs(model.loadings(1, 0) - 1.0 / std::sqrt(2.0)) < 1e-3);
  CHECK(model.proportion(0) >= 0.99);
}

TEST_CASE("k = 1 scores are signed distances along the diagonal") {
  Matrix x = diagonal_line(50);
  auto model = fit_pca(x);
  Matrix s = transform(model, x, 1);
  REQUIRE(s.cols() == 1);
  const double mx = x.col(0).mean(), my = x.col(1).mean();
  const double ux = model.loadings(0, 0), uy = model.loadings(1, 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double direct = (x(i, 0) - mx) * ux + (x(i, 1) - my) * uy;
    CHECK(std::abs(s(i, 0) - direct) < 1e-9);
  }
  // The loading is the diagonal up to the 1e-3 noise, so the signed distance is (dx + dy)/sqrt(2).
  CHECK(std::abs(s(0, 0) - ((x(0, 0) - mx) + (x(0, 1) - my)) / std::sqrt(2.0)) < 1e-3);
}

TEST_CASE("constant column has zero variance") {
  Matrix x = gaussian_matrix(60, 3, 5);
  x.col(1).setConstant(2.5);
  auto model = fit_pca(x);
  CHECK(model.latent(2) == 0.0);
  CHECK(model.proportion(2) == 0.0);
  CHECK(std::abs(model.loadings(1, 2)) == doctest::Approx(1.0));
}

TEST_CASE("injected eigenvalues reproduce the reference variance proportions") {
  const auto latent = vec({0.1064, 0.0474, 0.0335, 0.0144, 0.0096, 0.0073, 0.0019, 0.0007});
  const auto reference = vec({0.4813, 0.2141, 0.1517, 0.0650, 0.0435, 0.0329, 0.0085, 0.0030});
  const auto reference_cumulative = vec({0.4813, 0.6954, 0.8471, 0.9121, 0.9556, 0.9886, 0.9970, 1.0000});
  auto model = fit_pca(data_with_covariance(latent, 1000, 3));
  for (Eigen::Index j = 0; j < 8; ++j) {
    CHECK(std::abs(model.latent(j) - latent(j)) < 1e-12);
    CHECK(std::abs(model.proportion(j) - reference(j)) <= 0.0005);
    CHECK(std::abs(model.cumulative(j) - reference_cumulative(j)) <= 0.0005);
  }
  // Reference cumulative column is the running sum of the reference proportions.
  double run = 0.0;
  for (Eigen::Index j = 0; j < 8; ++j) {
    run += reference(j);
    CHECK(std::abs(run - reference_cumulative(j)) <= 0.0002);
  }
}

TEST_CASE("ten-component table shape") {
  const auto latent = vec({7.8692, 3.5164, 1.8546, 0.7612, 0.4236, 0.2476, 0.0461, 0.0176, 0.0041, 0.0015});
  const auto reference = vec({0.5338, 0.2385, 0.1258, 0.0516, 0.0287, 0.0170, 0.0030, 0.0012, 0.0003, 0.0001});
  auto model = fit_pca(data_with_covariance(latent, 500, 8));
  auto table = variance_table(model);
  REQUIRE(table.size() == 10);
  CHECK(table.front().component == 1);
  CHECK(table.back().component == 10);
  CHECK(std::abs(table.back().cumulative - 1.0) < 1e-12);
  for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(table[j].proportion - reference(static_cast<Eigen::Index>(j))) <= 0.0005);
}

TEST_CASE("variance table is consistent") {
  auto model = fit_pca(gaussian_matrix(80, 6, 12) * gaussian_matrix(6, 6, 13));
  auto table = variance_table(model);
  double run = 0.0;
  for (std::size_t j = 0; j < table.size(); ++j) {
    run += table[j].proportion;
    CHECK(std::abs(table[j].cumulative - run) < 1e-9);
    if (j > 0) CHECK(table[j].latent <= table[j - 1].latent);
    CHECK(table[j].latent >= 0.0);
  }
  CHECK(std::abs(table.back().cumulative - 1.0) < 1e-12);
}

TEST_CASE("isotropic data spreads variance evenly") {
  auto model = fit_pca(gaussian_matrix(20000, 5, 17));
  for (Eigen::Index j = 0; j < 5; ++j) CHECK(std::abs(model.proportion(j) - 0.2) < 0.05);
}

TEST_CASE("single column") {
  auto model = fit_pca(gaussian_matrix(10, 1, 2));
  CHECK(model.proportion(0) == 1.0);
  CHECK(model.cumulative(0) == 1.0);
  CHECK(model.loadings(0, 0) == 1.0);
}

TEST_CASE("numerical properties") {
  Matrix x = gaussian_matrix(120, 6, 31) * gaussian_matrix(6, 6, 32);
  auto model = fit_pca(x);
  const Eigen::Index d = 6;

  SUBCASE("orthonormal loadings with the sign convention") {
    Matrix gram = model.loadings.transpose() * model.loadings;
    CHECK((gram - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-9);
    for (Eigen::Index j = 0; j < d; ++j) {
      Eigen::Index arg;
      model.loadings.col(j).cwiseAbs().maxCoeff(&arg);
      CHECK(model.loadings(arg, j) >= 0.0);
    }
  }
  SUBCASE("latent sum equals total variance") {
    Matrix centered = x.rowwise() - x.colwise().mean();
    const double trace = (centered.transpose() * centered).trace() / 119.0;
    CHECK(std::abs(model.latent.sum() - trace) < 1e-9 * trace);
  }
  SUBCASE("mean row maps to zero and full rank reconstructs") {
    Matrix mean_row = model.mean.transpose();
    CHECK(transform(model, mean_row, 3).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((inverse_transform(model, transform(model, x, d)) - x).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("scores are decorrelated") {
    Matrix s = transform(model, x, d);
    Matrix cov = s.transpose() * s / 119.0;
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        if (i != j) CHECK(std::abs(cov(i, j)) < 1e-6 * model.latent(0));
  }
  SUBCASE("translation invariance") {
    Eigen::RowVectorXd shift(d);
    shift << 3.0, -1.0, 100.0, 0.5, -7.0, 2.0;
    Matrix moved = x.rowwise() + shift;
    auto m2 = fit_pca(moved);
    CHECK((transform(m2, moved, d) - transform(model, x, d)).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("reconstruction error follows the discarded latents") {
    for (Eigen::Index k = 1; k < d; ++k) {
      Matrix rec = inverse_transform(model, transform(model, x, k));
      const double err = (rec - x).squaredNorm();
      const double law = model.latent.tail(d - k).sum() * 119.0;
      CHECK(std::abs(err - law) <= 1e-6 * law);
    }
  }
}

TEST_CASE("pca errors") {
  CHECK_THROWS_WITH_AS(fit_pca(Matrix::Ones(1, 3)), doctest::Contains("insufficient samples"), DimensionError);
  Matrix bad = Matrix::Ones(3, 2);
  bad(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(fit_pca(bad), DomainError);
  auto model = fit_pca(gaussian_matrix(10, 3, 1));
  CHECK_THROWS_AS(transform(model, Matrix::Ones(2, 2), 1), DimensionError);
  CHECK_THROWS_AS(transform(model, Matrix::Ones(2, 3), 0), ConfigError);
  CHECK_THROWS_AS(transform(model, Matrix::Ones(2, 3), 4), ConfigError);
}

TEST_CASE("zero total variance yields zero proportions") {
  auto model = fit_pca(Matrix::Constant(5, 3, 1.0));
  CHECK(model.latent.isZero());
  CHECK(model.proportion.isZero());
}

TEST_CASE("variance table CSV layout") {
  testing_support::TempDir dir("pca_csv");
  auto model = fit_pca(gaussian_matrix(10, 2, 4));
  write_variance_table(model, dir.path() / "v.csv");
  auto text = testing_support::slurp(dir.path() / "v.csv");
  CHECK(text.rfind("pc,latent,proportion,cumulative\n1,", 0) == 0);
}
