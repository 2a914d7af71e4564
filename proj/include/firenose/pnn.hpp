#pragma once

#include <filesystem>
#include <vector>

#include "firenose/types.hpp"

namespace firenose {

struct PnnOptions {
  double spread = 0.08;
  std::vector<double> priors;  // empty: uniform
  std::vector<double> costs;   // empty: all 1
  double tolerance = 0.001;    // minimum normalized margin before a decision is flagged
};

struct PnnDecision {
  ClassId predicted_class = 0;
  std::vector<double> scores;      // P_k C_k f_k(x), normalized to sum 1
  std::vector<double> log_scores;  // log(P_k C_k f_k(x)), unnormalized
  double margin = 0.0;             // top-1 minus top-2 normalized score
  bool ambiguous = false;
};

// Probabilistic neural network (Parzen-window Bayes classifier).
//
// Every training vector is kept as a pattern unit. The class-conditional
// density is the mean of isotropic Gaussian kernels of width `spread`
// centred on the class patterns,
//
//   f_k(x) = 1 / ((2 pi)^(n/2) sigma^n m_k) * sum_i exp(-|x - x_ki|^2 / (2 sigma^2)),
//
// and the decision unit picks argmax_k P_k C_k f_k(x). Kernel sums are taken
// in log space so narrow kernels far from every pattern cannot underflow the
// decision.
class PnnModel {
 public:
  PnnModel() = default;

  // Throws ConfigError for a non-positive spread, bad priors/costs, or a
  // declared class without patterns.
  static PnnModel fit(const Matrix& train, const Labels& labels, std::size_t num_classes,
                      const PnnOptions& options = {});

  std::size_t num_classes() const { return patterns_.size(); }
  Eigen::Index input_dim() const { return input_dim_; }
  double spread() const { return spread_; }
  double tolerance() const { return tolerance_; }
  const std::vector<double>& priors() const { return priors_; }
  const std::vector<double>& costs() const { return costs_; }
  const Matrix& patterns(ClassId k) const { return patterns_.at(static_cast<std::size_t>(k)); }
  std::size_t class_size(ClassId k) const { return static_cast<std::size_t>(patterns(k).rows()); }
  std::size_t total_patterns() const;

  double log_density(ClassId k, const Vector& x) const;
  double density(ClassId k, const Vector& x) const;

  PnnDecision classify(const Vector& x) const;
  std::vector<ClassId> predict(const Matrix& queries) const;

  // Dot-product pattern layer for unit-norm inputs: z_in = x . w_j,
  // z_out = exp((z_in - 1) / sigma^2), for every pattern in class order.
  // Requires |x| and every |w_j| to be 1 within 1e-6.
  Vector pattern_unit_form(const Vector& x_unit) const;

  // Versioned JSON. Doubles round-trip exactly.
  void save(const std::filesystem::path& path, const std::vector<std::string>& class_names = {}) const;
  static PnnModel load(const std::filesystem::path& path, std::vector<std::string>* class_names = nullptr);

  std::string to_json(const std::vector<std::string>& class_names = {}) const;
  static PnnModel from_json(const std::string& text, std::vector<std::string>* class_names = nullptr);

 private:
  void check_query(const Vector& x) const;
  double log_kernel_sum(ClassId k, const Vector& x) const;

  std::vector<Matrix> patterns_;
  std::vector<double> priors_;
  std::vector<double> costs_;
  double spread_ = 0.08;
  double tolerance_ = 0.001;
  Eigen::Index input_dim_ = 0;
};

// Single pattern-unit activation exp((x . w - 1) / sigma^2).
double pattern_activation(const Vector& x, const Vector& w, double spread);

struct SpreadSweep {
  double best_spread = 0.0;
  std::vector<std::pair<double, double>> accuracy;  // (spread, validation accuracy %)
};

std::vector<double> default_spread_grid();

// Picks the spread with the highest validation accuracy; ties go to the
// smaller spread.
SpreadSweep spread_sweep(const Matrix& train, const Labels& train_labels, const Matrix& validation,
                         const Labels& validation_labels, std::size_t num_classes,
                         const std::vector<double>& candidates, const PnnOptions& base = {});

}  // namespace firenose
