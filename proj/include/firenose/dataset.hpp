#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "firenose/types.hpp"

namespace firenose {

// One gas-sensor array recording: T timesteps by S sensors of raw voltage,
// plus the per-sensor baseline (averaged ambient response) of that run.
struct OdourRecording {
  Matrix values;                 // T x S, volts
  Vector baseline;               // S, volts
  double sample_rate = 10.0;     // samples per minute
  ClassId class_id = 0;
  std::map<std::string, std::string> metadata;

  Eigen::Index timesteps() const { return values.rows(); }
  Eigen::Index sensors() const { return values.cols(); }

  // Throws DomainError/DimensionError when an invariant does not hold.
  void validate() const;
};

// Per-sensor mean of the leading `fraction` of the recording (at least one row).
Vector estimate_baseline(const Matrix& values, double fraction = 0.05);

struct LabeledDataset {
  Matrix rows;                              // N x D
  Labels labels;                            // N
  std::vector<std::string> class_names;     // K, id = position
  std::optional<ClassId> negative_class;    // ambient air ("NA")
  std::vector<std::string> column_names;    // optional, D when present

  std::size_t size() const { return labels.size(); }
  std::size_t num_classes() const { return class_names.size(); }
  Eigen::Index dims() const { return rows.cols(); }

  // Samples per class id.
  std::vector<std::size_t> class_counts() const;

  void validate() const;

  // Same labels and metadata, different feature values.
  LabeledDataset with_rows(Matrix new_rows, std::vector<std::string> names = {}) const;
};

std::optional<ClassId> find_class(const std::vector<std::string>& names, const std::string& name);

struct SplitFractions {
  double train = 0.6;
  double validation = 0.1;
  double test = 0.3;
};

struct SplitIndices {
  IndexList train;
  IndexList validation;
  IndexList test;
  Seed seed = 0;
};

// Stratified per-class random partition. Within each class the part sizes
// follow the fractions by largest-remainder rounding, so every part is within
// one sample of its exact share. Index lists are returned sorted.
SplitIndices split(const Labels& labels, std::size_t num_classes, const SplitFractions& fractions, Seed seed);

inline SplitIndices split(const LabeledDataset& dataset, const SplitFractions& fractions, Seed seed) {
  return split(dataset.labels, dataset.num_classes(), fractions, seed);
}

}  // namespace firenose
