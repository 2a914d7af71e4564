#include "firenose/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "firenose/error.hpp"

namespace firenose {

void OdourRecording::validate() const {
  if (values.rows() < 1 || values.cols() < 1) throw DimensionError("recording must have at least one timestep and one sensor");
  if (baseline.size() != values.cols())
    throw DimensionError("baseline length " + std::to_string(baseline.size()) + " does not match " +
                         std::to_string(values.cols()) + " sensors");
  if (!values.allFinite()) throw DomainError("recording contains non-finite voltage");
  if (!baseline.allFinite()) throw DomainError("baseline contains non-finite voltage");
}

Vector estimate_baseline(const Matrix& values, double fraction) {
  if (values.rows() < 1) throw DimensionError("cannot estimate baseline of an empty recording");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("baseline fraction must lie in (0, 1]");
  auto n = static_cast<Eigen::Index>(std::ceil(fraction * static_cast<double>(values.rows())));
  n = std::clamp<Eigen::Index>(n, 1, values.rows());
  return values.topRows(n).colwise().mean().transpose();
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (auto l : labels) {
    if (l >= 0 && static_cast<std::size_t>(l) < counts.size()) ++counts[static_cast<std::size_t>(l)];
  }
  return counts;
}

void LabeledDataset::validate() const {
  if (static_cast<std::size_t>(rows.rows()) != labels.size())
    throw DimensionError("label count " + std::to_string(labels.size()) + " does not match row count " +
                         std::to_string(rows.rows()));
  const auto k = static_cast<ClassId>(class_names.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= k)
      throw DimensionError("label " + std::to_string(labels[i]) + " at row " + std::to_string(i) + " outside [0, " +
                           std::to_string(k) + ")");
  }
  if (negative_class && (*negative_class < 0 || *negative_class >= k))
    throw ConfigError("negative class id " + std::to_string(*negative_class) + " is not a valid class");
  if (!column_names.empty() && static_cast<Eigen::Index>(column_names.size()) != rows.cols())
    throw DimensionError("column name count does not match column count");
}

LabeledDataset LabeledDataset::with_rows(Matrix new_rows, std::vector<std::string> names) const {
  LabeledDataset out;
  out.rows = std::move(new_rows);
  out.labels = labels;
  out.class_names = class_names;
  out.negative_class = negative_class;
  out.column_names = std::move(names);
  return out;
}

std::optional<ClassId> find_class(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<ClassId>(it - names.begin());
}

namespace {

// Largest-remainder apportionment of n items over the given shares.
std::array<std::size_t, 3> apportion(std::size_t n, const std::array<double, 3>& shares) {
  std::array<std::size_t, 3> out{};
  std::array<double, 3> rem{};
  std::size_t used = 0;
  for (int p = 0; p < 3; ++p) {
    double exact = shares[p] * static_cast<double>(n);
    out[p] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[p] = exact - static_cast<double>(out[p]);
    used += out[p];
  }
  while (used < n) {
    int best = 0;
    for (int p = 1; p < 3; ++p)
      if (rem[p] > rem[best] + 1e-12) best = p;
    ++out[best];
    rem[best] = -1.0;
    ++used;
  }
  // Every requested part receives at least one sample.
  for (int p = 0; p < 3; ++p) {
    if (shares[p] > 0.0 && out[p] == 0) {
      int donor = static_cast<int>(std::max_element(out.begin(), out.end()) - out.begin());
      --out[donor];
      ++out[p];
    }
  }
  return out;
}

}  // namespace

SplitIndices split(const Labels& labels, std::size_t num_classes, const SplitFractions& fractions, Seed seed) {
  const std::array<double, 3> shares{fractions.train, fractions.validation, fractions.test};
  double total = 0.0;
  std::size_t parts = 0;
  for (double s : shares) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("split fractions must be non-negative");
    total += s;
    if (s > 0.0) ++parts;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");

  std::vector<IndexList> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto c = labels[i];
    if (c < 0 || static_cast<std::size_t>(c) >= num_classes) throw DimensionError("label outside class range");
    by_class[static_cast<std::size_t>(c)].push_back(i);
  }

  SplitIndices out;
  out.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < num_classes; ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    if (idx.size() < parts)
      throw ConfigError("insufficient class population: class " + std::to_string(c) + " has " +
                        std::to_string(idx.size()) + " samples for " + std::to_string(parts) + " split parts");
    std::shuffle(idx.begin(), idx.end(), rng);
    auto sizes = apportion(idx.size(), shares);
    auto it = idx.begin();
    out.train.insert(out.train.end(), it, it + static_cast<std::ptrdiff_t>(sizes[0]));
    it += static_cast<std::ptrdiff_t>(sizes[0]);
    out.validation.insert(out.validation.end(), it, it + static_cast<std::ptrdiff_t>(sizes[1]));
    it += static_cast<std::ptrdiff_t>(sizes[1]);
    out.test.insert(out.test.end(), it, idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

}  // namespace firenose
