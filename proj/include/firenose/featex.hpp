#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "firenose/dataset.hpp"
#include "firenose/types.hpp"

namespace firenose {

// Baseline-correction features. Each maps the sensor-array voltages at one
// time instant to dimensionless unit-ratio values.
enum class FeatureKind { RLSSV, RLV, RSSV, RV, FVC };

inline constexpr std::array<FeatureKind, 5> kAllFeatureKinds{FeatureKind::RLSSV, FeatureKind::RLV, FeatureKind::RSSV,
                                                             FeatureKind::RV, FeatureKind::FVC};

std::string_view to_string(FeatureKind kind);
// Case-insensitive; throws ConfigError on unknown names.
FeatureKind parse_feature_kind(std::string_view name);

// Whether the extractor needs a per-sensor baseline.
constexpr bool needs_baseline(FeatureKind kind) { return kind == FeatureKind::RV || kind == FeatureKind::FVC; }

// Logarithm base used by the log features. Recorded in provenance.
inline constexpr double kLogBase = 10.0;

// Relative logarithmic sum-squared voltage: log v_i / log(sum_j v_j^2).
Vector rlssv(const Vector& v);
// Relative logarithmic voltage: log v_i / v_i.
Vector rlv(const Vector& v);
// Relative sum-squared voltage: v_i / sqrt(sum_j v_j^2). Unit L2 norm.
Vector rssv(const Vector& v);
// Relative voltage against the baseline: v_i / v0_i.
Vector rv(const Vector& v, const Vector& baseline);
// Fractional voltage change: (v0bar_i - v_i) / v0bar_i.
Vector fvc(const Vector& v, const Vector& averaged_baseline);

// Dispatch on kind. `baseline` is required for RV and FVC.
Vector extract(FeatureKind kind, const Vector& v, const Vector* baseline = nullptr);

// Extractor applied to every timestep of the recording, with the recording's
// baseline. Errors are rethrown with the offending timestep index.
Matrix extract_recording(const OdourRecording& rec, FeatureKind kind);

// Column-wise mean over the final ceil(T * window_fraction) timesteps.
Vector response_point(const Matrix& feature_series, double window_fraction = 0.1);

// A feature matrix plus where it came from. Hybrid matrices list the
// (kind, pc_count) pair of every fused block in order.
struct FeatureMatrix {
  Matrix values;
  std::optional<FeatureKind> kind;  // empty for hybrid
  std::vector<std::pair<FeatureKind, int>> provenance;
  double log_base = kLogBase;

  bool is_hybrid() const { return !kind.has_value(); }
  std::vector<std::string> column_names() const;
};

// One feature matrix per extractor over a shared label set. Extractors whose
// preconditions fail on the data are recorded in `excluded` with the reason.
struct FeatureBank {
  LabeledDataset base;  // labels, class names; rows hold the raw response vectors
  std::vector<std::pair<FeatureKind, FeatureMatrix>> features;
  std::vector<std::pair<FeatureKind, std::string>> excluded;

  const FeatureMatrix& at(FeatureKind kind) const;
  bool has(FeatureKind kind) const;
  LabeledDataset dataset(FeatureKind kind) const;

  // Extract every kind per timestep, then reduce each recording to its
  // response point. Row order follows the recordings.
  static FeatureBank from_recordings(const std::vector<OdourRecording>& recordings,
                                     const std::vector<std::string>& class_names,
                                     std::optional<ClassId> negative_class = std::nullopt,
                                     double window_fraction = 0.1,
                                     const std::vector<FeatureKind>& kinds = {kAllFeatureKinds.begin(),
                                                                              kAllFeatureKinds.end()});

  // Treat each dataset row as one instant of the array. RV and FVC need a
  // baseline; without one they are excluded.
  static FeatureBank from_rows(const LabeledDataset& dataset, const std::optional<Vector>& baseline,
                               const std::vector<FeatureKind>& kinds = {kAllFeatureKinds.begin(),
                                                                        kAllFeatureKinds.end()});
};

// Row-wise extraction over a dataset. Errors name the offending row.
FeatureMatrix extract_rows(const Matrix& rows, FeatureKind kind, const Vector* baseline = nullptr);

}  // namespace firenose
