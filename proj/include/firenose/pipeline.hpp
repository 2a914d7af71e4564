#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "firenose/dataset.hpp"
#include "firenose/featex.hpp"
#include "firenose/metrics.hpp"
#include "firenose/pca.hpp"
#include "firenose/pnn.hpp"

namespace firenose {

enum class PcaFitScope { Train, All };

std::string_view to_string(PcaFitScope scope);
PcaFitScope parse_pca_fit_scope(std::string_view text);

struct PipelineConfig {
  std::vector<FeatureKind> feature_kinds{kAllFeatureKinds.begin(), kAllFeatureKinds.end()};
  int n_repetitions = 50;
  SplitFractions fractions;
  double spread = 0.08;
  std::vector<double> spread_grid;  // non-empty: pick spread per repetition on the validation split
  double tolerance = 0.001;
  int pc_min = 1;
  int pc_max = 0;  // 0: feature dimension
  int top_n_features = 3;
  PcaFitScope pca_fit_scope = PcaFitScope::Train;
  int knn_k = 3;
  Seed master_seed = 1;
  int threads = 0;  // 0: hardware concurrency; results do not depend on it

  void validate() const;
};

// Split seed of one repetition. Shared by every stage so the same repetition
// index always sees the same partition.
inline Seed repetition_seed(Seed master, int repetition) { return mix_seed(master, static_cast<Seed>(repetition)); }

struct FeatureScore {
  FeatureKind kind;
  RepetitionStats stats;
  std::vector<double> accuracies;  // test accuracy % per repetition
};

struct FeatureRanking {
  std::vector<FeatureScore> ranked;  // mean accuracy descending, enum order on ties
  std::vector<std::pair<FeatureKind, std::string>> excluded;

  std::vector<FeatureKind> top(int n) const;
};

struct PcSweep {
  std::vector<FeatureKind> features;
  std::vector<int> pc_counts;
  std::vector<std::vector<double>> mean_accuracy;  // [feature][pc index]
  std::vector<double> cross_feature_mean;          // [pc index]
  int best_pc_count = 1;
};

struct ClassifierSummary {
  RepetitionStats accuracy;  // multi-class test accuracy %
  // Fire-detection metrics over the repetitions where they are defined; empty
  // without a negative class or when no repetition defines them.
  std::optional<RepetitionStats> sensitivity;
  std::optional<RepetitionStats> specificity;
  std::optional<RepetitionStats> binary_accuracy;
  std::vector<std::optional<RepetitionStats>> class_recall;  // per class
  std::vector<double> accuracies;                            // per repetition
};

struct PipelineReport {
  FeatureRanking ranking;
  std::vector<FeatureKind> selected;
  PcSweep pc_sweep;
  int chosen_pc_count = 0;
  std::pair<Eigen::Index, Eigen::Index> hybrid_dims{0, 0};
  std::vector<std::pair<FeatureKind, int>> hybrid_provenance;
  int representative_repetition = 0;
  ConfusionMatrix final_confusion;
  std::optional<BinaryCollapse> final_collapse;
  ClassifierSummary pnn;
  ClassifierSummary knn;
  std::vector<double> spreads;  // spread used per repetition
  std::vector<std::string> warnings;
};

// Stable sort by mean accuracy, highest first.
void rank_by_mean(std::vector<FeatureScore>& scores);

// Component count with the highest accuracy; ties go to the smaller count.
int select_pc_count(const std::vector<int>& pc_counts, const std::vector<double>& mean_accuracy);

// Test accuracy of the PNN over every repetition for each feature, ranked.
FeatureRanking rank_features(const FeatureBank& bank, const PipelineConfig& config);

// PCA-reduce each selected feature to k components for k in the configured
// range and score it over the repetitions. The chosen k maximizes the mean
// accuracy across the selected features; ties go to the smaller k.
PcSweep pc_sweep(const FeatureBank& bank, const std::vector<FeatureKind>& selected, const PipelineConfig& config);

// Horizontal concatenation in the given order. All blocks need the same row
// count and the same width.
FeatureMatrix fuse(const std::vector<std::pair<FeatureKind, Matrix>>& score_blocks);

// PCA per selected feature fitted on `fit_rows` (all rows when empty), every
// row projected onto the first `pc_count` components, then fused.
FeatureMatrix build_hybrid(const FeatureBank& bank, const std::vector<FeatureKind>& selected, int pc_count,
                           const IndexList& fit_rows = {});

PipelineReport run_pipeline(const FeatureBank& bank, const PipelineConfig& config);

// ranking.csv, pc_sweep.csv, confusion.csv, metrics.csv and manifest.json.
void write_report(const PipelineReport& report, const PipelineConfig& config, const LabeledDataset& base,
                  const std::filesystem::path& dir, const std::string& extra_manifest_json = {});

void write_ranking_csv(const FeatureRanking& ranking, int top_n, const std::filesystem::path& path);
void write_pc_sweep_csv(const PcSweep& sweep, const std::filesystem::path& path);

}  // namespace firenose
