#include "firenose/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "firenose/csv.hpp"
#include "firenose/error.hpp"
#include "firenose/knn.hpp"
#include "firenose/parallel.hpp"

namespace firenose {

namespace fs = std::filesystem;

std::string_view to_string(PcaFitScope scope) { return scope == PcaFitScope::Train ? "train" : "all"; }

PcaFitScope parse_pca_fit_scope(std::string_view text) {
  if (text == "train") return PcaFitScope::Train;
  if (text == "all") return PcaFitScope::All;
  throw ConfigError("pca fit scope must be 'train' or 'all', got '" + std::string(text) + "'");
}

void PipelineConfig::validate() const {
  if (feature_kinds.empty()) throw ConfigError("no feature kinds configured");
  if (n_repetitions < 1) throw ConfigError("n_repetitions must be at least 1");
  if (top_n_features < 1 || static_cast<std::size_t>(top_n_features) > feature_kinds.size())
    throw ConfigError("top_n_features must lie in [1, " + std::to_string(feature_kinds.size()) + "]");
  if (!(spread > 0.0)) throw ConfigError("spread must be positive");
  for (double s : spread_grid)
    if (!(s > 0.0)) throw ConfigError("spread grid values must be positive");
  if (pc_min < 1) throw ConfigError("pc_min must be at least 1");
  if (pc_max != 0 && pc_max < pc_min) throw ConfigError("empty principal component sweep range");
  if (knn_k < 1) throw ConfigError("knn k must be positive");
  if (!(fractions.test > 0.0)) throw ConfigError("the test fraction must be positive");
}

std::vector<FeatureKind> FeatureRanking::top(int n) const {
  std::vector<FeatureKind> out;
  for (int i = 0; i < n && static_cast<std::size_t>(i) < ranked.size(); ++i) out.push_back(ranked[static_cast<std::size_t>(i)].kind);
  return out;
}

namespace {

struct Partition {
  Matrix train, validation, test;
  Labels train_labels, validation_labels, test_labels;
};

Partition partition(const Matrix& x, const Labels& y, const SplitIndices& s) {
  return {take_rows(x, s.train),      take_rows(x, s.validation),      take_rows(x, s.test),
          take_labels(y, s.train),    take_labels(y, s.validation),    take_labels(y, s.test)};
}

std::vector<SplitIndices> make_splits(const LabeledDataset& base, const PipelineConfig& config) {
  std::vector<SplitIndices> splits;
  for (int r = 0; r < config.n_repetitions; ++r)
    splits.push_back(split(base, config.fractions, repetition_seed(config.master_seed, r)));
  return splits;
}

double choose_spread(const Partition& p, std::size_t K, const PipelineConfig& config) {
  if (config.spread_grid.empty() || p.validation.rows() == 0) return config.spread;
  PnnOptions opt;
  opt.tolerance = config.tolerance;
  return spread_sweep(p.train, p.train_labels, p.validation, p.validation_labels, K, config.spread_grid, opt).best_spread;
}

std::vector<ClassId> pnn_predict(const Partition& p, std::size_t K, double spread, const PipelineConfig& config) {
  PnnOptions opt;
  opt.spread = spread;
  opt.tolerance = config.tolerance;
  return PnnModel::fit(p.train, p.train_labels, K, opt).predict(p.test);
}

int resolve_pc_max(const PipelineConfig& config, Eigen::Index dims) {
  int hi = config.pc_max == 0 ? static_cast<int>(dims) : std::min(config.pc_max, static_cast<int>(dims));
  if (config.pc_min > hi) throw ConfigError("empty principal component sweep range");
  return hi;
}

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(std::string(name) + ": " + e.what());
  }
}

std::optional<RepetitionStats> stats_of_defined(const std::vector<double>& values) {
  std::vector<double> defined;
  for (double v : values)
    if (!std::isnan(v)) defined.push_back(v);
  if (defined.empty()) return std::nullopt;
  return repetition_stats(defined);
}

ClassifierSummary summarize(const std::vector<ConfusionMatrix>& per_rep, std::optional<ClassId> negative) {
  ClassifierSummary s;
  std::vector<double> sens, spec, bacc;
  const std::size_t K = per_rep.front().num_classes();
  std::vector<std::vector<double>> recall(K);
  for (const auto& cm : per_rep) {
    s.accuracies.push_back(accuracy(cm));
    if (negative) {
      auto m = binary_metrics(binary_collapse(cm, *negative));
      sens.push_back(m.sensitivity);
      spec.push_back(m.specificity);
      bacc.push_back(m.accuracy);
    }
    for (std::size_t k = 0; k < K; ++k) {
      const long n = cm.actual_count(static_cast<ClassId>(k));
      recall[k].push_back(n > 0 ? class_recall(cm, static_cast<ClassId>(k)) : std::numeric_limits<double>::quiet_NaN());
    }
  }
  s.accuracy = repetition_stats(s.accuracies);
  s.sensitivity = stats_of_defined(sens);
  s.specificity = stats_of_defined(spec);
  s.binary_accuracy = stats_of_defined(bacc);
  for (auto& r : recall) s.class_recall.push_back(stats_of_defined(r));
  return s;
}

}  // namespace

FeatureRanking rank_features(const FeatureBank& bank, const PipelineConfig& config) {
  config.validate();
  const auto& base = bank.base;
  const auto K = base.num_classes();
  const auto splits = make_splits(base, config);

  FeatureRanking ranking;
  for (const auto& ex : bank.excluded)
    if (std::find(config.feature_kinds.begin(), config.feature_kinds.end(), ex.first) != config.feature_kinds.end())
      ranking.excluded.push_back(ex);

  for (auto kind : config.feature_kinds) {
    if (!bank.has(kind)) {
      if (std::none_of(ranking.excluded.begin(), ranking.excluded.end(), [kind](const auto& e) { return e.first == kind; }))
        ranking.excluded.emplace_back(kind, "not extracted");
      continue;
    }
    const Matrix& x = bank.at(kind).values;
    FeatureScore score{kind, {}, std::vector<double>(splits.size())};
    parallel_for(splits.size(), config.threads, [&](std::size_t r) {
      auto p = partition(x, base.labels, splits[r]);
      score.accuracies[r] = accuracy(pnn_predict(p, K, choose_spread(p, K, config), config), p.test_labels);
    });
    score.stats = repetition_stats(score.accuracies);
    ranking.ranked.push_back(std::move(score));
  }
  rank_by_mean(ranking.ranked);
  return ranking;
}

void rank_by_mean(std::vector<FeatureScore>& scores) {
  std::stable_sort(scores.begin(), scores.end(),
                   [](const FeatureScore& a, const FeatureScore& b) { return a.stats.mean > b.stats.mean; });
}

int select_pc_count(const std::vector<int>& pc_counts, const std::vector<double>& mean_accuracy) {
  if (pc_counts.empty() || pc_counts.size() != mean_accuracy.size()) throw ConfigError("empty principal component sweep range");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pc_counts.size(); ++i)
    if (mean_accuracy[i] > mean_accuracy[best] ||
        (mean_accuracy[i] == mean_accuracy[best] && pc_counts[i] < pc_counts[best]))
      best = i;
  return pc_counts[best];
}

PcSweep pc_sweep(const FeatureBank& bank, const std::vector<FeatureKind>& selected, const PipelineConfig& config) {
  config.validate();
  if (selected.empty()) throw ConfigError("no features selected for the principal component sweep");
  const auto& base = bank.base;
  const auto K = base.num_classes();
  const auto splits = make_splits(base, config);

  PcSweep sweep;
  sweep.features = selected;
  const auto dims = bank.at(selected.front()).values.cols();
  for (auto kind : selected)
    if (bank.at(kind).values.cols() != dims) throw DimensionError("selected features differ in width");
  const int hi = resolve_pc_max(config, dims);
  for (int k = config.pc_min; k <= hi; ++k) sweep.pc_counts.push_back(k);
  const std::size_t nk = sweep.pc_counts.size();

  for (auto kind : selected) {
    const Matrix& x = bank.at(kind).values;
    std::optional<PcaModel> global;
    if (config.pca_fit_scope == PcaFitScope::All) global = fit_pca(x);
    // acc[r][k index]
    std::vector<std::vector<double>> acc(splits.size(), std::vector<double>(nk));
    parallel_for(splits.size(), config.threads, [&](std::size_t r) {
      const PcaModel model = global ? *global : fit_pca(take_rows(x, splits[r].train));
      const Matrix scores = transform(model, x, model.dims());
      for (std::size_t ki = 0; ki < nk; ++ki) {
        const Matrix reduced = scores.leftCols(sweep.pc_counts[ki]);
        auto p = partition(reduced, base.labels, splits[r]);
        acc[r][ki] = accuracy(pnn_predict(p, K, choose_spread(p, K, config), config), p.test_labels);
      }
    });
    std::vector<double> means(nk, 0.0);
    for (std::size_t ki = 0; ki < nk; ++ki) {
      for (const auto& row : acc) means[ki] += row[ki];
      means[ki] /= static_cast<double>(acc.size());
    }
    sweep.mean_accuracy.push_back(std::move(means));
  }

  sweep.cross_feature_mean.assign(nk, 0.0);
  for (std::size_t ki = 0; ki < nk; ++ki) {
    for (const auto& f : sweep.mean_accuracy) sweep.cross_feature_mean[ki] += f[ki];
    sweep.cross_feature_mean[ki] /= static_cast<double>(selected.size());
  }
  sweep.best_pc_count = select_pc_count(sweep.pc_counts, sweep.cross_feature_mean);
  return sweep;
}

FeatureMatrix fuse(const std::vector<std::pair<FeatureKind, Matrix>>& score_blocks) {
  if (score_blocks.empty()) throw ConfigError("nothing to fuse");
  const auto rows = score_blocks.front().second.rows();
  const auto width = score_blocks.front().second.cols();
  for (const auto& [kind, block] : score_blocks) {
    if (block.rows() != rows)
      throw DimensionError("cannot fuse " + std::string(to_string(kind)) + ": " + std::to_string(block.rows()) +
                           " rows, expected " + std::to_string(rows));
    if (block.cols() != width)
      throw DimensionError("cannot fuse " + std::string(to_string(kind)) + ": " + std::to_string(block.cols()) +
                           " components, expected " + std::to_string(width));
  }
  FeatureMatrix out;
  out.values.resize(rows, width * static_cast<Eigen::Index>(score_blocks.size()));
  Eigen::Index col = 0;
  for (const auto& [kind, block] : score_blocks) {
    out.values.middleCols(col, width) = block;
    out.provenance.emplace_back(kind, static_cast<int>(width));
    col += width;
  }
  return out;
}

FeatureMatrix build_hybrid(const FeatureBank& bank, const std::vector<FeatureKind>& selected, int pc_count,
                           const IndexList& fit_rows) {
  std::vector<std::pair<FeatureKind, Matrix>> blocks;
  for (auto kind : selected) {
    const Matrix& x = bank.at(kind).values;
    const PcaModel model = fit_rows.empty() ? fit_pca(x) : fit_pca(take_rows(x, fit_rows));
    blocks.emplace_back(kind, transform(model, x, pc_count));
  }
  return fuse(blocks);
}

PipelineReport run_pipeline(const FeatureBank& bank, const PipelineConfig& config) {
  config.validate();
  const auto& base = bank.base;
  const auto K = base.num_classes();
  PipelineReport report;

  report.ranking = stage("rank_features", [&] { return rank_features(bank, config); });
  for (const auto& [kind, why] : report.ranking.excluded)
    report.warnings.push_back(std::string(to_string(kind)) + " excluded: " + why);
  if (report.ranking.ranked.empty()) throw Error("rank_features: no feature could be evaluated");
  int n_top = config.top_n_features;
  if (static_cast<std::size_t>(n_top) > report.ranking.ranked.size()) {
    n_top = static_cast<int>(report.ranking.ranked.size());
    report.warnings.push_back("only " + std::to_string(n_top) + " features available for fusion");
  }
  report.selected = report.ranking.top(n_top);

  report.pc_sweep = stage("pc_sweep", [&] { return pc_sweep(bank, report.selected, config); });
  report.chosen_pc_count = report.pc_sweep.best_pc_count;

  const auto splits = make_splits(base, config);
  const std::size_t R = splits.size();
  std::vector<ConfusionMatrix> pnn_cm(R), knn_cm(R);
  report.spreads.assign(R, config.spread);
  stage("final_evaluation", [&] {
    parallel_for(R, config.threads, [&](std::size_t r) {
      const IndexList fit_rows = config.pca_fit_scope == PcaFitScope::Train ? splits[r].train : IndexList{};
      const FeatureMatrix hybrid = build_hybrid(bank, report.selected, report.chosen_pc_count, fit_rows);
      auto p = partition(hybrid.values, base.labels, splits[r]);
      const double spread = choose_spread(p, K, config);
      report.spreads[r] = spread;
      pnn_cm[r] = confusion(pnn_predict(p, K, spread, config), p.test_labels, K, base.class_names);
      const int k = std::min<int>(config.knn_k, static_cast<int>(p.train.rows()));
      knn_cm[r] = confusion(KnnModel::fit(p.train, p.train_labels, k).predict(p.test), p.test_labels, K, base.class_names);
    });
    return 0;
  });
  if (config.knn_k > static_cast<int>(splits.front().train.size()))
    report.warnings.push_back("knn k clamped to the training-set size");

  const FeatureMatrix shape = build_hybrid(bank, report.selected, report.chosen_pc_count,
                                           config.pca_fit_scope == PcaFitScope::Train ? splits.front().train : IndexList{});
  report.hybrid_dims = {shape.values.rows(), shape.values.cols()};
  report.hybrid_provenance = shape.provenance;

  report.pnn = summarize(pnn_cm, base.negative_class);
  report.knn = summarize(knn_cm, base.negative_class);

  std::size_t rep = 0;
  for (std::size_t r = 1; r < R; ++r)
    if (std::abs(report.pnn.accuracies[r] - report.pnn.accuracy.mean) <
        std::abs(report.pnn.accuracies[rep] - report.pnn.accuracy.mean))
      rep = r;
  report.representative_repetition = static_cast<int>(rep);
  report.final_confusion = pnn_cm[rep];
  if (base.negative_class) report.final_collapse = binary_collapse(report.final_confusion, *base.negative_class);
  return report;
}

void write_ranking_csv(const FeatureRanking& ranking, int top_n, const fs::path& path) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < ranking.ranked.size(); ++i) {
    const auto& f = ranking.ranked[i];
    rows.push_back({std::to_string(i + 1), std::string(to_string(f.kind)), format_double(f.stats.min),
                    format_double(f.stats.max), format_double(f.stats.mean), std::to_string(f.stats.n_repetitions),
                    static_cast<int>(i) < top_n ? "1" : "0"});
  }
  write_table(path, {"rank", "feature", "min", "max", "mean", "repetitions", "selected"}, rows);
}

void write_pc_sweep_csv(const PcSweep& sweep, const fs::path& path) {
  std::vector<std::string> header{"pc"};
  for (auto f : sweep.features) header.emplace_back(to_string(f));
  header.emplace_back("mean");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t ki = 0; ki < sweep.pc_counts.size(); ++ki) {
    std::vector<std::string> row{std::to_string(sweep.pc_counts[ki])};
    for (const auto& f : sweep.mean_accuracy) row.push_back(format_double(f[ki]));
    row.push_back(format_double(sweep.cross_feature_mean[ki]));
    rows.push_back(std::move(row));
  }
  write_table(path, header, rows);
}

namespace {

void metric_rows(std::vector<std::vector<std::string>>& rows, const std::string& who, const ClassifierSummary& s,
                 const std::vector<std::string>& class_names) {
  auto add = [&](const std::string& metric, const std::optional<RepetitionStats>& st) {
    if (!st) {
      rows.push_back({who, metric, "undefined", "undefined", "undefined", "0"});
      return;
    }
    rows.push_back({who, metric, format_double(st->min), format_double(st->max), format_double(st->mean),
                    std::to_string(st->n_repetitions)});
  };
  add("accuracy", s.accuracy);
  add("sensitivity", s.sensitivity);
  add("specificity", s.specificity);
  add("binary_accuracy", s.binary_accuracy);
  for (std::size_t k = 0; k < s.class_recall.size(); ++k)
    add("recall_" + (k < class_names.size() ? class_names[k] : std::to_string(k)), s.class_recall[k]);
}

}  // namespace

void write_report(const PipelineReport& report, const PipelineConfig& config, const LabeledDataset& base,
                  const fs::path& dir, const std::string& extra_manifest_json) {
  fs::create_directories(dir);
  write_ranking_csv(report.ranking, static_cast<int>(report.selected.size()), dir / "ranking.csv");
  write_pc_sweep_csv(report.pc_sweep, dir / "pc_sweep.csv");
  write_confusion_csv(report.final_confusion, dir / "confusion.csv");

  std::vector<std::vector<std::string>> rows;
  metric_rows(rows, "pnn", report.pnn, base.class_names);
  metric_rows(rows, "knn", report.knn, base.class_names);
  write_table(dir / "metrics.csv", {"classifier", "metric", "min", "max", "mean", "repetitions"}, rows);

  nlohmann::ordered_json m;
  m["tool"] = "firenose";
  auto& c = m["config"];
  std::vector<std::string> kinds;
  for (auto k : config.feature_kinds) kinds.emplace_back(to_string(k));
  c["feature_kinds"] = kinds;
  c["n_repetitions"] = config.n_repetitions;
  c["fractions"] = {config.fractions.train, config.fractions.validation, config.fractions.test};
  c["spread"] = config.spread;
  c["spread_grid"] = config.spread_grid;
  c["tolerance"] = config.tolerance;
  c["pc_min"] = config.pc_min;
  c["pc_max"] = config.pc_max;
  c["top_n_features"] = config.top_n_features;
  c["pca_fit"] = std::string(to_string(config.pca_fit_scope));
  c["knn_k"] = config.knn_k;
  c["master_seed"] = config.master_seed;
  std::vector<Seed> seeds;
  for (int r = 0; r < config.n_repetitions; ++r) seeds.push_back(repetition_seed(config.master_seed, r));
  m["repetition_seeds"] = seeds;
  m["dataset"] = {{"samples", base.size()}, {"columns", base.dims()}, {"classes", base.class_names}};
  if (base.negative_class) m["dataset"]["negative_class"] = base.class_names[static_cast<std::size_t>(*base.negative_class)];
  std::vector<std::string> selected;
  for (auto k : report.selected) selected.emplace_back(to_string(k));
  m["selected_features"] = selected;
  m["chosen_pc_count"] = report.chosen_pc_count;
  m["hybrid_dims"] = {report.hybrid_dims.first, report.hybrid_dims.second};
  m["representative_repetition"] = report.representative_repetition;
  if (report.final_collapse) {
    const auto& b = *report.final_collapse;
    m["representative_collapse"] = {{"tp", b.tp}, {"fp", b.fp}, {"tn", b.tn}, {"fn", b.fn}};
  }
  m["spreads"] = report.spreads;
  m["warnings"] = report.warnings;
  if (!extra_manifest_json.empty()) m["invocation"] = nlohmann::ordered_json::parse(extra_manifest_json);

  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
  out << m.dump(2) << '\n';
}

}  // namespace firenose
