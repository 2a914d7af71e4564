// firenose: command-line front end for the odour feature-selection pipeline.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "firenose/firenose.hpp"

namespace fs = std::filesystem;
using namespace firenose;

namespace {

struct InputOptions {
  std::string input;
  std::string baseline;        // "v1;v2;..." for dataset CSV input
  std::string negative_class;  // defaults to "NA" when present
  double window = 0.1;
};

struct PipelineOptions {
  Seed seed = 1;
  double spread = 0.08;
  std::vector<double> spread_grid;
  int reps = 50;
  std::string pca_fit = "train";
  int top_n = 3;
  int knn_k = 3;
  int pc_min = 1;
  int pc_max = 0;
  int threads = 0;
  double tolerance = 0.001;
  std::vector<std::string> features;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("-i,--input", in.input, "Generated data directory, recordings directory, or dataset CSV")
      ->required()
      ->check(CLI::ExistingPath);
  cmd->add_option("--baseline", in.baseline, "Per-sensor baseline 'v1;...;vS' for dataset CSV input");
  cmd->add_option("--negative-class", in.negative_class, "Name of the ambient (non-fire) class");
  cmd->add_option("--window", in.window, "Trailing fraction of each recording averaged into its response point")
      ->check(CLI::Range(1e-9, 1.0));
}

void add_pipeline_options(CLI::App* cmd, PipelineOptions& p) {
  cmd->add_option("--seed", p.seed, "Master seed");
  cmd->add_option("--spread", p.spread, "PNN spread factor")->check(CLI::PositiveNumber);
  cmd->add_option("--spread-grid", p.spread_grid, "Candidate spreads chosen per repetition on the validation split")
      ->delimiter(',');
  cmd->add_option("--reps", p.reps, "Repetitions")->check(CLI::PositiveNumber);
  cmd->add_option("--pca-fit", p.pca_fit, "Fit PCA on the training split or on all rows")
      ->check(CLI::IsMember({"train", "all"}));
  cmd->add_option("--top-n", p.top_n, "Features kept for fusion")->check(CLI::PositiveNumber);
  cmd->add_option("--knn-k", p.knn_k, "k of the kNN baseline")->check(CLI::PositiveNumber);
  cmd->add_option("--pc-min", p.pc_min, "Smallest component count in the sweep")->check(CLI::PositiveNumber);
  cmd->add_option("--pc-max", p.pc_max, "Largest component count in the sweep (0: all)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--threads", p.threads, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tolerance", p.tolerance, "PNN decision margin tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--features", p.features, "Feature kinds (rlssv,rlv,rssv,rv,fvc)")->delimiter(',');
}

std::vector<FeatureKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<FeatureKind> out;
  for (const auto& n : names) out.push_back(parse_feature_kind(n));
  return out;
}

PipelineConfig make_config(const PipelineOptions& p) {
  PipelineConfig c;
  if (!p.features.empty()) c.feature_kinds = parse_kinds(p.features);
  c.n_repetitions = p.reps;
  c.spread = p.spread;
  c.spread_grid = p.spread_grid;
  c.tolerance = p.tolerance;
  c.pc_min = p.pc_min;
  c.pc_max = p.pc_max;
  c.top_n_features = std::min<int>(p.top_n, static_cast<int>(c.feature_kinds.size()));
  c.pca_fit_scope = parse_pca_fit_scope(p.pca_fit);
  c.knn_k = p.knn_k;
  c.master_seed = p.seed;
  c.threads = p.threads;
  c.validate();
  return c;
}

Vector parse_baseline(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ';')) {
    auto v = parse_double(cell);
    if (!v) throw ConfigError("baseline entry '" + cell + "' is not a number");
    vals.push_back(*v);
  }
  if (vals.empty()) throw ConfigError("empty baseline");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void apply_negative(LabeledDataset& ds, const std::string& name) {
  if (name.empty()) return;
  auto id = find_class(ds.class_names, name);
  if (!id) throw ConfigError("negative class '" + name + "' does not name a class");
  ds.negative_class = id;
}

fs::path recordings_dir(const fs::path& input) {
  return fs::is_directory(input / "recordings") ? input / "recordings" : input;
}

FeatureBank load_bank(const InputOptions& in, const std::vector<FeatureKind>& kinds) {
  const fs::path path(in.input);
  FeatureBank bank;
  if (fs::is_directory(path)) {
    std::vector<std::string> names;
    auto recs = read_recording_dir(recordings_dir(path), names);
    if (recs.empty()) throw Error("no recordings found under " + path.string());
    bank = FeatureBank::from_recordings(recs, names, std::nullopt, in.window, kinds);
  } else {
    auto ds = read_dataset_csv(path);
    if (ds.size() == 0) throw Error(path.string() + " contains no samples");
    std::optional<Vector> baseline;
    if (!in.baseline.empty()) baseline = parse_baseline(in.baseline);
    bank = FeatureBank::from_rows(ds, baseline, kinds);
  }
  apply_negative(bank.base, in.negative_class);
  for (const auto& [kind, why] : bank.excluded)
    std::cerr << "firenose: warning: " << to_string(kind) << " excluded: " << why << '\n';
  return bank;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory " + dir.string());
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) ensure_dir(file.parent_path());
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string metric_cell(double (*fn)(const BinaryCollapse&), const BinaryCollapse& bc) {
  try {
    return format_double(fn(bc));
  } catch (const UndefinedMetric&) {
    return "undefined";
  }
}

// metric,value table for a confusion matrix.
void write_eval(const ConfusionMatrix& cm, std::optional<ClassId> negative, const fs::path& dir) {
  ensure_dir(dir);
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"samples", std::to_string(cm.total())});
  rows.push_back({"accuracy", cm.total() > 0 ? format_double(accuracy(cm)) : "undefined"});
  if (negative) {
    const auto bc = binary_collapse(cm, *negative);
    rows.push_back({"tp", std::to_string(bc.tp)});
    rows.push_back({"fp", std::to_string(bc.fp)});
    rows.push_back({"tn", std::to_string(bc.tn)});
    rows.push_back({"fn", std::to_string(bc.fn)});
    rows.push_back({"sensitivity", metric_cell(&sensitivity, bc)});
    rows.push_back({"specificity", metric_cell(&specificity, bc)});
    rows.push_back({"binary_accuracy", metric_cell(static_cast<double (*)(const BinaryCollapse&)>(&accuracy), bc)});
    std::cout << "TP=" << bc.tp << " FP=" << bc.fp << " TN=" << bc.tn << " FN=" << bc.fn << '\n';
    for (const auto& r : rows)
      if (r[0] == "sensitivity" || r[0] == "specificity" || r[0] == "binary_accuracy")
        std::cout << r[0] << '=' << (r[1] == "undefined" ? r[1] : fmt2(std::stod(r[1]))) << '\n';
  }
  write_table(dir / "metrics.csv", {"metric", "value"}, rows);
  write_confusion_csv(cm, dir / "confusion.csv");
}

std::optional<ClassId> resolve_negative(const std::vector<std::string>& names, const std::string& requested) {
  const std::string want = requested.empty() ? "NA" : requested;
  auto id = find_class(names, want);
  if (!id) {
    if (requested.empty()) throw ConfigError("no --negative-class given and no class named 'NA'");
    throw ConfigError("negative class '" + requested + "' does not name a class");
  }
  return id;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"firenose: gas-sensor feature extraction, PNN-based feature selection, PCA fusion and evaluation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values (flags take precedence)");

  // generate
  SynthConfig synth;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a seeded synthetic odour dataset and its recordings");
  gen->add_option("--classes", synth.n_classes, "Classes including ambient air");
  gen->add_option("--sensors", synth.n_sensors, "Sensors in the array");
  gen->add_option("--samples-per-class", synth.samples_per_material_class, "Recordings per material class");
  gen->add_option("--ambient", synth.ambient_samples, "Ambient-air recordings");
  gen->add_option("--separation", synth.signature_separation, "Class signature scale (volts)");
  gen->add_option("--noise", synth.noise_sigma, "Noise standard deviation (volts)");
  gen->add_option("--drift", synth.drift_rate, "Bound on per-run drift slope (volts per timestep)");
  gen->add_option("--timesteps", synth.timesteps, "Timesteps per recording");
  gen->add_option("--seed", synth.seed, "Generator seed");
  gen->add_option("-o,--output", gen_out, "Output directory")->required();

  // extract
  InputOptions ext_in;
  std::string ext_feature, ext_out;
  bool ext_series = false;
  auto* ext = app.add_subcommand("extract", "Apply one baseline-correction feature");
  add_input_options(ext, ext_in);
  ext->add_option("--feature", ext_feature, "rlssv, rlv, rssv, rv or fvc")->required();
  ext->add_flag("--series", ext_series, "Input is one recording; write its per-timestep feature waveform");
  ext->add_option("-o,--output", ext_out, "Output CSV")->required();

  // rank-features
  InputOptions rank_in;
  PipelineOptions rank_opt;
  std::string rank_out;
  auto* rank = app.add_subcommand("rank-features", "Rank features by repeated PNN test accuracy");
  add_input_options(rank, rank_in);
  add_pipeline_options(rank, rank_opt);
  rank->add_option("-o,--output", rank_out, "Output directory")->required();

  // pca-sweep
  InputOptions sweep_in;
  PipelineOptions sweep_opt;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("pca-sweep", "Score PCA-reduced features over a range of component counts");
  add_input_options(sweep, sweep_in);
  add_pipeline_options(sweep, sweep_opt);
  sweep->add_option("-o,--output", sweep_out, "Output directory")->required();

  // fuse
  InputOptions fuse_in;
  PipelineOptions fuse_opt;
  int fuse_pcs = 0;
  std::string fuse_out;
  auto* fuse_cmd = app.add_subcommand("fuse", "Concatenate PCA scores of several features into a hybrid feature");
  add_input_options(fuse_cmd, fuse_in);
  add_pipeline_options(fuse_cmd, fuse_opt);
  fuse_cmd->add_option("--pcs", fuse_pcs, "Components kept per feature")->required()->check(CLI::PositiveNumber);
  fuse_cmd->add_option("-o,--output", fuse_out, "Output CSV")->required();

  // train
  std::string train_in, train_out;
  PnnOptions train_opt;
  auto* train = app.add_subcommand("train", "Fit a PNN on a feature CSV");
  train->add_option("-i,--input", train_in, "Training feature CSV")->required()->check(CLI::ExistingFile);
  train->add_option("--spread", train_opt.spread, "PNN spread factor")->check(CLI::PositiveNumber);
  train->add_option("--tolerance", train_opt.tolerance, "Decision margin tolerance")->check(CLI::NonNegativeNumber);
  train->add_option("-o,--output", train_out, "Model file (JSON)")->required();

  // eval
  std::string eval_model, eval_in, eval_confusion, eval_out, eval_negative;
  auto* eval = app.add_subcommand("eval", "Evaluate a model on a test CSV, or score a confusion matrix");
  auto* eval_model_opt = eval->add_option("--model", eval_model, "Model file from 'train'")->check(CLI::ExistingFile);
  eval->add_option("-i,--input", eval_in, "Test feature CSV")->check(CLI::ExistingFile)->needs(eval_model_opt);
  auto* eval_cm_opt = eval->add_option("--confusion", eval_confusion, "Confusion matrix CSV (rows predicted)")
                          ->check(CLI::ExistingFile)
                          ->excludes(eval_model_opt);
  eval->add_option("--negative-class", eval_negative, "Name of the ambient (non-fire) class");
  eval->add_option("-o,--output", eval_out, "Output directory")->required();
  (void)eval_cm_opt;

  // pipeline
  InputOptions pipe_in;
  PipelineOptions pipe_opt;
  std::string pipe_out;
  auto* pipe = app.add_subcommand("pipeline", "Rank, reduce, fuse and evaluate end to end");
  add_input_options(pipe, pipe_in);
  add_pipeline_options(pipe, pipe_opt);
  pipe->add_option("-o,--output", pipe_out, "Report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "firenose: error: " << msg << '\n';
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    if (*gen) {
      synth.validate();
      const fs::path dir(gen_out);
      ensure_dir(dir / "recordings");
      auto data = generate_synthetic(synth);
      write_dataset_csv(data.dataset, dir / "dataset.csv");
      for (std::size_t r = 0; r < data.recordings.size(); ++r) {
        char name[32];
        std::snprintf(name, sizeof name, "rec_%05zu.csv", r);
        write_recording_csv(data.recordings[r], data.dataset.class_names, dir / "recordings" / name);
      }
      std::cout << "N=" << data.dataset.size() << " D=" << data.dataset.dims() << " K=" << data.dataset.num_classes()
                << '\n';
    } else if (*ext) {
      const auto kind = parse_feature_kind(ext_feature);
      const fs::path in(ext_in.input);
      ensure_parent(ext_out);
      if (ext_series) {
        std::vector<std::string> names;
        auto rec = read_recording_csv(in, names);
        Matrix series = extract_recording(rec, kind);
        FeatureMatrix fm;
        fm.kind = kind;
        fm.values = series;
        std::vector<std::string> header{"t"};
        for (auto& n : fm.column_names()) header.push_back(n);
        std::vector<std::vector<std::string>> rows;
        for (Eigen::Index t = 0; t < series.rows(); ++t) {
          std::vector<std::string> row{format_double(static_cast<double>(t) / rec.sample_rate)};
          for (Eigen::Index j = 0; j < series.cols(); ++j) row.push_back(format_double(series(t, j)));
          rows.push_back(std::move(row));
        }
        write_table(ext_out, header, rows);
      } else if (fs::is_directory(in)) {
        std::vector<std::string> names;
        auto recs = read_recording_dir(recordings_dir(in), names);
        if (recs.empty()) throw Error("no recordings found under " + in.string());
        LabeledDataset ds;
        ds.class_names = names;
        ds.rows.resize(static_cast<Eigen::Index>(recs.size()), recs.front().sensors());
        for (std::size_t r = 0; r < recs.size(); ++r) {
          try {
            ds.rows.row(static_cast<Eigen::Index>(r)) =
                response_point(extract_recording(recs[r], kind), ext_in.window).transpose();
          } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " of recording " + std::to_string(r));
          }
          ds.labels.push_back(recs[r].class_id);
        }
        FeatureMatrix fm;
        fm.kind = kind;
        fm.values = ds.rows;
        ds.column_names = fm.column_names();
        write_dataset_csv(ds, fs::path(ext_out));
      } else {
        auto ds = read_dataset_csv(in);
        if (ds.size() == 0) throw Error(in.string() + " contains no samples");
        std::optional<Vector> baseline;
        if (!ext_in.baseline.empty()) baseline = parse_baseline(ext_in.baseline);
        auto fm = extract_rows(ds.rows, kind, baseline ? &*baseline : nullptr);
        write_dataset_csv(ds.with_rows(fm.values, fm.column_names()), fs::path(ext_out));
      }
    } else if (*rank) {
      const auto config = make_config(rank_opt);
      ensure_dir(rank_out);
      const auto bank = load_bank(rank_in, config.feature_kinds);
      const auto ranking = rank_features(bank, config);
      write_ranking_csv(ranking, config.top_n_features, fs::path(rank_out) / "ranking.csv");
      for (std::size_t i = 0; i < ranking.ranked.size(); ++i) {
        const auto& f = ranking.ranked[i];
        std::cout << (i + 1) << ' ' << to_string(f.kind) << " min=" << fmt2(f.stats.min) << " max=" << fmt2(f.stats.max)
                  << " mean=" << fmt2(f.stats.mean) << '\n';
      }
    } else if (*sweep) {
      auto config = make_config(sweep_opt);
      ensure_dir(sweep_out);
      std::vector<FeatureKind> selected;
      FeatureBank bank;
      if (!sweep_opt.features.empty()) {
        selected = config.feature_kinds;
        bank = load_bank(sweep_in, selected);
      } else {
        bank = load_bank(sweep_in, config.feature_kinds);
        selected = rank_features(bank, config).top(config.top_n_features);
      }
      const auto result = pc_sweep(bank, selected, config);
      write_pc_sweep_csv(result, fs::path(sweep_out) / "pc_sweep.csv");
      for (auto kind : selected) {
        std::string name(to_string(kind));
        for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        write_variance_table(fit_pca(bank.at(kind).values), fs::path(sweep_out) / ("variance_" + name + ".csv"));
      }
      std::cout << "best_pc_count=" << result.best_pc_count << '\n';
    } else if (*fuse_cmd) {
      auto config = make_config(fuse_opt);
      ensure_parent(fuse_out);
      const auto bank = load_bank(fuse_in, config.feature_kinds);
      std::vector<FeatureKind> selected =
          fuse_opt.features.empty() ? rank_features(bank, config).top(config.top_n_features) : config.feature_kinds;
      IndexList fit_rows;
      if (config.pca_fit_scope == PcaFitScope::Train)
        fit_rows = split(bank.base, config.fractions, repetition_seed(config.master_seed, 0)).train;
      auto hybrid = build_hybrid(bank, selected, fuse_pcs, fit_rows);
      write_dataset_csv(bank.base.with_rows(hybrid.values, hybrid.column_names()), fs::path(fuse_out));
      std::cout << "hybrid " << hybrid.values.rows() << 'x' << hybrid.values.cols() << '\n';
    } else if (*train) {
      auto ds = read_dataset_csv(train_in);
      if (ds.size() == 0) throw Error(train_in + " contains no samples");
      ensure_parent(train_out);
      auto model = PnnModel::fit(ds.rows, ds.labels, ds.num_classes(), train_opt);
      model.save(train_out, ds.class_names);
      std::cout << "patterns=" << model.total_patterns() << " classes=" << model.num_classes()
                << " spread=" << model.spread() << '\n';
    } else if (*eval) {
      if (!eval_confusion.empty()) {
        auto cm = read_confusion_csv(eval_confusion);
        write_eval(cm, resolve_negative(cm.class_names, eval_negative), eval_out);
      } else {
        if (eval_model.empty() || eval_in.empty()) throw ConfigError("eval needs --model and --input, or --confusion");
        std::vector<std::string> names;
        auto model = PnnModel::load(eval_model, &names);
        if (names.empty())
          for (std::size_t k = 0; k < model.num_classes(); ++k) names.push_back(std::to_string(k));
        auto ds = read_dataset_csv(eval_in, &names);
        if (ds.size() == 0) throw Error(eval_in + " contains no samples");
        auto cm = confusion(model.predict(ds.rows), ds.labels, model.num_classes(), names);
        write_eval(cm, resolve_negative(names, eval_negative), eval_out);
        std::cout << "accuracy=" << fmt2(accuracy(cm)) << '\n';
      }
    } else if (*pipe) {
      const auto config = make_config(pipe_opt);
      ensure_dir(pipe_out);
      const auto bank = load_bank(pipe_in, config.feature_kinds);
      const auto report = run_pipeline(bank, config);
      nlohmann::ordered_json inv;
      inv["subcommand"] = "pipeline";
      inv["input"] = pipe_in.input;
      inv["window"] = pipe_in.window;
      if (!pipe_in.baseline.empty()) inv["baseline"] = pipe_in.baseline;
      write_report(report, config, bank.base, pipe_out, inv.dump());
      std::cout << "selected=";
      for (std::size_t i = 0; i < report.selected.size(); ++i) std::cout << (i ? "," : "") << to_string(report.selected[i]);
      std::cout << " pcs=" << report.chosen_pc_count << " hybrid=" << report.hybrid_dims.first << 'x'
                << report.hybrid_dims.second << " pnn_accuracy=" << fmt2(report.pnn.accuracy.mean)
                << " knn_accuracy=" << fmt2(report.knn.accuracy.mean) << '\n';
    }
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (auto& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "firenose: error: " << msg << '\n';
    return 1;
  }
  return 0;
}
