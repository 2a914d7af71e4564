#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "firenose/firenose.hpp"

namespace py = pybind11;
using namespace firenose;

namespace {

// numpy hands over column-major or row-major arrays; copy into the library's
// row-major layout.
Matrix as_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m) { return Matrix(m); }

FeatureBank bank_from(const SynthOutput& data, double window) {
  return FeatureBank::from_recordings(data.recordings, data.dataset.class_names, data.dataset.negative_class, window);
}

}  // namespace

PYBIND11_MODULE(_firenose, m) {
  m.doc() = "Gas-sensor feature extraction, PNN feature selection, PCA fusion and fire-detection metrics";

  py::register_exception<Error>(m, "FirenoseError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UndefinedMetric>(m, "UndefinedMetric", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::enum_<FeatureKind>(m, "FeatureKind")
      .value("RLSSV", FeatureKind::RLSSV)
      .value("RLV", FeatureKind::RLV)
      .value("RSSV", FeatureKind::RSSV)
      .value("RV", FeatureKind::RV)
      .value("FVC", FeatureKind::FVC);

  // featex
  m.def("rlssv", &rlssv, py::arg("v"));
  m.def("rlv", &rlv, py::arg("v"));
  m.def("rssv", &rssv, py::arg("v"));
  m.def("rv", &rv, py::arg("v"), py::arg("baseline"));
  m.def("fvc", &fvc, py::arg("v"), py::arg("averaged_baseline"));
  m.def(
      "extract_recording",
      [](const Eigen::Ref<const Eigen::MatrixXd>& values, const Vector& baseline, FeatureKind kind) {
        OdourRecording rec;
        rec.values = as_matrix(values);
        rec.baseline = baseline;
        return extract_recording(rec, kind);
      },
      py::arg("values"), py::arg("baseline"), py::arg("kind"));
  m.def(
      "response_point",
      [](const Eigen::Ref<const Eigen::MatrixXd>& series, double window) { return response_point(as_matrix(series), window); },
      py::arg("series"), py::arg("window_fraction") = 0.1);

  // core data
  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("n_classes", &SynthConfig::n_classes)
      .def_readwrite("n_sensors", &SynthConfig::n_sensors)
      .def_readwrite("samples_per_material_class", &SynthConfig::samples_per_material_class)
      .def_readwrite("ambient_samples", &SynthConfig::ambient_samples)
      .def_readwrite("signature_separation", &SynthConfig::signature_separation)
      .def_readwrite("noise_sigma", &SynthConfig::noise_sigma)
      .def_readwrite("drift_rate", &SynthConfig::drift_rate)
      .def_readwrite("timesteps", &SynthConfig::timesteps)
      .def_readwrite("seed", &SynthConfig::seed);

  py::class_<SynthOutput>(m, "SynthOutput")
      .def_property_readonly("rows", [](const SynthOutput& s) { return s.dataset.rows; })
      .def_property_readonly("labels", [](const SynthOutput& s) { return s.dataset.labels; })
      .def_property_readonly("class_names", [](const SynthOutput& s) { return s.dataset.class_names; })
      .def_property_readonly("negative_class", [](const SynthOutput& s) { return s.dataset.negative_class; })
      .def_property_readonly("n_recordings", [](const SynthOutput& s) { return s.recordings.size(); })
      .def("recording_values", [](const SynthOutput& s, std::size_t i) { return s.recordings.at(i).values; })
      .def("recording_baseline", [](const SynthOutput& s, std::size_t i) { return s.recordings.at(i).baseline; })
      .def(
          "feature_matrix",
          [](const SynthOutput& s, FeatureKind kind, double window) { return bank_from(s, window).at(kind).values; },
          py::arg("kind"), py::arg("window_fraction") = 0.1);

  m.def("generate_synthetic", &generate_synthetic, py::arg("config") = SynthConfig{});

  m.def(
      "split",
      [](const Labels& labels, std::size_t num_classes, std::tuple<double, double, double> fr, Seed seed) {
        auto s = split(labels, num_classes, {std::get<0>(fr), std::get<1>(fr), std::get<2>(fr)}, seed);
        return py::make_tuple(s.train, s.validation, s.test);
      },
      py::arg("labels"), py::arg("num_classes"), py::arg("fractions") = std::make_tuple(0.6, 0.1, 0.3),
      py::arg("seed") = 0);

  // pca
  py::class_<PcaModel>(m, "PcaModel")
      .def_readonly("mean", &PcaModel::mean)
      .def_readonly("loadings", &PcaModel::loadings)
      .def_readonly("latent", &PcaModel::latent)
      .def_readonly("proportion", &PcaModel::proportion)
      .def_readonly("cumulative", &PcaModel::cumulative)
      .def(
          "transform",
          [](const PcaModel& p, const Eigen::Ref<const Eigen::MatrixXd>& x, Eigen::Index k) {
            return transform(p, as_matrix(x), k);
          },
          py::arg("data"), py::arg("pc_count"))
      .def("variance_table", [](const PcaModel& p) {
        py::list rows;
        for (const auto& r : variance_table(p)) rows.append(py::make_tuple(r.component, r.latent, r.proportion, r.cumulative));
        return rows;
      });
  m.def(
      "fit_pca", [](const Eigen::Ref<const Eigen::MatrixXd>& x) { return fit_pca(as_matrix(x)); }, py::arg("data"));

  // pnn
  py::class_<PnnDecision>(m, "PnnDecision")
      .def_readonly("predicted_class", &PnnDecision::predicted_class)
      .def_readonly("scores", &PnnDecision::scores)
      .def_readonly("margin", &PnnDecision::margin)
      .def_readonly("ambiguous", &PnnDecision::ambiguous);

  py::class_<PnnModel>(m, "PnnModel")
      .def_static(
          "fit",
          [](const Eigen::Ref<const Eigen::MatrixXd>& x, const Labels& y, std::size_t k, double spread,
             std::vector<double> priors, std::vector<double> costs, double tolerance) {
            return PnnModel::fit(as_matrix(x), y, k, {spread, std::move(priors), std::move(costs), tolerance});
          },
          py::arg("train"), py::arg("labels"), py::arg("num_classes"), py::arg("spread") = 0.08,
          py::arg("priors") = std::vector<double>{}, py::arg("costs") = std::vector<double>{},
          py::arg("tolerance") = 0.001)
      .def_property_readonly("spread", &PnnModel::spread)
      .def_property_readonly("num_classes", &PnnModel::num_classes)
      .def_property_readonly("total_patterns", &PnnModel::total_patterns)
      .def("density", &PnnModel::density, py::arg("class_id"), py::arg("x"))
      .def("classify", &PnnModel::classify, py::arg("x"))
      .def(
          "predict", [](const PnnModel& p, const Eigen::Ref<const Eigen::MatrixXd>& q) { return p.predict(as_matrix(q)); },
          py::arg("queries"))
      .def("pattern_unit_form", &PnnModel::pattern_unit_form, py::arg("x_unit"));

  // knn
  py::class_<KnnModel>(m, "KnnModel")
      .def_static(
          "fit",
          [](const Eigen::Ref<const Eigen::MatrixXd>& x, const Labels& y, int k) { return KnnModel::fit(as_matrix(x), y, k); },
          py::arg("train"), py::arg("labels"), py::arg("k"))
      .def("classify", &KnnModel::classify, py::arg("x"))
      .def(
          "predict", [](const KnnModel& p, const Eigen::Ref<const Eigen::MatrixXd>& q) { return p.predict(as_matrix(q)); },
          py::arg("queries"));

  // metrics
  py::class_<ConfusionMatrix>(m, "ConfusionMatrix")
      .def(py::init([](std::vector<std::vector<long>> counts) {
             ConfusionMatrix cm;
             cm.counts = std::move(counts);
             return cm;
           }),
           py::arg("counts"))
      .def_readonly("counts", &ConfusionMatrix::counts)
      .def_property_readonly("total", &ConfusionMatrix::total);
  py::class_<BinaryCollapse>(m, "BinaryCollapse")
      .def(py::init<long, long, long, long>(), py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"))
      .def_readonly("tp", &BinaryCollapse::tp)
      .def_readonly("fp", &BinaryCollapse::fp)
      .def_readonly("tn", &BinaryCollapse::tn)
      .def_readonly("fn", &BinaryCollapse::fn);
  m.def(
      "confusion",
      [](const std::vector<ClassId>& p, const Labels& a, std::size_t k) { return confusion(p, a, k); },
      py::arg("predicted"), py::arg("actual"), py::arg("num_classes"));
  m.def("binary_collapse", &binary_collapse, py::arg("cm"), py::arg("negative_class"));
  m.def("sensitivity", &sensitivity, py::arg("bc"));
  m.def("specificity", &specificity, py::arg("bc"));
  m.def("accuracy", py::overload_cast<const BinaryCollapse&>(&accuracy), py::arg("bc"));
  m.def("per_class_accuracy", &per_class_accuracy, py::arg("cm"));

  // pipeline
  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("n_repetitions", &PipelineConfig::n_repetitions)
      .def_readwrite("spread", &PipelineConfig::spread)
      .def_readwrite("top_n_features", &PipelineConfig::top_n_features)
      .def_readwrite("knn_k", &PipelineConfig::knn_k)
      .def_readwrite("master_seed", &PipelineConfig::master_seed)
      .def_readwrite("threads", &PipelineConfig::threads);

  m.def(
      "run_pipeline",
      [](const SynthOutput& data, const PipelineConfig& config, double window) {
        auto report = run_pipeline(bank_from(data, window), config);
        py::dict out;
        py::list ranking;
        for (const auto& f : report.ranking.ranked)
          ranking.append(py::make_tuple(std::string(to_string(f.kind)), f.stats.min, f.stats.max, f.stats.mean));
        out["ranking"] = ranking;
        std::vector<std::string> selected;
        for (auto k : report.selected) selected.emplace_back(to_string(k));
        out["selected"] = selected;
        out["chosen_pc_count"] = report.chosen_pc_count;
        out["hybrid_dims"] = py::make_tuple(report.hybrid_dims.first, report.hybrid_dims.second);
        out["pnn_accuracy"] = report.pnn.accuracy.mean;
        out["knn_accuracy"] = report.knn.accuracy.mean;
        out["confusion"] = report.final_confusion.counts;
        return out;
      },
      py::arg("data"), py::arg("config") = PipelineConfig{}, py::arg("window_fraction") = 0.1);
}
