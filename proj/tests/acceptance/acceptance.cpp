// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"

using namespace firenose;
using testing_support::data_with_covariance;
using testing_support::gaussian_matrix;
using testing_support::random_unit;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

ConfusionMatrix reference_matrix(bool perfect) {
  ConfusionMatrix cm;
  cm.class_names = {"M1", "M2", "M3", "M4", "M5", "M6", "M7", "M8", "NA"};
  if (perfect) {
    cm.counts.assign(9, std::vector<long>(9, 0));
    for (std::size_t i = 0; i < 8; ++i) cm.counts[i][i] = 40;
    cm.counts[8][8] = 80;
    return cm;
  }
  cm.counts = {
      {40, 0, 0, 0, 0, 0, 0, 0, 0},  {0, 39, 0, 0, 0, 1, 0, 0, 0}, {0, 0, 40, 0, 0, 0, 0, 0, 0},
      {0, 0, 1, 39, 0, 0, 0, 0, 0},  {0, 0, 0, 0, 39, 0, 1, 0, 0}, {1, 0, 0, 0, 0, 39, 0, 0, 0},
      {0, 0, 0, 0, 0, 0, 40, 0, 0},  {0, 0, 0, 0, 0, 0, 1, 39, 0}, {0, 0, 0, 2, 0, 0, 0, 0, 78},
  };
  return cm;
}

void metric_arithmetic(Outcome& o) {
  auto bc = binary_collapse(reference_matrix(false), 8);
  o.require(bc.tp == 315 && bc.fp == 5 && bc.tn == 78 && bc.fn == 2, "collapse is not (315, 5, 78, 2)");
  o.require(std::abs(sensitivity(bc) - 99.37) <= 0.005, "sensitivity " + format_double(sensitivity(bc)));
  o.require(std::abs(specificity(bc) - 93.98) <= 0.005, "specificity " + format_double(specificity(bc)));
  o.require(std::abs(accuracy(bc) - 98.25) <= 0.005, "accuracy " + format_double(accuracy(bc)));
  auto perfect = binary_collapse(reference_matrix(true), 8);
  o.require(perfect.tp == 320 && perfect.fp == 0 && perfect.tn == 80 && perfect.fn == 0, "perfect collapse");
  o.require(sensitivity(perfect) == 100.0 && specificity(perfect) == 100.0 && accuracy(perfect) == 100.0,
            "perfect metrics are not 100/100/100");
  o.detail << "TP=" << bc.tp << " FP=" << bc.fp << " TN=" << bc.tn << " FN=" << bc.fn << ", "
           << format_double(std::round(sensitivity(bc) * 100) / 100) << "/"
           << format_double(std::round(specificity(bc) * 100) / 100) << "/"
           << format_double(std::round(accuracy(bc) * 100) / 100);
}

void variance_tables(Outcome& o) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Eigen::Index d = 2 + seed % 9;
    auto model = fit_pca(gaussian_matrix(50 + seed, d, seed) * gaussian_matrix(d, d, 100 + seed));
    double run = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      run += model.proportion(j);
      o.require(std::abs(model.cumulative(j) - run) <= 1e-9, "cumulative is not the running sum");
    }
    o.require(std::abs(model.cumulative(d - 1) - 1.0) <= 5e-5, "final cumulative is not 1.0000");
  }
  Eigen::VectorXd latent(8), reference(8);
  latent << 0.1064, 0.0474, 0.0335, 0.0144, 0.0096, 0.0073, 0.0019, 0.0007;
  reference << 0.4813, 0.2141, 0.1517, 0.0650, 0.0435, 0.0329, 0.0085, 0.0030;
  auto model = fit_pca(data_with_covariance(latent, 1000, 77));
  const double worst = (model.proportion - reference).cwiseAbs().maxCoeff();
  o.require(worst <= 0.0005, "injected proportions off by " + format_double(worst));
  o.detail << "20 random fits consistent; injected-eigenvalue proportions max |diff| " << format_double(worst);
}

void pnn_bayes_oracle(Outcome& o) {
  std::mt19937_64 rng(1001);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> a, b;
  for (int i = 0; i < 10; ++i) a.push_back(n(rng));
  for (int i = 0; i < 10; ++i) b.push_back(5.0 + n(rng));
  Matrix x(20, 1);
  Labels y;
  for (int i = 0; i < 10; ++i) x(i, 0) = a[static_cast<std::size_t>(i)], y.push_back(0);
  for (int i = 0; i < 10; ++i) x(10 + i, 0) = b[static_cast<std::size_t>(i)], y.push_back(1);
  PnnOptions opt;
  opt.spread = 1.0;
  auto model = PnnModel::fit(x, y, 2, opt);
  int disagreements = 0;
  for (int i = 0; i <= 100; ++i) {
    const double q = -3.0 + 11.0 * i / 100.0;
    if (model.classify(Vector::Constant(1, q)).predicted_class != oracles::bayes_two_class_1d(a, b, 1.0, q))
      ++disagreements;
  }
  o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
  o.detail << "101 grid queries, " << disagreements << " disagreements";
}

void dot_product_identity(Outcome& o) {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  std::uniform_int_distribution<int> dim(1, 12);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dim(rng);
    Vector x = random_unit(d, rng), w = random_unit(d, rng);
    const double sigma = u(rng);
    const double gauss = std::exp(-(x - w).squaredNorm() / (2.0 * sigma * sigma));
    worst = std::max(worst, std::abs(pattern_activation(x, w, sigma) - gauss));
  }
  o.require(worst <= 1e-12, "max |diff| " + format_double(worst));
  o.detail << "100 unit pairs, max |diff| " << format_double(worst);
}

void pca_numerics(Outcome& o) {
  const Eigen::Index d = 8;
  Matrix x = gaussian_matrix(300, d, 3003) * gaussian_matrix(d, d, 3004);
  auto model = fit_pca(x);
  const double ortho = (model.loadings.transpose() * model.loadings - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  o.require(ortho <= 1e-9, "orthonormality " + format_double(ortho));
  const double recon = (inverse_transform(model, transform(model, x, d)) - x).cwiseAbs().maxCoeff();
  o.require(recon <= 1e-9, "reconstruction " + format_double(recon));
  Matrix s = transform(model, x, d);
  Matrix cov = s.transpose() * s / static_cast<double>(x.rows() - 1);
  double off = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j) off = std::max(off, std::abs(cov(i, j)));
  o.require(off < 1e-6 * model.latent(0), "score covariance off-diagonal " + format_double(off));
  Eigen::RowVectorXd shift = Eigen::RowVectorXd::LinSpaced(d, -50.0, 75.0);
  Matrix moved = x.rowwise() + shift;
  const double trans = (transform(fit_pca(moved), moved, d) - s).cwiseAbs().maxCoeff();
  o.require(trans <= 1e-9, "translation " + format_double(trans));
  o.detail << "orthonormality " << format_double(ortho) << ", reconstruction " << format_double(recon)
           << ", off-diagonal/lambda1 " << format_double(off / model.latent(0)) << ", translation "
           << format_double(trans);
}

void knn_equivalence(Outcome& o) {
  Matrix train = gaussian_matrix(100, 5, 4004);
  Labels y;
  std::mt19937_64 rng(4005);
  for (int i = 0; i < 100; ++i) y.push_back(static_cast<int>(rng() % 4));
  Matrix q = gaussian_matrix(200, 5, 4006, 1.5);
  int mismatches = 0;
  for (int k : {1, 3, 5}) {
    auto model = KnnModel::fit(train, y, k);
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      Vector v = q.row(i).transpose();
      if (model.classify(v) != oracles::knn_brute_force(train, y, k, v)) ++mismatches;
    }
  }
  o.require(mismatches == 0, std::to_string(mismatches) + " mismatches");
  o.detail << "200 queries x k in {1,3,5}, " << mismatches << " mismatches";
}

bool same_files(const std::filesystem::path& a, const std::filesystem::path& b) {
  for (const char* f : {"ranking.csv", "pc_sweep.csv", "confusion.csv", "metrics.csv", "manifest.json"}) {
    if (!std::filesystem::exists(a / f)) return false;
    if (testing_support::slurp(a / f) != testing_support::slurp(b / f)) return false;
  }
  return true;
}

struct EndToEnd {
  FeatureBank bank;
  PipelineConfig config;
  PipelineReport first;
  PipelineReport serial;
  bool identical_reports = false;
};

EndToEnd& end_to_end() {
  static EndToEnd run = [] {
    EndToEnd e;
    auto data = generate_synthetic(SynthConfig{});
    e.bank = FeatureBank::from_recordings(data.recordings, data.dataset.class_names, data.dataset.negative_class);
    e.config.n_repetitions = 50;
    e.config.master_seed = 1;
    e.config.threads = 4;
    e.first = run_pipeline(e.bank, e.config);
    auto second = run_pipeline(e.bank, e.config);
    testing_support::TempDir a("accept_a"), b("accept_b");
    write_report(e.first, e.config, e.bank.base, a.path());
    write_report(second, e.config, e.bank.base, b.path());
    e.identical_reports = same_files(a.path(), b.path());
    auto serial = e.config;
    serial.threads = 1;
    e.serial = run_pipeline(e.bank, serial);
    return e;
  }();
  return run;
}

void pipeline_end_to_end(Outcome& o) {
  auto& e = end_to_end();
  const auto& r = e.first;
  o.require(e.bank.base.size() == 1000 && e.bank.base.dims() == 8 && e.bank.base.num_classes() == 9,
            "dataset is not 1000x8 with 9 classes");
  o.require(e.identical_reports, "reports differ across reruns");
  o.require(r.hybrid_dims.second == 3 * r.chosen_pc_count, "hybrid width is not 3 k*");
  const double hybrid = r.pnn.accuracy.mean;
  const double best_single = r.ranking.ranked.front().stats.mean;
  o.require(hybrid >= 95.0, "hybrid accuracy " + format_double(hybrid) + " below 95");
  o.require(hybrid >= best_single - 1.0, "hybrid below best single feature minus 1 pp");
  o.detail << "k*=" << r.chosen_pc_count << ", hybrid " << r.hybrid_dims.first << "x" << r.hybrid_dims.second
           << ", PNN mean " << format_double(std::round(hybrid * 100) / 100) << "% vs best single "
           << to_string(r.ranking.ranked.front().kind) << " " << format_double(std::round(best_single * 100) / 100)
           << "%, kNN " << format_double(std::round(r.knn.accuracy.mean * 100) / 100) << "%, reruns byte-identical";
}

void featex_suite(Outcome& o) {
  auto v = [](std::initializer_list<double> xs) {
    Vector out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) out(i++) = x;
    return out;
  };
  auto near = [&](const Vector& got, const Vector& want, double tol, const std::string& what) {
    o.require(got.size() == want.size() && (got - want).cwiseAbs().maxCoeff() <= tol, what);
  };
  auto throws = [&](const std::function<void()>& fn, const std::string& what) {
    try {
      fn();
      o.require(false, what + " did not throw");
    } catch (const DomainError&) {
    }
  };
  const double ln10_over_ln200 = std::log(10.0) / std::log(200.0);
  near(rlssv(v({10, 10})), v({ln10_over_ln200, ln10_over_ln200}), 1e-4, "rlssv [10,10]");
  near(rlssv(v({10})), v({0.5}), 1e-12, "rlssv [10]");
  throws([&] { rlssv(v({0.0, 1.0})); }, "rlssv [0,1]");
  near(rlv(v({10})), v({0.1}), 1e-12, "rlv [10]");
  near(rlv(v({1})), v({0.0}), 1e-12, "rlv [1]");
  near(rlv(v({100, 10})), v({0.02, 0.1}), 1e-12, "rlv [100,10]");
  near(rssv(v({3, 4})), v({0.6, 0.8}), 1e-12, "rssv [3,4]");
  near(rssv(v({5})), v({1.0}), 1e-12, "rssv [5]");
  near(rssv(v({1, 1, 1, 1})), v({0.5, 0.5, 0.5, 0.5}), 1e-12, "rssv [1,1,1,1]");
  near(rv(v({1.3, 0.4}), v({1.3, 0.4})), v({1.0, 1.0}), 0.0, "rv v=v0");
  near(rv(v({2.2}), v({1.1})), v({2.0}), 1e-12, "rv [2.2]/[1.1]");
  throws([&] { rv(v({1.0, 1.0}), v({1.0, 0.0})); }, "rv zero baseline");
  near(fvc(v({1.3, 0.4}), v({1.3, 0.4})), v({0.0, 0.0}), 0.0, "fvc v=v0");
  near(fvc(v({0.5}), v({1.0})), v({0.5}), 1e-12, "fvc [0.5]");
  near(fvc(v({2.0}), v({1.0})), v({-1.0}), 1e-12, "fvc [2.0]");

  OdourRecording flat;
  flat.baseline = v({1.1, 0.9, 1.4});
  flat.values = flat.baseline.transpose().replicate(30, 1);
  o.require(extract_recording(flat, FeatureKind::FVC).cwiseAbs().maxCoeff() == 0.0, "fvc of a flat recording");
  o.require((extract_recording(flat, FeatureKind::RV).array() == 1.0).all(), "rv of a flat recording");

  Matrix c = Matrix::Constant(20, 2, 3.5);
  near(response_point(c, 0.1), v({3.5, 3.5}), 0.0, "response point of a constant series");
  Matrix ten(10, 1);
  for (Eigen::Index t = 0; t < 10; ++t) ten(t, 0) = static_cast<double>(t);
  near(response_point(ten, 0.1), v({9.0}), 0.0, "response point T=10");
  Matrix rise(150, 1);
  for (Eigen::Index t = 0; t < 150; ++t) rise(t, 0) = 1.0 + 0.8 * (1.0 - std::exp(-static_cast<double>(t) / 25.0));
  o.require(std::abs(response_point(rise, 0.1)(0) - 1.8) <= 0.018, "response point of a first-order rise");

  SynthConfig quiet;
  quiet.noise_sigma = 0.0;
  quiet.drift_rate = 0.0;
  quiet.samples_per_material_class = 2;
  quiet.ambient_samples = 2;
  auto data = generate_synthetic(quiet);
  double norm_err = 0.0, identity_err = 0.0;
  for (const auto& rec : data.recordings) {
    auto s = extract_recording(rec, FeatureKind::RSSV);
    norm_err = std::max(norm_err, (s.rowwise().norm().array() - 1.0).abs().maxCoeff());
    Matrix sum = extract_recording(rec, FeatureKind::FVC) + extract_recording(rec, FeatureKind::RV);
    identity_err = std::max(identity_err, (sum.array() - 1.0).abs().maxCoeff());
  }
  o.require(norm_err <= 1e-12, "rssv row norms off by " + format_double(norm_err));
  o.require(identity_err <= 1e-12, "fvc + rv off by " + format_double(identity_err));
  o.detail << "examples pass; rssv |norm-1| " << format_double(norm_err) << ", |fvc-(1-rv)| "
           << format_double(identity_err);
}

void repetition_protocol(Outcome& o) {
  auto& e = end_to_end();
  auto ordered = [](const RepetitionStats& s) { return s.min <= s.mean && s.mean <= s.max; };
  const auto& r = e.first;
  o.require(r.pnn.accuracy.n_repetitions == 50, "not 50 repetitions");
  bool all_ordered = ordered(r.pnn.accuracy) && ordered(r.knn.accuracy);
  for (const auto& f : r.ranking.ranked) all_ordered = all_ordered && ordered(f.stats);
  for (const auto* s : {&r.pnn.sensitivity, &r.pnn.specificity, &r.pnn.binary_accuracy})
    if (*s) all_ordered = all_ordered && ordered(**s);
  o.require(all_ordered, "some statistic violates min <= mean <= max");

  const auto& s = e.serial;
  bool same = s.pnn.accuracies == r.pnn.accuracies && s.knn.accuracies == r.knn.accuracies &&
              s.final_confusion.counts == r.final_confusion.counts && s.chosen_pc_count == r.chosen_pc_count &&
              s.pc_sweep.cross_feature_mean == r.pc_sweep.cross_feature_mean &&
              s.ranking.ranked.size() == r.ranking.ranked.size();
  for (std::size_t i = 0; same && i < r.ranking.ranked.size(); ++i)
    same = s.ranking.ranked[i].kind == r.ranking.ranked[i].kind &&
           s.ranking.ranked[i].accuracies == r.ranking.ranked[i].accuracies;
  o.require(same, "threads=1 and threads=4 runs differ");
  o.detail << "PNN " << format_double(r.pnn.accuracy.min) << " <= " << format_double(r.pnn.accuracy.mean)
           << " <= " << format_double(r.pnn.accuracy.max) << "; serial run identical to 4-thread run";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Outcome&)>> criteria{
      {"metric arithmetic", metric_arithmetic},
      {"variance-table consistency", variance_tables},
      {"PNN vs Bayes oracle", pnn_bayes_oracle},
      {"dot-product pattern unit identity", dot_product_identity},
      {"PCA numerics", pca_numerics},
      {"kNN brute-force equivalence", knn_equivalence},
      {"end-to-end synthetic pipeline", pipeline_end_to_end},
      {"feature formula suite", featex_suite},
      {"repetition protocol", repetition_protocol},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu: %s [%s] (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.str().c_str(), secs);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
  return failed;
}
