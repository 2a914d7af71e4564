#include "firenose/pnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "firenose/error.hpp"

namespace firenose {

namespace {

constexpr int kModelVersion = 1;
constexpr const char* kModelFormat = "firenose-pnn";

double accuracy_pct(const std::vector<ClassId>& pred, const Labels& actual) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == actual[i];
  return 100.0 * static_cast<double>(hit) / static_cast<double>(pred.size());
}

}  // namespace

PnnModel PnnModel::fit(const Matrix& train, const Labels& labels, std::size_t num_classes, const PnnOptions& options) {
  if (!(options.spread > 0.0) || !std::isfinite(options.spread)) throw ConfigError("spread must be positive");
  if (!(options.tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
  if (static_cast<std::size_t>(train.rows()) != labels.size()) throw DimensionError("pattern and label counts differ");
  if (num_classes == 0) throw ConfigError("PNN needs at least one class");
  if (train.cols() < 1) throw DimensionError("patterns need at least one dimension");
  if (!train.allFinite()) throw DomainError("training patterns contain non-finite values");

  PnnModel m;
  m.spread_ = options.spread;
  m.tolerance_ = options.tolerance;
  m.input_dim_ = train.cols();

  std::vector<IndexList> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes) throw DimensionError("label outside class range");
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (std::size_t k = 0; k < num_classes; ++k) {
    if (members[k].empty()) throw ConfigError("class " + std::to_string(k) + " has no training patterns");
    m.patterns_.push_back(take_rows(train, members[k]));
  }

  if (options.priors.empty()) {
    m.priors_.assign(num_classes, 1.0 / static_cast<double>(num_classes));
  } else {
    if (options.priors.size() != num_classes) throw ConfigError("one prior per class required");
    double sum = 0.0;
    for (double p : options.priors) {
      if (!(p > 0.0)) throw ConfigError("priors must be positive");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("priors must sum to 1");
    m.priors_ = options.priors;
  }
  if (options.costs.empty()) {
    m.costs_.assign(num_classes, 1.0);
  } else {
    if (options.costs.size() != num_classes) throw ConfigError("one cost per class required");
    for (double c : options.costs)
      if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("costs must be positive");
    m.costs_ = options.costs;
  }
  return m;
}

std::size_t PnnModel::total_patterns() const {
  std::size_t n = 0;
  for (const auto& p : patterns_) n += static_cast<std::size_t>(p.rows());
  return n;
}

void PnnModel::check_query(const Vector& x) const {
  if (x.size() != input_dim_)
    throw DimensionError("query has dimension " + std::to_string(x.size()) + ", model expects " + std::to_string(input_dim_));
  if (!x.allFinite()) throw DomainError("query contains non-finite values");
}

double PnnModel::log_kernel_sum(ClassId k, const Vector& x) const {
  const Matrix& p = patterns(k);
  const double inv = 1.0 / (2.0 * spread_ * spread_);
  thread_local std::vector<double> expo;
  expo.resize(static_cast<std::size_t>(p.rows()));
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    const double e = -(p.row(i).transpose() - x).squaredNorm() * inv;
    expo[static_cast<std::size_t>(i)] = e;
    best = std::max(best, e);
  }
  if (!std::isfinite(best)) return best;
  double acc = 0.0;
  for (double e : expo) acc += std::exp(e - best);
  return best + std::log(acc);
}

double PnnModel::log_density(ClassId k, const Vector& x) const {
  check_query(x);
  const double n = static_cast<double>(input_dim_);
  const double log_norm = 0.5 * n * std::log(2.0 * std::numbers::pi) + n * std::log(spread_) +
                          std::log(static_cast<double>(class_size(k)));
  return log_kernel_sum(k, x) - log_norm;
}

double PnnModel::density(ClassId k, const Vector& x) const { return std::exp(log_density(k, x)); }

PnnDecision PnnModel::classify(const Vector& x) const {
  check_query(x);
  const std::size_t K = num_classes();
  PnnDecision d;
  d.log_scores.resize(K);
  for (std::size_t k = 0; k < K; ++k)
    d.log_scores[k] = std::log(priors_[k]) + std::log(costs_[k]) + log_density(static_cast<ClassId>(k), x);

  std::size_t best = 0;
  for (std::size_t k = 1; k < K; ++k)
    if (d.log_scores[k] > d.log_scores[best]) best = k;
  const double top = d.log_scores[best];

  d.scores.assign(K, 0.0);
  if (!std::isfinite(top)) {
    // Every class score vanished; fall back to the nearest stored pattern.
    double nearest = std::numeric_limits<double>::infinity();
    best = 0;
    for (std::size_t k = 0; k < K; ++k) {
      const Matrix& p = patterns_[k];
      for (Eigen::Index i = 0; i < p.rows(); ++i) {
        const double dist = (p.row(i).transpose() - x).squaredNorm();
        if (dist < nearest) {
          nearest = dist;
          best = k;
        }
      }
    }
    d.predicted_class = static_cast<ClassId>(best);
    d.scores[best] = 1.0;
    d.margin = 0.0;
    d.ambiguous = true;
    return d;
  }

  double sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    d.scores[k] = std::exp(d.log_scores[k] - top);
    sum += d.scores[k];
  }
  for (auto& s : d.scores) s /= sum;

  double second = 0.0;
  for (std::size_t k = 0; k < K; ++k)
    if (k != best) second = std::max(second, d.scores[k]);
  d.predicted_class = static_cast<ClassId>(best);
  d.margin = K == 1 ? 1.0 : d.scores[best] - second;
  d.ambiguous = d.margin < tolerance_;
  return d;
}

std::vector<ClassId> PnnModel::predict(const Matrix& queries) const {
  std::vector<ClassId> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) out.push_back(classify(queries.row(i).transpose()).predicted_class);
  return out;
}

double pattern_activation(const Vector& x, const Vector& w, double spread) {
  if (x.size() != w.size()) throw DimensionError("pattern and query dimensions differ");
  if (!(spread > 0.0)) throw ConfigError("spread must be positive");
  const double z_in = x.dot(w);
  return std::exp((z_in - 1.0) / (spread * spread));
}

Vector PnnModel::pattern_unit_form(const Vector& x_unit) const {
  check_query(x_unit);
  if (std::abs(x_unit.norm() - 1.0) > 1e-6) throw DomainError("pattern unit form requires a unit-norm query");
  Vector out(static_cast<Eigen::Index>(total_patterns()));
  Eigen::Index j = 0;
  for (const auto& p : patterns_) {
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const Vector w = p.row(i).transpose();
      if (std::abs(w.norm() - 1.0) > 1e-6) throw DomainError("pattern unit form requires unit-norm patterns");
      out(j++) = pattern_activation(x_unit, w, spread_);
    }
  }
  return out;
}

std::string PnnModel::to_json(const std::vector<std::string>& class_names) const {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["spread"] = spread_;
  j["tolerance"] = tolerance_;
  j["input_dim"] = input_dim_;
  j["priors"] = priors_;
  j["costs"] = costs_;
  if (!class_names.empty()) j["class_names"] = class_names;
  auto& classes = j["patterns"] = nlohmann::json::array();
  for (const auto& p : patterns_) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      std::vector<double> r(p.row(i).data(), p.row(i).data() + p.cols());
      rows.push_back(r);
    }
    classes.push_back(rows);
  }
  return j.dump();
}

PnnModel PnnModel::from_json(const std::string& text, std::vector<std::string>* class_names) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed PNN model: ") + e.what());
  }
  if (j.value("format", "") != kModelFormat) throw Error("not a PNN model file");
  if (j.value("version", 0) != kModelVersion) throw Error("unsupported PNN model version");
  try {
    const auto dim = j.at("input_dim").get<Eigen::Index>();
    Matrix all;
    Labels labels;
    std::vector<std::vector<double>> rows;
    const auto& classes = j.at("patterns");
    for (std::size_t k = 0; k < classes.size(); ++k) {
      for (const auto& r : classes[k]) {
        rows.push_back(r.get<std::vector<double>>());
        if (static_cast<Eigen::Index>(rows.back().size()) != dim) throw Error("pattern dimension mismatch in model file");
        labels.push_back(static_cast<ClassId>(k));
      }
    }
    all.resize(static_cast<Eigen::Index>(rows.size()), dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (Eigen::Index c = 0; c < dim; ++c) all(static_cast<Eigen::Index>(i), c) = rows[i][static_cast<std::size_t>(c)];
    PnnOptions opt;
    opt.spread = j.at("spread").get<double>();
    opt.tolerance = j.at("tolerance").get<double>();
    opt.priors = j.at("priors").get<std::vector<double>>();
    opt.costs = j.at("costs").get<std::vector<double>>();
    if (class_names) *class_names = j.value("class_names", std::vector<std::string>{});
    return fit(all, labels, classes.size(), opt);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed PNN model: ") + e.what());
  }
}

void PnnModel::save(const std::filesystem::path& path, const std::vector<std::string>& class_names) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << to_json(class_names) << '\n';
}

PnnModel PnnModel::load(const std::filesystem::path& path, std::vector<std::string>* class_names) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str(), class_names);
}

std::vector<double> default_spread_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(i / 100.0);
  return grid;
}

SpreadSweep spread_sweep(const Matrix& train, const Labels& train_labels, const Matrix& validation,
                         const Labels& validation_labels, std::size_t num_classes,
                         const std::vector<double>& candidates, const PnnOptions& base) {
  if (candidates.empty()) throw ConfigError("spread candidate list is empty");
  if (validation.rows() == 0) throw ConfigError("empty validation set");
  if (static_cast<std::size_t>(validation.rows()) != validation_labels.size())
    throw DimensionError("validation rows and labels differ");
  SpreadSweep out;
  double best_acc = -1.0;
  for (double s : candidates) {
    if (!(s > 0.0)) throw ConfigError("spread candidates must be positive");
    PnnOptions opt = base;
    opt.spread = s;
    auto model = PnnModel::fit(train, train_labels, num_classes, opt);
    const double acc = accuracy_pct(model.predict(validation), validation_labels);
    out.accuracy.emplace_back(s, acc);
    if (acc > best_acc || (acc == best_acc && s < out.best_spread)) {
      best_acc = acc;
      out.best_spread = s;
    }
  }
  return out;
}

}  // namespace firenose
