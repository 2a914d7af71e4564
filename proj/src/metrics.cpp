#include "firenose/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "firenose/csv.hpp"
#include "firenose/error.hpp"

namespace firenose {

long ConfusionMatrix::total() const {
  long t = 0;
  for (const auto& row : counts) t = std::accumulate(row.begin(), row.end(), t);
  return t;
}

long ConfusionMatrix::correct() const {
  long t = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) t += counts[k][k];
  return t;
}

long ConfusionMatrix::actual_count(ClassId actual) const {
  long t = 0;
  for (const auto& row : counts) t += row[static_cast<std::size_t>(actual)];
  return t;
}

ConfusionMatrix confusion(const std::vector<ClassId>& predicted, const Labels& actual, std::size_t num_classes,
                          std::vector<std::string> class_names) {
  if (predicted.size() != actual.size())
    throw DimensionError("prediction count " + std::to_string(predicted.size()) + " does not match label count " +
                         std::to_string(actual.size()));
  ConfusionMatrix cm;
  cm.counts.assign(num_classes, std::vector<long>(num_classes, 0));
  cm.class_names = std::move(class_names);
  const auto K = static_cast<ClassId>(num_classes);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] < 0 || predicted[i] >= K || actual[i] < 0 || actual[i] >= K)
      throw DimensionError("label out of range at position " + std::to_string(i));
    ++cm.counts[static_cast<std::size_t>(predicted[i])][static_cast<std::size_t>(actual[i])];
  }
  return cm;
}

BinaryCollapse binary_collapse(const ConfusionMatrix& cm, ClassId negative_class) {
  const auto K = cm.num_classes();
  if (K < 2) throw ConfigError("binary collapse needs at least two classes");
  if (negative_class < 0 || static_cast<std::size_t>(negative_class) >= K)
    throw ConfigError("negative class id " + std::to_string(negative_class) + " is not a valid class");
  const auto neg = static_cast<std::size_t>(negative_class);
  BinaryCollapse bc;
  for (std::size_t p = 0; p < K; ++p) {
    for (std::size_t a = 0; a < K; ++a) {
      const long n = cm.counts[p][a];
      if (p == neg && a == neg)
        bc.tn += n;
      else if (p == neg)
        bc.fn += n;
      else if (p == a)
        bc.tp += n;
      else
        bc.fp += n;
    }
  }
  return bc;
}

namespace {

double pct(long num, long den, const char* what) {
  if (den == 0) throw UndefinedMetric(std::string("undefined metric: ") + what + " has a zero denominator");
  return 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double sensitivity(const BinaryCollapse& bc) { return pct(bc.tp, bc.tp + bc.fn, "sensitivity"); }
double specificity(const BinaryCollapse& bc) { return pct(bc.tn, bc.tn + bc.fp, "specificity"); }
double accuracy(const BinaryCollapse& bc) { return pct(bc.tp + bc.tn, bc.total(), "accuracy"); }

double accuracy(const ConfusionMatrix& cm) { return pct(cm.correct(), cm.total(), "accuracy"); }

double accuracy(const std::vector<ClassId>& predicted, const Labels& actual) {
  if (predicted.size() != actual.size()) throw DimensionError("prediction and label counts differ");
  long hit = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) hit += predicted[i] == actual[i];
  return pct(hit, static_cast<long>(predicted.size()), "accuracy");
}

double class_recall(const ConfusionMatrix& cm, ClassId actual) {
  return pct(cm.at(actual, actual), cm.actual_count(actual),
             ("recall of class " + std::to_string(actual)).c_str());
}

std::vector<double> per_class_accuracy(const ConfusionMatrix& cm) {
  std::vector<double> out;
  for (std::size_t k = 0; k < cm.num_classes(); ++k) out.push_back(class_recall(cm, static_cast<ClassId>(k)));
  return out;
}

RepetitionStats repetition_stats(const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("repetition statistics need at least one value");
  RepetitionStats s;
  s.n_repetitions = values.size();
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  // Summation round-off can push the mean of a constant list past its bounds.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

BinaryMetrics binary_metrics(const BinaryCollapse& bc) {
  auto safe = [](auto f, const BinaryCollapse& b) {
    try {
      return f(b);
    } catch (const UndefinedMetric&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  return {safe([](const BinaryCollapse& b) { return sensitivity(b); }, bc),
          safe([](const BinaryCollapse& b) { return specificity(b); }, bc),
          safe([](const BinaryCollapse& b) { return accuracy(b); }, bc)};
}

void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path) {
  const auto K = cm.num_classes();
  auto name = [&](std::size_t k) { return k < cm.class_names.size() ? cm.class_names[k] : std::to_string(k); };
  std::vector<std::string> header{"predicted"};
  for (std::size_t a = 0; a < K; ++a) header.push_back(name(a));
  header.emplace_back("accuracy");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t p = 0; p < K; ++p) {
    std::vector<std::string> row{name(p)};
    for (std::size_t a = 0; a < K; ++a) row.push_back(std::to_string(cm.counts[p][a]));
    try {
      row.push_back(format_double(class_recall(cm, static_cast<ClassId>(p))));
    } catch (const UndefinedMetric&) {
      row.emplace_back("undefined");
    }
    rows.push_back(std::move(row));
  }
  write_table(path, header, rows);
}

ConfusionMatrix read_confusion_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string() + " for reading");
  const std::string source = path.string();
  std::string line;
  std::size_t lineno = 0;
  ConfusionMatrix cm;
  std::size_t K = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (K == 0) {
      std::size_t end = cells.size();
      if (end > 0 && cells.back() == "accuracy") --end;
      if (end < 3) throw ParseError(source, lineno, "confusion header needs a label column and at least two classes");
      cm.class_names.assign(cells.begin() + 1, cells.begin() + static_cast<std::ptrdiff_t>(end));
      K = cm.class_names.size();
      continue;
    }
    if (cells.size() < K + 1) throw ParseError(source, lineno, "expected " + std::to_string(K + 1) + " or more cells");
    std::vector<long> row;
    for (std::size_t a = 0; a < K; ++a) {
      auto v = parse_double(cells[a + 1]);
      if (!v || *v < 0 || std::floor(*v) != *v) throw ParseError(source, lineno, "count '" + cells[a + 1] + "' is not a non-negative integer");
      row.push_back(static_cast<long>(*v));
    }
    cm.counts.push_back(std::move(row));
  }
  if (K == 0) throw ParseError(source, lineno, "empty confusion file");
  if (cm.counts.size() != K)
    throw ParseError(source, lineno, "expected " + std::to_string(K) + " predicted rows, found " + std::to_string(cm.counts.size()));
  return cm;
}

}  // namespace firenose
