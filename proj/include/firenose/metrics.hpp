#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "firenose/types.hpp"

namespace firenose {

// counts[predicted][actual], the row = Predicted / column = Actual layout.
struct ConfusionMatrix {
  std::vector<std::vector<long>> counts;
  std::vector<std::string> class_names;

  std::size_t num_classes() const { return counts.size(); }
  long at(ClassId predicted, ClassId actual) const {
    return counts[static_cast<std::size_t>(predicted)][static_cast<std::size_t>(actual)];
  }
  long total() const;
  long correct() const;
  long actual_count(ClassId actual) const;  // column sum
};

// Fire-detection view of a multi-class confusion matrix with ambient air as
// the negative class.
struct BinaryCollapse {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
};

struct RepetitionStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t n_repetitions = 0;
};

ConfusionMatrix confusion(const std::vector<ClassId>& predicted, const Labels& actual, std::size_t num_classes,
                          std::vector<std::string> class_names = {});

// TN = neg predicted as neg; FN = fire predicted as neg; TP = fire classes
// predicted as themselves; FP = everything else (wrong material, or ambient
// predicted as a material).
BinaryCollapse binary_collapse(const ConfusionMatrix& cm, ClassId negative_class);

// Percentages. Throw UndefinedMetric on a zero denominator.
double sensitivity(const BinaryCollapse& bc);
double specificity(const BinaryCollapse& bc);
double accuracy(const BinaryCollapse& bc);

// Multi-class accuracy in percent (trace over total).
double accuracy(const ConfusionMatrix& cm);
double accuracy(const std::vector<ClassId>& predicted, const Labels& actual);

// Recall per actual class in percent; throws UndefinedMetric for an empty column.
std::vector<double> per_class_accuracy(const ConfusionMatrix& cm);
double class_recall(const ConfusionMatrix& cm, ClassId actual);

RepetitionStats repetition_stats(const std::vector<double>& values);

// Sensitivity, specificity and accuracy computed together. A metric whose
// denominator vanishes is reported as NaN here rather than thrown.
struct BinaryMetrics {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double accuracy = 0.0;
};
BinaryMetrics binary_metrics(const BinaryCollapse& bc);

// CSV with a leading `predicted` column, one column per actual class and a
// final recall column. Rows with an empty actual column print `undefined`.
void write_confusion_csv(const ConfusionMatrix& cm, const std::filesystem::path& path);
ConfusionMatrix read_confusion_csv(const std::filesystem::path& path);

}  // namespace firenose
