#pragma once

#include "firenose/types.hpp"

namespace firenose {

// Brute-force Euclidean k-nearest-neighbour classifier.
//
// Distance ties go to the lower training index. Vote ties go to whichever of
// the tied classes owns the nearest neighbour.
class KnnModel {
 public:
  KnnModel() = default;

  static KnnModel fit(const Matrix& train, const Labels& labels, int k);

  int k() const { return k_; }
  const Matrix& patterns() const { return patterns_; }
  const Labels& labels() const { return labels_; }

  ClassId classify(const Vector& x) const;
  std::vector<ClassId> predict(const Matrix& queries) const;

 private:
  Matrix patterns_;
  Labels labels_;
  int k_ = 1;
};

}  // namespace firenose
