#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#ifdef FIRENOSE_HAVE_BOOST_MP
#include <boost/multiprecision/cpp_bin_float.hpp>
#endif

#include "firenose/types.hpp"

namespace oracles {

#ifdef FIRENOSE_HAVE_BOOST_MP
using Wide = boost::multiprecision::cpp_bin_float_50;
#else
using Wide = long double;
#endif

// Bayes rule on two 1-D Gaussian-kernel mixtures evaluated directly (no log
// space) in extended precision. Returns 0 or 1; ties go to 0.
inline int bayes_two_class_1d(const std::vector<double>& a, const std::vector<double>& b, double sigma, double x) {
  using std::exp;
  using std::sqrt;
  const Wide s(sigma);
  const Wide two_pi = Wide(2) * Wide(3.14159265358979323846264338327950288419716939937510L);
  auto mixture = [&](const std::vector<double>& pts) {
    Wide sum(0);
    for (double p : pts) {
      const Wide d = Wide(x) - Wide(p);
      sum += exp(-(d * d) / (Wide(2) * s * s));
    }
    return sum / (Wide(static_cast<double>(pts.size())) * s * sqrt(two_pi));
  };
  return mixture(a) >= mixture(b) ? 0 : 1;
}

// Exhaustive kNN: sort all training points by (distance, index), vote over
// the first k, break vote ties by the class of the earliest-ranked member.
inline int knn_brute_force(const firenose::Matrix& train, const firenose::Labels& labels, int k,
                           const Eigen::VectorXd& x) {
  const auto n = static_cast<std::size_t>(train.rows());
  std::vector<std::pair<double, std::size_t>> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < train.cols(); ++j) {
      const double diff = train(static_cast<Eigen::Index>(i), j) - x(j);
      s += diff * diff;
    }
    d[i] = {s, i};
  }
  std::sort(d.begin(), d.end());
  const int classes = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> votes(static_cast<std::size_t>(classes), 0);
  for (int r = 0; r < k; ++r) ++votes[static_cast<std::size_t>(labels[d[static_cast<std::size_t>(r)].second])];
  const int top = *std::max_element(votes.begin(), votes.end());
  for (int r = 0; r < k; ++r) {
    const int c = labels[d[static_cast<std::size_t>(r)].second];
    if (votes[static_cast<std::size_t>(c)] == top) return c;
  }
  return -1;
}

}  // namespace oracles
