#include "firenose/knn.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "firenose/error.hpp"

namespace firenose {

KnnModel KnnModel::fit(const Matrix& train, const Labels& labels, int k) {
  if (static_cast<std::size_t>(train.rows()) != labels.size()) throw DimensionError("pattern and label counts differ");
  if (k < 1 || k > train.rows())
    throw ConfigError("k = " + std::to_string(k) + " outside [1, " + std::to_string(train.rows()) + "]");
  KnnModel m;
  m.patterns_ = train;
  m.labels_ = labels;
  m.k_ = k;
  return m;
}

ClassId KnnModel::classify(const Vector& x) const {
  if (x.size() != patterns_.cols())
    throw DimensionError("query has dimension " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(patterns_.cols()));
  const auto n = static_cast<std::size_t>(patterns_.rows());
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = (patterns_.row(static_cast<Eigen::Index>(i)).transpose() - x).squaredNorm();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto kk = static_cast<std::size_t>(k_);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(kk), order.end(),
                    [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });

  // class -> (votes, rank of its nearest member)
  std::map<ClassId, std::pair<int, std::size_t>> tally;
  for (std::size_t r = 0; r < kk; ++r) {
    auto c = labels_[order[r]];
    auto [it, inserted] = tally.try_emplace(c, 0, r);
    ++it->second.first;
  }
  auto best = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it) {
    const auto& [votes, rank] = it->second;
    if (votes > best->second.first || (votes == best->second.first && rank < best->second.second)) best = it;
  }
  return best->first;
}

std::vector<ClassId> KnnModel::predict(const Matrix& queries) const {
  std::vector<ClassId> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) out.push_back(classify(queries.row(i).transpose()));
  return out;
}

}  // namespace firenose
