#include "firenose/featex.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "firenose/error.hpp"

namespace firenose {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::RLSSV: return "RLSSV";
    case FeatureKind::RLV: return "RLV";
    case FeatureKind::RSSV: return "RSSV";
    case FeatureKind::RV: return "RV";
    case FeatureKind::FVC: return "FVC";
  }
  return "?";
}

FeatureKind parse_feature_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto k : kAllFeatureKinds)
    if (to_string(k) == upper) return k;
  throw ConfigError("unknown feature kind '" + std::string(name) + "' (expected rlssv, rlv, rssv, rv or fvc)");
}

namespace {

double log_b(double x) { return std::log10(x); }

void require_positive(const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!(v(i) > 0.0))
      throw DomainError("log of non-positive voltage " + std::to_string(v(i)) + " at sensor " + std::to_string(i + 1));
}

void require_baseline(const Vector& v, const Vector& b) {
  if (b.size() != v.size()) throw DimensionError("baseline length does not match sensor count");
  for (Eigen::Index i = 0; i < b.size(); ++i)
    if (b(i) == 0.0) throw DomainError("zero baseline at sensor " + std::to_string(i + 1));
}

}  // namespace

Vector rlssv(const Vector& v) {
  if (v.size() == 0) throw DimensionError("empty voltage vector");
  require_positive(v);
  const double ss = v.squaredNorm();
  if (std::abs(ss - 1.0) <= 1e-12) throw DomainError("degenerate denominator: sum of squared voltages is 1");
  const double denom = log_b(ss);
  return v.unaryExpr([denom](double x) { return log_b(x) / denom; });
}

Vector rlv(const Vector& v) {
  if (v.size() == 0) throw DimensionError("empty voltage vector");
  require_positive(v);
  return v.unaryExpr([](double x) { return log_b(x) / x; });
}

Vector rssv(const Vector& v) {
  if (v.size() == 0) throw DimensionError("empty voltage vector");
  const double n = v.norm();
  if (!(n > 0.0)) throw DomainError("zero-norm input");
  return v / n;
}

Vector rv(const Vector& v, const Vector& baseline) {
  require_baseline(v, baseline);
  return v.cwiseQuotient(baseline);
}

Vector fvc(const Vector& v, const Vector& averaged_baseline) {
  require_baseline(v, averaged_baseline);
  return (averaged_baseline - v).cwiseQuotient(averaged_baseline);
}

Vector extract(FeatureKind kind, const Vector& v, const Vector* baseline) {
  switch (kind) {
    case FeatureKind::RLSSV: return rlssv(v);
    case FeatureKind::RLV: return rlv(v);
    case FeatureKind::RSSV: return rssv(v);
    case FeatureKind::RV:
    case FeatureKind::FVC:
      if (!baseline) throw ConfigError(std::string(to_string(kind)) + " requires a baseline");
      return kind == FeatureKind::RV ? rv(v, *baseline) : fvc(v, *baseline);
  }
  throw ConfigError("unknown feature kind");
}

Matrix extract_recording(const OdourRecording& rec, FeatureKind kind) {
  rec.validate();
  Matrix out(rec.timesteps(), rec.sensors());
  for (Eigen::Index t = 0; t < rec.timesteps(); ++t) {
    try {
      out.row(t) = extract(kind, rec.values.row(t).transpose(), &rec.baseline).transpose();
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at timestep " + std::to_string(t));
    }
  }
  return out;
}

Vector response_point(const Matrix& feature_series, double window_fraction) {
  if (feature_series.rows() == 0) throw DimensionError("empty series");
  if (!(window_fraction > 0.0 && window_fraction <= 1.0)) throw ConfigError("window fraction must lie in (0, 1]");
  // Guard against 0.1 * 10 landing a hair above 1.
  const double exact = static_cast<double>(feature_series.rows()) * window_fraction;
  auto n = static_cast<Eigen::Index>(std::ceil(exact - 1e-9));
  if (n < 1) throw ConfigError("window covers less than one timestep");
  n = std::min(n, feature_series.rows());
  return feature_series.bottomRows(n).colwise().mean().transpose();
}

std::vector<std::string> FeatureMatrix::column_names() const {
  std::vector<std::string> names;
  auto lower = [](FeatureKind k) {
    std::string s(to_string(k));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  if (kind) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) names.push_back(lower(*kind) + "_" + std::to_string(j + 1));
  } else {
    for (const auto& [k, pcs] : provenance)
      for (int j = 0; j < pcs; ++j) names.push_back(lower(k) + "_pc" + std::to_string(j + 1));
  }
  return names;
}

FeatureMatrix extract_rows(const Matrix& rows, FeatureKind kind, const Vector* baseline) {
  FeatureMatrix fm;
  fm.kind = kind;
  fm.values.resize(rows.rows(), rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    try {
      fm.values.row(i) = extract(kind, rows.row(i).transpose(), baseline).transpose();
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " in row " + std::to_string(i + 1));
    }
  }
  return fm;
}

const FeatureMatrix& FeatureBank::at(FeatureKind kind) const {
  for (const auto& [k, fm] : features)
    if (k == kind) return fm;
  throw ConfigError("feature " + std::string(to_string(kind)) + " is not available");
}

bool FeatureBank::has(FeatureKind kind) const {
  return std::any_of(features.begin(), features.end(), [kind](const auto& p) { return p.first == kind; });
}

LabeledDataset FeatureBank::dataset(FeatureKind kind) const {
  const auto& fm = at(kind);
  return base.with_rows(fm.values, fm.column_names());
}

FeatureBank FeatureBank::from_recordings(const std::vector<OdourRecording>& recordings,
                                         const std::vector<std::string>& class_names,
                                         std::optional<ClassId> negative_class, double window_fraction,
                                         const std::vector<FeatureKind>& kinds) {
  if (recordings.empty()) throw DimensionError("no recordings");
  const auto sensors = recordings.front().sensors();
  FeatureBank bank;
  bank.base.class_names = class_names;
  bank.base.negative_class = negative_class ? negative_class : find_class(class_names, "NA");
  bank.base.rows.resize(static_cast<Eigen::Index>(recordings.size()), sensors);
  for (std::size_t r = 0; r < recordings.size(); ++r) {
    const auto& rec = recordings[r];
    rec.validate();
    if (rec.sensors() != sensors) throw DimensionError("recordings have differing sensor counts");
    bank.base.labels.push_back(rec.class_id);
    bank.base.rows.row(static_cast<Eigen::Index>(r)) = response_point(rec.values, window_fraction).transpose();
  }
  bank.base.validate();

  for (auto kind : kinds) {
    FeatureMatrix fm;
    fm.kind = kind;
    fm.values.resize(static_cast<Eigen::Index>(recordings.size()), sensors);
    try {
      for (std::size_t r = 0; r < recordings.size(); ++r) {
        try {
          fm.values.row(static_cast<Eigen::Index>(r)) =
              response_point(extract_recording(recordings[r], kind), window_fraction).transpose();
        } catch (const DomainError& e) {
          throw DomainError(std::string(e.what()) + " of recording " + std::to_string(r));
        }
      }
    } catch (const DomainError& e) {
      bank.excluded.emplace_back(kind, e.what());
      continue;
    }
    bank.features.emplace_back(kind, std::move(fm));
  }
  return bank;
}

FeatureBank FeatureBank::from_rows(const LabeledDataset& dataset, const std::optional<Vector>& baseline,
                                   const std::vector<FeatureKind>& kinds) {
  dataset.validate();
  FeatureBank bank;
  bank.base = dataset;
  for (auto kind : kinds) {
    if (needs_baseline(kind) && !baseline) {
      bank.excluded.emplace_back(kind, "no baseline supplied");
      continue;
    }
    try {
      bank.features.emplace_back(kind, extract_rows(dataset.rows, kind, baseline ? &*baseline : nullptr));
    } catch (const DomainError& e) {
      bank.excluded.emplace_back(kind, e.what());
    }
  }
  return bank;
}

}  // namespace firenose
