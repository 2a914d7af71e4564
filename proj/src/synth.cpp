#include "firenose/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include "firenose/error.hpp"
#include "firenose/featex.hpp"

namespace firenose {

void SynthConfig::validate() const {
  if (n_classes < 2) throw ConfigError("n_classes must be at least 2 (one material plus ambient)");
  if (n_sensors < 1) throw ConfigError("n_sensors must be positive");
  if (samples_per_material_class < 1) throw ConfigError("samples_per_material_class must be positive");
  if (ambient_samples < 1) throw ConfigError("ambient_samples must be positive");
  if (timesteps < 1) throw ConfigError("timesteps must be positive");
  if (!(signature_separation > 0.0)) throw ConfigError("signature_separation must be positive");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be non-negative");
  if (!(drift_rate >= 0.0)) throw ConfigError("drift_rate must be non-negative");
  if (!(sample_rate > 0.0)) throw ConfigError("sample_rate must be positive");
  if (!(onset_fraction >= 0.0 && onset_fraction < 1.0)) throw ConfigError("onset_fraction must lie in [0, 1)");
}

SynthOutput generate_synthetic(const SynthConfig& config) {
  config.validate();
  const int K = config.n_classes;
  const int S = config.n_sensors;
  const int T = config.timesteps;

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SynthOutput out;
  out.sensor_baseline.resize(S);
  for (int s = 0; s < S; ++s) out.sensor_baseline(s) = 0.8 + 0.8 * unit(rng);

  out.signatures = Matrix::Zero(K, S);
  for (int c = 0; c + 1 < K; ++c)
    for (int s = 0; s < S; ++s) out.signatures(c, s) = config.signature_separation * (0.05 + 0.95 * unit(rng));

  std::vector<std::string> names;
  for (int c = 1; c < K; ++c) names.push_back("M" + std::to_string(c));
  names.emplace_back("NA");

  const int onset = static_cast<int>(std::lround(config.onset_fraction * T));
  const double tau = std::max(1.0, static_cast<double>(T - onset) / 6.0);

  auto noise = [&] { return config.noise_sigma > 0.0 ? config.noise_sigma * gauss(rng) : 0.0; };

  for (int c = 0; c < K; ++c) {
    const bool ambient = c == K - 1;
    const int count = ambient ? config.ambient_samples : config.samples_per_material_class;
    for (int n = 0; n < count; ++n) {
      Vector base = out.sensor_baseline;
      for (int s = 0; s < S; ++s) base(s) += noise();
      Vector slope = Vector::Zero(S);
      if (config.drift_rate > 0.0)
        for (int s = 0; s < S; ++s) slope(s) = config.drift_rate * (2.0 * unit(rng) - 1.0);

      OdourRecording rec;
      rec.class_id = c;
      rec.sample_rate = config.sample_rate;
      rec.values.resize(T, S);
      for (int t = 0; t < T; ++t) {
        const double rise = t >= onset ? 1.0 - std::exp(-static_cast<double>(t - onset) / tau) : 0.0;
        for (int s = 0; s < S; ++s)
          rec.values(t, s) = base(s) + out.signatures(c, s) * rise + slope(s) * t + noise();
      }
      rec.baseline = estimate_baseline(rec.values, 0.05);
      rec.metadata["source"] = names[static_cast<std::size_t>(c)];
      rec.metadata["index"] = std::to_string(n);
      out.recordings.push_back(std::move(rec));
    }
  }

  auto& ds = out.dataset;
  ds.class_names = names;
  ds.negative_class = K - 1;
  ds.rows.resize(static_cast<Eigen::Index>(out.recordings.size()), S);
  for (std::size_t r = 0; r < out.recordings.size(); ++r) {
    ds.labels.push_back(out.recordings[r].class_id);
    ds.rows.row(static_cast<Eigen::Index>(r)) = response_point(out.recordings[r].values).transpose();
  }
  return out;
}

}  // namespace firenose
