#pragma once

#include <vector>

#include "firenose/dataset.hpp"

namespace firenose {

// Seeded stand-in for sensor-array odour recordings. Classes 0..K-2 are
// materials named M1..M{K-1}; the last class is ambient air "NA" and has no
// response. Every recording has an ambient lead-in (`onset_fraction` of the
// run) followed by a first-order rise towards baseline + signature.
struct SynthConfig {
  int n_classes = 9;  // including ambient
  int n_sensors = 8;
  int samples_per_material_class = 100;
  int ambient_samples = 200;
  double signature_separation = 1.0;  // volts, scale of class signatures
  double noise_sigma = 0.04;          // volts, white noise and baseline jitter
  double drift_rate = 0.0015;         // volts per timestep, bound on per-run drift slope
  int timesteps = 150;                // 15 min at 10 samples/min
  double sample_rate = 10.0;          // samples per minute
  double onset_fraction = 0.1;
  Seed seed = 42;

  void validate() const;
};

struct SynthOutput {
  std::vector<OdourRecording> recordings;
  LabeledDataset dataset;  // one raw response vector per recording
  Matrix signatures;       // K x S, ambient row is zero
  Vector sensor_baseline;  // S nominal baselines
};

SynthOutput generate_synthetic(const SynthConfig& config);

}  // namespace firenose
