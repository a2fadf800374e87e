#ifndef SQZLAB_CONFIG_HPP
#define SQZLAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace sqzlab {

/// Full experiment description. Parsed from an INI-style text file with
/// [section] headers and key = value lines; unknown keys are errors.
struct ExperimentConfig {
  // [grid]
  double theta_min = -30e-3;
  double theta_max = 30e-3;
  int n_points = 601;

  // [squeezer]
  double squeezer_gain = 1.1;        // collinear gain G1
  double squeezer_gain_stripe = 1.05;  // effective gain for the off-axis stripe
  double squeezer_sigma0 = 1.0e-3;
  double squeezer_width_c = 0.3;
  double squeezer_decay_q = 0.8;

  // [amplifier]
  double amplifier_gain = 4.0;       // collinear gain G2
  double amplifier_sigma0 = 1.0e-3;
  double amplifier_width_c = 0.3;
  double amplifier_decay_q = 0.8;

  // [modes]
  int n_simulate = 20;
  int n_keep = 12;
  int n_report = 8;

  // [loss]
  double eta_pre = 0.85;     // lumped squeezer-to-amplifier transmission
  double eta_detect = 0.55;  // post-amplifier detection transmission

  // [acquisition]
  int n_frames = 1500;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4};
  double pump_rel_std = 0.0;
  bool shot_noise = false;

  // [scan]
  int n_phases = 200;

  // [output]
  std::string output_dir = "out";

  // [analysis]
  bool use_full_h = false;       // keep the h overlap instead of identity
  double vacuum_floor = 1e-6;

  void validate() const;
  std::string serialize() const;
  std::uint64_t hash() const;  // FNV-1a over the canonical serialization

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

/// Provenance record for one CLI run.
struct ManifestEntry {
  std::string path;
  std::uint64_t checksum = 0;
  std::uint64_t bytes = 0;
};

struct RunManifest {
  std::uint64_t config_hash = 0;
  std::string tool_version;
  std::vector<ManifestEntry> artifacts;
  double wall_seconds = 0.0;

  void add_file(const std::string& path);
  void write(const std::string& path) const;
  /// Re-reads every listed artifact and verifies its checksum.
  static bool verify(const std::string& manifest_path);
};

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t checksum_file(const std::string& path);

}  // namespace sqzlab

#endif
