#include "sqzlab/frame_synth.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

#include "sqzlab/errors.hpp"

namespace sqzlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t shot, std::uint64_t salt)
    : engine_(splitmix64(splitmix64(seed ^ 0xa5a5a5a55a5a5a5aULL) + shot) ^
              splitmix64(salt + 0x517cc1b727220a95ULL)) {}

double RngStream::gauss() {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

long RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long> dist(mean);
  return dist(engine_);
}

void AcquisitionConfig::validate() const {
  if (n_frames < 2) throw ConfigError("acquisition: n_frames must be at least 2");
  if (detection_eta < 0.0 || detection_eta > 1.0)
    throw ConfigError("acquisition: detection_eta must be in [0,1]");
  if (pump_rel_std < 0.0) throw ConfigError("acquisition: pump_rel_std must be >= 0");
}

Eigen::VectorXd mode_photon_numbers(const InterferometerModel& model) {
  const QuadratureState in = amplifier_input(model);
  const Eigen::VectorXd& amplified_var =
      (model.fringe == Fringe::Dark) ? in.var_p : in.var_q;
  Eigen::VectorXd n(amplified_var.size());
  for (int i = 0; i < n.size(); ++i)
    n[i] = std::exp(2.0 * model.amplifier.spectrum.gains[i]) * amplified_var[i];
  return n;
}

Eigen::VectorXd sample_mode_amplitudes(const Eigen::VectorXd& mean_photons,
                                       RngStream& rng) {
  Eigen::VectorXd x(mean_photons.size());
  for (int i = 0; i < x.size(); ++i)
    x[i] = mean_photons[i] > 0.0 ? std::sqrt(mean_photons[i]) * rng.gauss() : 0.0;
  return x;
}

Eigen::VectorXd render_frame(const Eigen::VectorXd& amplitudes, const ModeBasis& basis,
                             double pump_factor) {
  if (amplitudes.size() > basis.n_modes())
    throw DimensionError("render_frame: more amplitudes than basis modes");
  const Eigen::VectorXd field =
      basis.modes.topRows(amplitudes.size()).transpose() * amplitudes;
  return pump_factor * basis.grid.spacing() * field.cwiseProduct(field);
}

Eigen::VectorXd apply_detection(const Eigen::VectorXd& frame, double eta,
                                bool shot_noise, RngStream& rng) {
  if (eta < 0.0 || eta > 1.0) throw ConfigError("apply_detection: eta must be in [0,1]");
  if (!shot_noise) return eta * frame;
  Eigen::VectorXd out(frame.size());
  for (int i = 0; i < frame.size(); ++i)
    out[i] = static_cast<double>(rng.poisson(eta * frame[i]));
  return out;
}

namespace {

// Salts keep the amplitude, pump, and detection streams of one shot apart.
constexpr std::uint64_t kAmplitudeSalt = 1;
constexpr std::uint64_t kPumpSalt = 2;
constexpr std::uint64_t kDetectionSalt = 3;

Eigen::VectorXd synthesize_shot(const Eigen::VectorXd& mean_photons,
                                const ModeBasis& basis, const AcquisitionConfig& cfg,
                                std::uint64_t shot) {
  RngStream amp_rng(cfg.seed, shot, kAmplitudeSalt);
  const Eigen::VectorXd x = sample_mode_amplitudes(mean_photons, amp_rng);

  double pump = 1.0;
  if (cfg.pump_rel_std > 0.0) {
    RngStream pump_rng(cfg.seed, shot, kPumpSalt);
    pump = std::max(0.0, 1.0 + cfg.pump_rel_std * pump_rng.gauss());
  }

  const Eigen::VectorXd raw = render_frame(x, basis, pump);
  RngStream det_rng(cfg.seed, shot, kDetectionSalt);
  return apply_detection(raw, cfg.detection_eta, cfg.shot_noise, det_rng);
}

int worker_count() {
  if (const char* env = std::getenv("SQZLAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

FrameEnsemble acquire_ensemble(const InterferometerModel& model,
                               const AcquisitionConfig& config) {
  config.validate();
  const Eigen::VectorXd mean_photons = mode_photon_numbers(model);
  const ModeBasis& basis = model.amplifier.basis;

  FrameEnsemble ens;
  ens.grid = basis.grid;
  ens.config = config;
  ens.frames.resize(config.n_frames, basis.grid.n_points);

  const int workers = std::min(worker_count(), config.n_frames);
  if (workers <= 1) {
    for (int s = 0; s < config.n_frames; ++s)
      ens.frames.row(s) = synthesize_shot(mean_photons, basis, config, s);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int s = w; s < config.n_frames; s += workers)
          ens.frames.row(s) = synthesize_shot(mean_photons, basis, config, s);
      });
    }
    for (auto& t : pool) t.join();
  }
  return ens;
}

Eigen::VectorXd mean_intensity_profile(const InterferometerModel& model) {
  const Eigen::VectorXd mean_photons = mode_photon_numbers(model);
  const ModeBasis& basis = model.amplifier.basis;
  Eigen::VectorXd profile = Eigen::VectorXd::Zero(basis.grid.n_points);
  for (int n = 0; n < mean_photons.size(); ++n)
    profile += mean_photons[n] * basis.modes.row(n).cwiseProduct(basis.modes.row(n)).transpose();
  return profile * basis.grid.spacing();
}

}  // namespace sqzlab
