#ifndef SQZLAB_FRAME_SYNTH_HPP
#define SQZLAB_FRAME_SYNTH_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "sqzlab/gaussian_core.hpp"
#include "sqzlab/hg_modes.hpp"

namespace sqzlab {

/// Per-shot random stream derived from (master seed, shot index, salt) by
/// counter-based key mixing, so parallel generation is order-independent.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t shot, std::uint64_t salt = 0);

  double gauss();                 // standard normal
  long poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

struct AcquisitionConfig {
  int n_frames = 1500;
  Fringe fringe = Fringe::Bright;
  double detection_eta = 1.0;
  double pump_rel_std = 0.0;
  std::uint64_t seed = 0;
  bool shot_noise = false;

  void validate() const;
};

struct FrameEnsemble {
  AngularGrid grid;
  AcquisitionConfig config;
  Eigen::MatrixXd frames;  // n_frames x n_points, photons per angular bin

  int n_frames() const { return static_cast<int>(frames.rows()); }
  int n_points() const { return static_cast<int>(frames.cols()); }

  /// Mean over frames of the grid-summed intensity.
  double total_mean() const { return frames.sum() / frames.rows(); }
};

/// High-gain photon numbers <N_n> = e^{2 r_n} * (amplified-quadrature
/// variance at the amplifier input) for the model's fringe.
Eigen::VectorXd mode_photon_numbers(const InterferometerModel& model);

/// One real Gaussian amplitude per mode, zero mean, variance <N_n>.
Eigen::VectorXd sample_mode_amplitudes(const Eigen::VectorXd& mean_photons,
                                       RngStream& rng);

/// I(theta_i) = pump_factor * |sum_n x_n u_n(theta_i)|^2 * dtheta.
Eigen::VectorXd render_frame(const Eigen::VectorXd& amplitudes, const ModeBasis& basis,
                             double pump_factor);

/// Deterministic scaling eta*I, or per-bin Poisson draws with mean eta*I.
Eigen::VectorXd apply_detection(const Eigen::VectorXd& frame, double eta,
                                bool shot_noise, RngStream& rng);

FrameEnsemble acquire_ensemble(const InterferometerModel& model,
                               const AcquisitionConfig& config);

/// Analytic ensemble-mean intensity profile, sum_n <N_n> |u_n(theta)|^2 dtheta.
Eigen::VectorXd mean_intensity_profile(const InterferometerModel& model);

}  // namespace sqzlab

#endif
