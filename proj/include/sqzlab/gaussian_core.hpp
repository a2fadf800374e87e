#ifndef SQZLAB_GAUSSIAN_CORE_HPP
#define SQZLAB_GAUSSIAN_CORE_HPP

#include <Eigen/Dense>
#include <vector>

#include "sqzlab/hg_modes.hpp"

namespace sqzlab {

// Quadrature convention: vacuum variance 1/4 in both Q and P, so that an OPA
// of gain G seeded with vacuum emits sinh^2(G) photons per mode.
inline constexpr double kVacuumVariance = 0.25;

/// Per-mode gains r_n of one OPA stage; eigenvalue Lambda_n = sinh^2(r_n) is
/// the amplified-vacuum photon number of mode n.
struct SchmidtSpectrum {
  Eigen::VectorXd gains;  // r_n >= 0, non-increasing

  int size() const { return static_cast<int>(gains.size()); }
  Eigen::VectorXd eigenvalues() const;  // sinh^2(r_n)

  static SchmidtSpectrum geometric(double r0, double q, int n_modes);
};

/// Solve sinh^2(G) = sum_n sinh^2(r0 q^n) c_n for r0 by bisection, where
/// c_n = |u_n(0)|^2 / |u_0(0)|^2 are the central intensity ratios of the
/// basis (odd modes contribute nothing). Tolerance 1e-10 on r0.
double calibrate_r0(double collinear_gain, double q, const ModeBasis& basis);

/// Diagonal Gaussian state: per-mode variances of Q and P, zero means.
struct QuadratureState {
  Eigen::VectorXd var_q;
  Eigen::VectorXd var_p;

  int size() const { return static_cast<int>(var_q.size()); }
};

QuadratureState vacuum_state(int n_modes);

/// var_q *= e^{2 r_n}, var_p *= e^{-2 r_n} (Q anti-squeezed, P squeezed).
QuadratureState squeeze(const QuadratureState& state, const SchmidtSpectrum& spectrum);

/// Beamsplitter loss: var -> eta*var + (1-eta)/4 per quadrature per mode.
QuadratureState apply_loss(const QuadratureState& state, double eta);

enum class Fringe { Bright, Dark, AmplifiedVacuum };

const char* fringe_name(Fringe f);
Fringe fringe_from_name(const std::string& name);

struct StageParams {
  double gain = 0.0;        // collinear gain G of the stage
  SchmidtSpectrum spectrum; // per-mode r_n
  ModeBasis basis;
};

struct InterferometerModel {
  StageParams squeezer;
  StageParams amplifier;
  OverlapMatrix g;          // squeezer modes x amplifier modes, real
  OverlapMatrix h;          // amplifier output x interferometer output
  bool h_is_identity = true;
  double loss_eta = 1.0;    // lumped transmission between the stages
  Fringe fringe = Fringe::Bright;
};

/// Variance map through the overlap matrix: amplifier-input mode n receives
/// sum_l g_ln^2 var_l plus a vacuum share for the weight g truncates away.
QuadratureState map_through_overlap(const QuadratureState& state, const OverlapMatrix& g);

/// Squeezer-output state -> lumped loss -> overlap map -> phase-sensitive
/// amplification at the model's fringe. Returns interferometer-output
/// variances in the amplifier mode basis.
QuadratureState propagate_quadratures(const InterferometerModel& model,
                                      const QuadratureState& input);

/// Convenience: vacuum -> squeezer -> propagate (amplified vacuum skips the
/// squeezer by definition).
QuadratureState interferometer_output(const InterferometerModel& model);

/// State at the amplifier input for the model's fringe (after loss and the
/// overlap map; vacuum for the AmplifiedVacuum fringe).
QuadratureState amplifier_input(const InterferometerModel& model);

/// <N_n> = e^{2 r_n} <Q_phi^2> + e^{-2 r_n} <P_phi^2> - 1/2 per mode, where
/// Q_phi = Q cos(phi) + P sin(phi) selects the amplified quadrature.
Eigen::VectorXd opa_mean_photons(const QuadratureState& state,
                                 const SchmidtSpectrum& spectrum, double phi);

struct PhaseScanResult {
  std::vector<double> phases;       // quadrature angles phi
  std::vector<double> normalized;   // total photons / amplified-vacuum total
  double minimum = 0.0;
  double maximum = 0.0;
  double visibility = 0.0;
};

/// Fig.-2c style trace: total output photons vs amplified quadrature angle,
/// normalized to the vacuum-seeded amplifier.
PhaseScanResult phase_scan(const InterferometerModel& model,
                           const QuadratureState& input,
                           const std::vector<double>& phases);

struct ModeTruth {
  double s_db = 0.0;   // squeezing 10 log10(var_p / (1/4))
  double as_db = 0.0;  // anti-squeezing 10 log10(var_q / (1/4))
};

/// Per-squeezer-mode squeezing/anti-squeezing at the squeezer output after
/// the lumped loss: the reference the reconstruction must recover.
std::vector<ModeTruth> ground_truth_squeezing(const InterferometerModel& model);

/// Single-mode collinear figures for gain G and transmission eta.
ModeTruth collinear_squeezing(double gain, double eta);

}  // namespace sqzlab

#endif
