#ifndef SQZLAB_PIPELINE_HPP
#define SQZLAB_PIPELINE_HPP

#include <optional>
#include <vector>

#include "sqzlab/config.hpp"
#include "sqzlab/frame_synth.hpp"
#include "sqzlab/gaussian_core.hpp"
#include "sqzlab/recon.hpp"
#include "sqzlab/squeezing.hpp"

namespace sqzlab {

/// Wire the hg_modes / gaussian_core pieces from a config. The squeezer uses
/// its stripe-effective gain; per-mode spectra come from geometric decay
/// calibrated against the collinear gain of each stage.
InterferometerModel build_model(const ExperimentConfig& cfg, Fringe fringe);

/// Single-mode collinear model (blue-square measurement) at G1, G2.
InterferometerModel build_collinear_model(const ExperimentConfig& cfg, Fringe fringe);

AcquisitionConfig make_acquisition(const ExperimentConfig& cfg, Fringe fringe,
                                   std::uint64_t seed);

struct FringeReconstruction {
  FringeSummary summary;       // weights in amplifier-basis order + total mean
  ModeReconstruction aligned;  // after pairing with the amplifier basis
  ModeAlignment alignment;
};

/// Covariance -> sqrt -> eigenmodes -> alignment with the model's amplifier
/// basis, producing Eq.-style weights indexed consistently with g columns.
FringeReconstruction reconstruct_fringe(const FrameEnsemble& ensemble,
                                        const InterferometerModel& model, int n_keep);

/// One seed, three fringes, one squeezing report.
SqueezingReport analyze_seed(const ExperimentConfig& cfg, std::uint64_t seed);

struct FullAnalysis {
  SqueezingReport pooled;               // means over seeds with uncertainties
  std::vector<SqueezingReport> per_seed;
  std::vector<ModeTruth> truth;         // squeezer-output-after-loss reference
  PhaseScanResult collinear_scan;
};

FullAnalysis run_full_analysis(const ExperimentConfig& cfg);

}  // namespace sqzlab

#endif
