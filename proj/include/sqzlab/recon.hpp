#ifndef SQZLAB_RECON_HPP
#define SQZLAB_RECON_HPP

#include <Eigen/Dense>
#include <vector>

#include "sqzlab/frame_synth.hpp"
#include "sqzlab/hg_modes.hpp"

namespace sqzlab {

struct CovarianceMap {
  Eigen::MatrixXd cov;   // n_points x n_points, symmetric
  bool normalized = false;
  int n_frames_used = 0;
  double dtheta = 0.0;

  /// Quadrature double sum, sum_ij cov(i,j) * dtheta^2.
  double double_sum() const { return cov.sum() * dtheta * dtheta; }
};

/// Unbiased sample covariance of the per-bin intensities (divisor n-1).
CovarianceMap estimate_covariance(const FrameEnsemble& ensemble);

/// C = Cov / (double integral of Cov); the double sum becomes 1.
CovarianceMap normalize_covariance(const CovarianceMap& cov);

struct ModeReconstruction {
  Eigen::VectorXd weights;   // descending, renormalized to sum 1 over n_kept
  Eigen::MatrixXd modes;     // n_kept x n_points, orthonormal under quadrature
  int n_kept = 0;
  double residual = 0.0;     // relative Frobenius error of the rank-n_kept model
  double clamped_mass = 0.0; // |negative entries| clamped before sqrt / total mass
  double negative_fraction = 0.0;  // fraction of entries clamped
  double dtheta = 0.0;
};

/// Elementwise sqrt of the normalized covariance, then symmetric
/// eigendecomposition; |eigenvalues| are the raw weights, truncated to
/// n_keep and renormalized.
ModeReconstruction decompose(const CovarianceMap& cov, int n_keep);

/// <N_m> = lambda_m * total_mean.
Eigen::VectorXd mode_populations(const ModeReconstruction& rec, double total_mean);

struct ModeAlignment {
  std::vector<int> assignment;   // reconstructed mode m -> reference index
  Eigen::VectorXd overlaps;      // |<rec_m | ref_assignment[m]>|
  bool ambiguous = false;
};

/// Pair each reconstructed mode with the reference mode of maximal |overlap|
/// and fix signs to positive overlap. Weights/modes are reordered to the
/// reference indexing; unmatched reference indices get zero weight.
ModeReconstruction match_sign_and_pair(const ModeReconstruction& rec,
                                       const ModeBasis& reference,
                                       ModeAlignment* alignment = nullptr);

}  // namespace sqzlab

#endif
