#include "sqzlab/recon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sqzlab/errors.hpp"

namespace sqzlab {

CovarianceMap estimate_covariance(const FrameEnsemble& ensemble) {
  const int n = ensemble.n_frames();
  if (n < 2) throw DataError("estimate_covariance: fewer than 2 frames");

  const Eigen::RowVectorXd mean = ensemble.frames.colwise().mean();
  const Eigen::MatrixXd centered = ensemble.frames.rowwise() - mean;

  CovarianceMap cm;
  cm.cov = centered.transpose() * centered / double(n - 1);
  cm.cov = 0.5 * (cm.cov + cm.cov.transpose()).eval();
  cm.normalized = false;
  cm.n_frames_used = n;
  cm.dtheta = ensemble.grid.spacing();
  return cm;
}

CovarianceMap normalize_covariance(const CovarianceMap& cov) {
  const double total = cov.double_sum();
  if (!(total > 0.0))
    throw DegenerateDataError("normalize_covariance: non-positive covariance total");
  CovarianceMap out = cov;
  out.cov = cov.cov / total;
  out.normalized = true;
  return out;
}

ModeReconstruction decompose(const CovarianceMap& cov, int n_keep) {
  if (!cov.normalized)
    throw DataError("decompose: covariance must be normalized first");
  if (n_keep < 1) throw ConfigError("decompose: n_keep must be >= 1");

  // Negative entries are sampling noise; the noise-free map is a perfect
  // square. Clamp and record the clamped mass.
  const Eigen::Index np = cov.cov.rows();
  Eigen::MatrixXd clamped = cov.cov.cwiseMax(0.0);
  double neg_mass = 0.0;
  Eigen::Index neg_count = 0;
  for (Eigen::Index i = 0; i < np; ++i)
    for (Eigen::Index j = 0; j < np; ++j)
      if (cov.cov(i, j) < 0.0) {
        neg_mass -= cov.cov(i, j);
        ++neg_count;
      }

  const Eigen::MatrixXd root = clamped.cwiseSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(root);
  if (eig.info() != Eigen::Success)
    throw DegenerateDataError("decompose: eigendecomposition failed");

  // Sort by |eigenvalue| descending.
  const Eigen::VectorXd evals = eig.eigenvalues();
  std::vector<int> order(np);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(evals[a]) > std::abs(evals[b]);
  });

  ModeReconstruction rec;
  rec.dtheta = cov.dtheta;
  rec.n_kept = std::min<int>(n_keep, static_cast<int>(np));
  rec.weights.resize(rec.n_kept);
  rec.modes.resize(rec.n_kept, np);
  const double inv_sqrt_dtheta = 1.0 / std::sqrt(cov.dtheta);
  for (int k = 0; k < rec.n_kept; ++k) {
    rec.weights[k] = std::abs(evals[order[k]]);
    rec.modes.row(k) = eig.eigenvectors().col(order[k]).transpose() * inv_sqrt_dtheta;
  }

  const double total_sq = evals.squaredNorm();
  double kept_sq = 0.0;
  for (int k = 0; k < rec.n_kept; ++k) kept_sq += rec.weights[k] * rec.weights[k];
  rec.residual = total_sq > 0.0 ? std::sqrt(std::max(0.0, total_sq - kept_sq) / total_sq) : 0.0;

  const double wsum = rec.weights.sum();
  if (!(wsum > 0.0)) throw DegenerateDataError("decompose: all kept weights vanish");
  rec.weights /= wsum;

  rec.clamped_mass = neg_mass;
  rec.negative_fraction = double(neg_count) / double(np * np);
  return rec;
}

Eigen::VectorXd mode_populations(const ModeReconstruction& rec, double total_mean) {
  if (total_mean < 0.0) throw DataError("mode_populations: negative total photon number");
  return rec.weights * total_mean;
}

ModeReconstruction match_sign_and_pair(const ModeReconstruction& rec,
                                       const ModeBasis& reference,
                                       ModeAlignment* alignment) {
  if (rec.modes.cols() != reference.grid.n_points)
    throw DimensionError("match_sign_and_pair: grids differ");

  const int n_ref = reference.n_modes();
  // overlaps(m, j) = <rec_m | ref_j> under grid quadrature
  const Eigen::MatrixXd ov = rec.modes * reference.modes.transpose() * rec.dtheta;

  ModeAlignment align;
  align.assignment.assign(rec.n_kept, -1);
  align.overlaps = Eigen::VectorXd::Zero(rec.n_kept);
  std::vector<bool> used(n_ref, false);

  for (int m = 0; m < rec.n_kept; ++m) {
    int best = -1;
    double best_abs = -1.0, second = -1.0;
    for (int j = 0; j < n_ref; ++j) {
      if (used[j]) continue;
      const double a = std::abs(ov(m, j));
      if (a > best_abs) {
        second = best_abs;
        best_abs = a;
        best = j;
      } else if (a > second) {
        second = a;
      }
    }
    if (best < 0) break;  // more kept modes than reference modes
    if (second >= 0.0 && best_abs - second < 1e-3) align.ambiguous = true;
    used[best] = true;
    align.assignment[m] = best;
    align.overlaps[m] = best_abs;
  }

  ModeReconstruction out;
  out.n_kept = rec.n_kept;
  out.residual = rec.residual;
  out.clamped_mass = rec.clamped_mass;
  out.negative_fraction = rec.negative_fraction;
  out.dtheta = rec.dtheta;
  const int n_out = std::max(n_ref, rec.n_kept);
  out.weights = Eigen::VectorXd::Zero(n_out);
  out.modes = Eigen::MatrixXd::Zero(n_out, rec.modes.cols());
  for (int m = 0; m < rec.n_kept; ++m) {
    const int j = align.assignment[m];
    if (j < 0) continue;
    const double sign = ov(m, j) < 0.0 ? -1.0 : 1.0;
    out.weights[j] = rec.weights[m];
    out.modes.row(j) = sign * rec.modes.row(m);
  }
  if (alignment) *alignment = align;
  return out;
}

}  // namespace sqzlab
