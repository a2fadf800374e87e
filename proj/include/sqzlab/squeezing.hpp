#ifndef SQZLAB_SQUEEZING_HPP
#define SQZLAB_SQUEEZING_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sqzlab/gaussian_core.hpp"

namespace sqzlab {

/// Mode weights and total mean photon number of one fringe dataset.
struct FringeSummary {
  Eigen::VectorXd weights;  // indexed by interferometer mode n
  double total_mean = 0.0;
};

struct TripleDataset {
  FringeSummary bright;
  FringeSummary dark;
  FringeSummary vacuum;
  Eigen::MatrixXd g;  // squeezer modes (rows) x interferometer modes (cols)

  void validate() const;
};

struct ModeSqueezing {
  double s_db = 0.0;
  double as_db = 0.0;
  double s_err_db = 0.0;   // filled by estimate_uncertainty
  double as_err_db = 0.0;
  bool measurable = true;  // false when every vacuum weight in the row is floored
};

struct SqueezingReport {
  std::vector<ModeSqueezing> modes;
  double vacuum_floor = 0.0;
  std::vector<double> row_norm_deficit;  // 1 - sum_n g_ln^2 over measurable n
};

/// Per-squeezer-mode squeezing and anti-squeezing from the three fringe
/// datasets:
///   AS_l = 10 log10 sum_n g_ln^2 (lambda_n^B <N_B>) / (lambda_n^AV <N_AV>)
///   S_l  = 10 log10 sum_n g_ln^2 (lambda_n^D <N_D>) / (lambda_n^AV <N_AV>)
/// Interferometer modes whose vacuum weight falls below the floor are
/// excluded from the sums and reported through row_norm_deficit.
SqueezingReport extract_squeezing(const TripleDataset& data, double vacuum_floor = 1e-6);

/// Sample standard deviation of S_l, AS_l across independent datasets.
struct UncertaintyEstimate {
  Eigen::VectorXd s_std_db;
  Eigen::VectorXd as_std_db;
};
UncertaintyEstimate estimate_uncertainty(const std::vector<SqueezingReport>& reports);

/// Mean report over seeds with per-mode uncertainties attached.
SqueezingReport pool_reports(const std::vector<SqueezingReport>& reports);

struct TruthDeviation {
  Eigen::VectorXd ds_db;
  Eigen::VectorXd das_db;
  double max_abs_db = 0.0;  // over the first n_compare modes
};
TruthDeviation compare_to_truth(const SqueezingReport& report,
                                const std::vector<ModeTruth>& truth,
                                int n_compare = -1);

}  // namespace sqzlab

#endif
