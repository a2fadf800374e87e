#include "sqzlab/squeezing.hpp"

#include <cmath>

#include "sqzlab/errors.hpp"

namespace sqzlab {

void TripleDataset::validate() const {
  const Eigen::Index n = vacuum.weights.size();
  if (bright.weights.size() != n || dark.weights.size() != n)
    throw DimensionError("TripleDataset: fringe weight vectors have different truncation");
  if (g.cols() != n)
    throw DimensionError("TripleDataset: g columns do not match the kept modes");
  for (const FringeSummary* s : {&bright, &dark, &vacuum}) {
    const double sum = s->weights.sum();
    if (std::abs(sum - 1.0) > 1e-9)
      throw DataError("TripleDataset: weights must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

SqueezingReport extract_squeezing(const TripleDataset& data, double vacuum_floor) {
  data.validate();
  const Eigen::Index n_int = data.g.cols();
  const Eigen::Index n_sq = data.g.rows();

  SqueezingReport report;
  report.vacuum_floor = vacuum_floor;
  report.modes.resize(n_sq);
  report.row_norm_deficit.resize(n_sq);

  for (Eigen::Index l = 0; l < n_sq; ++l) {
    double as_sum = 0.0, s_sum = 0.0, row_norm = 0.0;
    bool any = false;
    for (Eigen::Index n = 0; n < n_int; ++n) {
      const double g2 = data.g(l, n) * data.g(l, n);
      const double nav = data.vacuum.weights[n] * data.vacuum.total_mean;
      if (data.vacuum.weights[n] < vacuum_floor || nav <= 0.0) continue;
      any = true;
      row_norm += g2;
      as_sum += g2 * (data.bright.weights[n] * data.bright.total_mean) / nav;
      s_sum += g2 * (data.dark.weights[n] * data.dark.total_mean) / nav;
    }
    ModeSqueezing& m = report.modes[l];
    m.measurable = any && as_sum > 0.0 && s_sum > 0.0;
    if (m.measurable) {
      m.as_db = 10.0 * std::log10(as_sum);
      m.s_db = 10.0 * std::log10(s_sum);
    }
    report.row_norm_deficit[l] = 1.0 - row_norm;
  }
  return report;
}

UncertaintyEstimate estimate_uncertainty(const std::vector<SqueezingReport>& reports) {
  if (reports.size() < 2)
    throw DataError("estimate_uncertainty: need at least 2 independent datasets");
  const std::size_t n_modes = reports.front().modes.size();
  for (const auto& r : reports)
    if (r.modes.size() != n_modes)
      throw DimensionError("estimate_uncertainty: reports disagree on mode count");

  UncertaintyEstimate est;
  est.s_std_db = Eigen::VectorXd::Zero(n_modes);
  est.as_std_db = Eigen::VectorXd::Zero(n_modes);
  const double denom = double(reports.size() - 1);
  for (std::size_t l = 0; l < n_modes; ++l) {
    double s_mean = 0.0, as_mean = 0.0;
    for (const auto& r : reports) {
      s_mean += r.modes[l].s_db;
      as_mean += r.modes[l].as_db;
    }
    s_mean /= reports.size();
    as_mean /= reports.size();
    double s_var = 0.0, as_var = 0.0;
    for (const auto& r : reports) {
      s_var += (r.modes[l].s_db - s_mean) * (r.modes[l].s_db - s_mean);
      as_var += (r.modes[l].as_db - as_mean) * (r.modes[l].as_db - as_mean);
    }
    est.s_std_db[l] = std::sqrt(s_var / denom);
    est.as_std_db[l] = std::sqrt(as_var / denom);
  }
  return est;
}

SqueezingReport pool_reports(const std::vector<SqueezingReport>& reports) {
  if (reports.empty()) throw DataError("pool_reports: no reports");
  SqueezingReport pooled = reports.front();
  const std::size_t n_modes = pooled.modes.size();
  for (std::size_t l = 0; l < n_modes; ++l) {
    double s = 0.0, as = 0.0;
    bool measurable = true;
    for (const auto& r : reports) {
      s += r.modes[l].s_db;
      as += r.modes[l].as_db;
      measurable = measurable && r.modes[l].measurable;
    }
    pooled.modes[l].s_db = s / reports.size();
    pooled.modes[l].as_db = as / reports.size();
    pooled.modes[l].measurable = measurable;
  }
  if (reports.size() >= 2) {
    const UncertaintyEstimate est = estimate_uncertainty(reports);
    for (std::size_t l = 0; l < n_modes; ++l) {
      pooled.modes[l].s_err_db = est.s_std_db[l];
      pooled.modes[l].as_err_db = est.as_std_db[l];
    }
  }
  return pooled;
}

TruthDeviation compare_to_truth(const SqueezingReport& report,
                                const std::vector<ModeTruth>& truth, int n_compare) {
  const std::size_t n = std::min(report.modes.size(), truth.size());
  if (n == 0) throw DimensionError("compare_to_truth: empty inputs");
  TruthDeviation dev;
  dev.ds_db = Eigen::VectorXd::Zero(n);
  dev.das_db = Eigen::VectorXd::Zero(n);
  const std::size_t n_max =
      n_compare > 0 ? std::min<std::size_t>(n, n_compare) : n;
  for (std::size_t l = 0; l < n; ++l) {
    dev.ds_db[l] = report.modes[l].s_db - truth[l].s_db;
    dev.das_db[l] = report.modes[l].as_db - truth[l].as_db;
    if (l < n_max)
      dev.max_abs_db = std::max({dev.max_abs_db, std::abs(dev.ds_db[l]),
                                 std::abs(dev.das_db[l])});
  }
  return dev;
}

}  // namespace sqzlab
