#include "sqzlab/pipeline.hpp"

#include <cmath>

#include "sqzlab/errors.hpp"

namespace sqzlab {

namespace {

StageParams make_stage(const ExperimentConfig& cfg, const AngularGrid& grid,
                       double gain, double sigma0, double width_c, double decay_q) {
  StageParams st;
  st.gain = gain;
  const double sigma = width_schedule(gain, sigma0, width_c);
  st.basis = hermite_gauss_basis(grid, sigma, cfg.n_simulate);
  const double r0 = calibrate_r0(gain, decay_q, st.basis);
  st.spectrum = SchmidtSpectrum::geometric(r0, decay_q, cfg.n_simulate);
  return st;
}

}  // namespace

InterferometerModel build_model(const ExperimentConfig& cfg, Fringe fringe) {
  cfg.validate();
  const AngularGrid grid = make_grid(cfg.theta_min, cfg.theta_max, cfg.n_points);

  InterferometerModel m;
  m.squeezer = make_stage(cfg, grid, cfg.squeezer_gain_stripe, cfg.squeezer_sigma0,
                          cfg.squeezer_width_c, cfg.squeezer_decay_q);
  m.amplifier = make_stage(cfg, grid, cfg.amplifier_gain, cfg.amplifier_sigma0,
                           cfg.amplifier_width_c, cfg.amplifier_decay_q);
  m.g = overlap_matrix(m.squeezer.basis, m.amplifier.basis);
  // The interferometer output modes are taken equal to the amplifier output
  // modes, so h is the identity unless a sensitivity study keeps the full
  // numerically-computed overlap.
  m.h = OverlapMatrix::identity(cfg.n_simulate);
  m.h_is_identity = !cfg.use_full_h;
  if (cfg.use_full_h) m.h = overlap_matrix(m.amplifier.basis, m.amplifier.basis);
  m.loss_eta = cfg.eta_pre;
  m.fringe = fringe;
  return m;
}

InterferometerModel build_collinear_model(const ExperimentConfig& cfg, Fringe fringe) {
  InterferometerModel m;
  const AngularGrid grid = make_grid(cfg.theta_min, cfg.theta_max, cfg.n_points);
  const double sigma_sq =
      width_schedule(cfg.squeezer_gain, cfg.squeezer_sigma0, cfg.squeezer_width_c);
  const double sigma_amp =
      width_schedule(cfg.amplifier_gain, cfg.amplifier_sigma0, cfg.amplifier_width_c);

  m.squeezer.gain = cfg.squeezer_gain;
  m.squeezer.basis = hermite_gauss_basis(grid, sigma_sq, 1);
  m.squeezer.spectrum = SchmidtSpectrum::geometric(cfg.squeezer_gain, 1.0, 1);
  m.amplifier.gain = cfg.amplifier_gain;
  m.amplifier.basis = hermite_gauss_basis(grid, sigma_amp, 1);
  m.amplifier.spectrum = SchmidtSpectrum::geometric(cfg.amplifier_gain, 1.0, 1);
  m.g = OverlapMatrix::identity(1);
  m.h = OverlapMatrix::identity(1);
  m.loss_eta = cfg.eta_pre;
  m.fringe = fringe;
  return m;
}

AcquisitionConfig make_acquisition(const ExperimentConfig& cfg, Fringe fringe,
                                   std::uint64_t seed) {
  AcquisitionConfig acq;
  acq.n_frames = cfg.n_frames;
  acq.fringe = fringe;
  acq.detection_eta = cfg.eta_detect;
  acq.pump_rel_std = fringe == Fringe::AmplifiedVacuum ? 0.0 : cfg.pump_rel_std;
  acq.seed = seed;
  acq.shot_noise = cfg.shot_noise;
  return acq;
}

FringeReconstruction reconstruct_fringe(const FrameEnsemble& ensemble,
                                        const InterferometerModel& model, int n_keep) {
  const CovarianceMap cov = normalize_covariance(estimate_covariance(ensemble));
  const ModeReconstruction raw = decompose(cov, n_keep);

  FringeReconstruction out;
  out.aligned = match_sign_and_pair(raw, model.amplifier.basis, &out.alignment);
  // The weight ladder is consumed in eigenvalue order: the analytic spectra
  // are strictly descending in mode index, so the sorted weights already sit
  // at the right indices, and noisy shape pairing cannot scramble the tail.
  out.summary.weights = raw.weights;
  out.summary.total_mean = ensemble.total_mean();
  return out;
}

namespace {

TripleDataset measure_triple(const ExperimentConfig& cfg, std::uint64_t seed) {
  TripleDataset triple;
  Eigen::MatrixXd g;
  for (Fringe fr : {Fringe::Bright, Fringe::Dark, Fringe::AmplifiedVacuum}) {
    const InterferometerModel model = build_model(cfg, fr);
    const FrameEnsemble ens = acquire_ensemble(model, make_acquisition(cfg, fr, seed));
    const FringeReconstruction rec = reconstruct_fringe(ens, model, cfg.n_keep);
    switch (fr) {
      case Fringe::Bright: triple.bright = rec.summary; break;
      case Fringe::Dark: triple.dark = rec.summary; break;
      case Fringe::AmplifiedVacuum: triple.vacuum = rec.summary; break;
    }
    g = model.g.entries;
  }
  for (FringeSummary* s : {&triple.bright, &triple.dark, &triple.vacuum}) {
    const double sum = s->weights.sum();
    if (!(sum > 0.0)) throw DegenerateDataError("measure_triple: empty reconstruction");
    s->weights /= sum;
  }
  // Only the kept interferometer modes enter the ratio sums.
  triple.g = g.leftCols(cfg.n_keep);
  return triple;
}

}  // namespace

SqueezingReport analyze_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  return extract_squeezing(measure_triple(cfg, seed), cfg.vacuum_floor);
}

FullAnalysis run_full_analysis(const ExperimentConfig& cfg) {
  FullAnalysis fa;

  // Per-seed triples feed the uncertainty estimate; the pooled result comes
  // from the seed-averaged covariance of each fringe. Averaging at the
  // covariance level is equivalent to one run with all the frames, so the
  // square-root noise-rectification bias shrinks with the total statistics
  // instead of being frozen at the single-seed level.
  const std::size_t n_seeds = cfg.seeds.size();
  std::vector<TripleDataset> triples(n_seeds);
  TripleDataset pooled_triple;
  for (Fringe fr : {Fringe::Bright, Fringe::Dark, Fringe::AmplifiedVacuum}) {
    const InterferometerModel model = build_model(cfg, fr);
    Eigen::MatrixXd cov_sum;
    double dtheta = 0.0, total_mean_sum = 0.0;
    for (std::size_t i = 0; i < n_seeds; ++i) {
      const FrameEnsemble ens =
          acquire_ensemble(model, make_acquisition(cfg, fr, cfg.seeds[i]));
      const CovarianceMap cm = estimate_covariance(ens);
      if (cov_sum.size() == 0) cov_sum = Eigen::MatrixXd::Zero(cm.cov.rows(), cm.cov.cols());
      cov_sum += cm.cov;
      dtheta = cm.dtheta;
      total_mean_sum += ens.total_mean();

      const FringeReconstruction rec = reconstruct_fringe(ens, model, cfg.n_keep);
      FringeSummary s = rec.summary;
      s.weights /= s.weights.sum();
      switch (fr) {
        case Fringe::Bright: triples[i].bright = s; break;
        case Fringe::Dark: triples[i].dark = s; break;
        case Fringe::AmplifiedVacuum: triples[i].vacuum = s; break;
      }
      triples[i].g = model.g.entries.leftCols(cfg.n_keep);
    }

    CovarianceMap pooled_cov;
    pooled_cov.cov = cov_sum / double(n_seeds);
    pooled_cov.dtheta = dtheta;
    pooled_cov.n_frames_used = static_cast<int>(n_seeds) * cfg.n_frames;
    const ModeReconstruction rec = decompose(normalize_covariance(pooled_cov), cfg.n_keep);
    FringeSummary s;
    s.weights = rec.weights;
    s.total_mean = total_mean_sum / double(n_seeds);
    switch (fr) {
      case Fringe::Bright: pooled_triple.bright = s; break;
      case Fringe::Dark: pooled_triple.dark = s; break;
      case Fringe::AmplifiedVacuum: pooled_triple.vacuum = s; break;
    }
    pooled_triple.g = model.g.entries.leftCols(cfg.n_keep);
  }

  for (const TripleDataset& t : triples)
    fa.per_seed.push_back(extract_squeezing(t, cfg.vacuum_floor));
  fa.pooled = extract_squeezing(pooled_triple, cfg.vacuum_floor);
  if (fa.per_seed.size() >= 2) {
    const UncertaintyEstimate unc = estimate_uncertainty(fa.per_seed);
    for (std::size_t l = 0; l < fa.pooled.modes.size(); ++l) {
      fa.pooled.modes[l].s_err_db = unc.s_std_db[static_cast<Eigen::Index>(l)];
      fa.pooled.modes[l].as_err_db = unc.as_std_db[static_cast<Eigen::Index>(l)];
    }
  }

  const InterferometerModel truth_model = build_model(cfg, Fringe::Bright);
  fa.truth = ground_truth_squeezing(truth_model);

  const InterferometerModel collinear = build_collinear_model(cfg, Fringe::Bright);
  const QuadratureState sv = squeeze(vacuum_state(1), collinear.squeezer.spectrum);
  std::vector<double> phases(cfg.n_phases);
  for (int i = 0; i < cfg.n_phases; ++i) phases[i] = M_PI * i / (cfg.n_phases - 1);
  fa.collinear_scan = phase_scan(collinear, sv, phases);
  return fa;
}

}  // namespace sqzlab
