#include <doctest.h>

#include <cmath>

#include "sqzlab/errors.hpp"
#include "sqzlab/pipeline.hpp"
#include "sqzlab/recon.hpp"

using namespace sqzlab;

namespace {

const AngularGrid kGrid = make_grid(-15e-3, 15e-3, 301);

/// Forward-construct the normalized covariance (squared mode kernel) from
/// known weights and modes; the independent oracle for decompose(). The
/// round trip is exact only when the kernel itself is non-negative, which
/// holds for thermal-like geometric weight ladders deep enough that the
/// truncation tail is negligible (the kernel tends to a positive Gaussian).
CovarianceMap analytic_covariance(const Eigen::VectorXd& weights, const ModeBasis& basis) {
  const int np = basis.grid.n_points;
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(np, np);
  for (int m = 0; m < weights.size(); ++m)
    kernel += weights[m] * basis.modes.row(m).transpose() * basis.modes.row(m);
  CovarianceMap cm;
  cm.cov = kernel.cwiseProduct(kernel);
  cm.dtheta = basis.grid.spacing();
  cm.n_frames_used = 0;
  cm.normalized = false;
  return normalize_covariance(cm);
}

FrameEnsemble tiny_ensemble(std::initializer_list<std::initializer_list<double>> rows) {
  FrameEnsemble ens;
  ens.grid = make_grid(0.0, 1.0, static_cast<int>(rows.begin()->size()));
  ens.frames.resize(static_cast<int>(rows.size()), ens.grid.n_points);
  int r = 0;
  for (const auto& row : rows) {
    int c = 0;
    for (double v : row) ens.frames(r, c++) = v;
    ++r;
  }
  ens.config.n_frames = ens.n_frames();
  return ens;
}

}  // namespace

TEST_CASE("estimate_covariance basics") {
  CHECK_THROWS_AS(estimate_covariance(tiny_ensemble({{1.0, 2.0}})), DataError);

  const CovarianceMap zero = estimate_covariance(tiny_ensemble({{1.0, 2.0}, {1.0, 2.0}}));
  CHECK(zero.cov.cwiseAbs().maxCoeff() == 0.0);

  const CovarianceMap cm = estimate_covariance(tiny_ensemble({{1.0, 0.0}, {0.0, 1.0}}));
  CHECK(cm.cov(0, 0) == doctest::Approx(0.5));
  CHECK(cm.cov(0, 1) == doctest::Approx(-0.5));
  CHECK(cm.cov(1, 1) == doctest::Approx(0.5));
  CHECK((cm.cov - cm.cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(cm.n_frames_used == 2);
}

TEST_CASE("covariance of a synthetic ensemble matches the analytic form") {
  ExperimentConfig cfg;
  cfg.n_points = 301;
  cfg.theta_min = -15e-3;
  cfg.theta_max = 15e-3;
  cfg.n_simulate = 4;
  cfg.n_keep = 4;
  cfg.n_report = 4;
  cfg.n_frames = 100000;
  cfg.eta_detect = 1.0;
  const InterferometerModel model = build_model(cfg, Fringe::AmplifiedVacuum);
  const FrameEnsemble ens =
      acquire_ensemble(model, make_acquisition(cfg, Fringe::AmplifiedVacuum, 17));

  const Eigen::VectorXd n_mean = mode_photon_numbers(model);
  const double dt = ens.grid.spacing();
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(cfg.n_points, cfg.n_points);
  for (int n = 0; n < n_mean.size(); ++n)
    kernel += n_mean[n] * model.amplifier.basis.modes.row(n).transpose() *
              model.amplifier.basis.modes.row(n);
  const Eigen::MatrixXd analytic = 2.0 * dt * dt * kernel.cwiseProduct(kernel);

  const CovarianceMap cm = estimate_covariance(ens);
  CHECK((cm.cov - analytic).norm() / analytic.norm() < 0.02);
}

TEST_CASE("normalize_covariance") {
  const CovarianceMap cm = estimate_covariance(tiny_ensemble({{1.0, 0.0}, {0.0, 3.0}}));
  const CovarianceMap n1 = normalize_covariance(cm);
  CHECK(n1.double_sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(n1.normalized);

  CovarianceMap scaled = cm;
  scaled.cov *= 7.0;
  const CovarianceMap n2 = normalize_covariance(scaled);
  CHECK((n1.cov - n2.cov).cwiseAbs().maxCoeff() < 1e-14);

  CovarianceMap zero = cm;
  zero.cov.setZero();
  CHECK_THROWS_AS(normalize_covariance(zero), DegenerateDataError);
}

TEST_CASE("decompose round-trips the analytic covariance") {
  const AngularGrid grid = make_grid(-25e-3, 25e-3, 1001);
  const int n_modes = 28, n_keep = 8;
  const ModeBasis basis = hermite_gauss_basis(grid, 1.5e-3, n_modes);
  Eigen::VectorXd weights(n_modes);
  for (int m = 0; m < n_modes; ++m) weights[m] = std::pow(0.4, m);
  weights /= weights.sum();
  const CovarianceMap cm = analytic_covariance(weights, basis);
  const ModeReconstruction rec = decompose(cm, n_keep);

  // decompose renormalizes after truncation; match that here
  const Eigen::VectorXd expected = weights.head(n_keep) / weights.head(n_keep).sum();
  for (int m = 0; m < n_keep; ++m) {
    CHECK(std::abs(rec.weights[m] - expected[m]) < 1e-9);
    const double ov = std::abs(rec.modes.row(m).dot(basis.modes.row(m)) * rec.dtheta);
    CHECK(ov > 1.0 - 1e-9);
  }
  CHECK(rec.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rec.residual < 1e-3);
  CHECK(rec.clamped_mass == 0.0);

  // reconstructed modes are orthonormal under the quadrature
  for (int a = 0; a < n_keep; ++a)
    for (int b = 0; b < n_keep; ++b)
      CHECK(rec.modes.row(a).dot(rec.modes.row(b)) * rec.dtheta ==
            doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-6));
}

TEST_CASE("decompose of a rank-1 covariance") {
  const ModeBasis basis = hermite_gauss_basis(kGrid, 1.5e-3, 1);
  Eigen::VectorXd w(1);
  w << 1.0;
  const ModeReconstruction rec = decompose(analytic_covariance(w, basis), 1);
  CHECK(rec.weights[0] == doctest::Approx(1.0));
  CHECK(std::abs(rec.modes.row(0).dot(basis.modes.row(0)) * rec.dtheta) > 1.0 - 1e-9);
}

TEST_CASE("decompose requires normalized input and valid n_keep") {
  const ModeBasis basis = hermite_gauss_basis(kGrid, 1.5e-3, 2);
  Eigen::VectorXd w(2);
  w << 0.7, 0.3;
  CovarianceMap cm = analytic_covariance(w, basis);
  CHECK_THROWS_AS(decompose(cm, 0), ConfigError);
  cm.normalized = false;
  CHECK_THROWS_AS(decompose(cm, 2), DataError);
}

TEST_CASE("truncation residual is non-increasing in n_keep") {
  const ModeBasis basis = hermite_gauss_basis(kGrid, 1.5e-3, 5);
  Eigen::VectorXd w(5);
  w << 0.4, 0.25, 0.18, 0.1, 0.07;
  const CovarianceMap cm = analytic_covariance(w, basis);
  double prev = 1.0;
  for (int keep = 1; keep <= 5; ++keep) {
    const double res = decompose(cm, keep).residual;
    CHECK(res <= prev + 1e-12);
    prev = res;
  }
}

TEST_CASE("scale invariance of the full decomposition") {
  const ModeBasis basis = hermite_gauss_basis(kGrid, 1.5e-3, 3);
  Eigen::VectorXd w(3);
  w << 0.5, 0.35, 0.15;
  const int np = basis.grid.n_points;
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(np, np);
  for (int m = 0; m < 3; ++m)
    kernel += w[m] * basis.modes.row(m).transpose() * basis.modes.row(m);

  CovarianceMap raw;
  raw.cov = kernel.cwiseProduct(kernel);
  raw.dtheta = basis.grid.spacing();
  CovarianceMap scaled = raw;
  scaled.cov *= 123.456;

  const ModeReconstruction a = decompose(normalize_covariance(raw), 3);
  const ModeReconstruction b = decompose(normalize_covariance(scaled), 3);
  CHECK((a.weights - b.weights).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mode_populations") {
  ModeReconstruction rec;
  rec.weights = Eigen::VectorXd(2);
  rec.weights << 0.5, 0.5;
  const Eigen::VectorXd pop = mode_populations(rec, 10.0);
  CHECK(pop[0] == doctest::Approx(5.0));
  CHECK(pop[1] == doctest::Approx(5.0));

  rec.weights = Eigen::VectorXd::Ones(1);
  CHECK(mode_populations(rec, 100.0)[0] == doctest::Approx(100.0));
  CHECK_THROWS_AS(mode_populations(rec, -1.0), DataError);
}

TEST_CASE("match_sign_and_pair aligns to the reference basis") {
  const ModeBasis basis = hermite_gauss_basis(kGrid, 1.5e-3, 4);
  ModeReconstruction rec;
  rec.n_kept = 4;
  rec.dtheta = kGrid.spacing();
  rec.weights = Eigen::VectorXd(4);
  rec.weights << 0.4, 0.3, 0.2, 0.1;
  rec.modes = basis.modes;

  // scramble signs and swap a pair; alignment must undo both
  rec.modes.row(1) *= -1.0;
  rec.modes.row(3) *= -1.0;
  rec.modes.row(2).swap(rec.modes.row(3));
  rec.weights.row(2).swap(rec.weights.row(3));

  ModeAlignment align;
  const ModeReconstruction out = match_sign_and_pair(rec, basis, &align);
  Eigen::VectorXd w(4);
  w << 0.4, 0.3, 0.2, 0.1;
  for (int m = 0; m < 4; ++m) {
    CHECK(align.overlaps[m] > 0.999);
    CHECK(out.modes.row(m).dot(basis.modes.row(m)) * out.dtheta > 0.999);
    CHECK(out.weights[m] == doctest::Approx(w[m]).epsilon(1e-9));
  }
  CHECK(align.assignment[2] == 3);
  CHECK(align.assignment[3] == 2);
  CHECK_FALSE(align.ambiguous);
}

TEST_CASE("degenerate weights are flagged as ambiguous") {
  const ModeBasis basis = hermite_gauss_basis(kGrid, 1.5e-3, 2);
  // a 45-degree rotation of a degenerate pair is an equally valid
  // decomposition; the pairing cannot prefer either reference mode
  ModeReconstruction rec;
  rec.n_kept = 2;
  rec.dtheta = kGrid.spacing();
  rec.weights = Eigen::VectorXd::Constant(2, 0.5);
  rec.modes.resize(2, kGrid.n_points);
  const double c = std::cos(M_PI / 4), s = std::sin(M_PI / 4);
  rec.modes.row(0) = c * basis.modes.row(0) + s * basis.modes.row(1);
  rec.modes.row(1) = -s * basis.modes.row(0) + c * basis.modes.row(1);

  ModeAlignment align;
  match_sign_and_pair(rec, basis, &align);
  CHECK(align.ambiguous);
}

TEST_CASE("weight error shrinks with the number of frames") {
  ExperimentConfig cfg;
  cfg.n_points = 301;
  cfg.theta_min = -15e-3;
  cfg.theta_max = 15e-3;
  cfg.n_simulate = 6;
  cfg.n_keep = 6;
  cfg.n_report = 4;
  cfg.eta_detect = 1.0;
  const InterferometerModel model = build_model(cfg, Fringe::Bright);

  // reference weights from a very large run
  cfg.n_frames = 40000;
  const FrameEnsemble big = acquire_ensemble(model, make_acquisition(cfg, Fringe::Bright, 1));
  const Eigen::VectorXd ref =
      reconstruct_fringe(big, model, cfg.n_keep).summary.weights;

  double prev_err = 1e9;
  for (int nf : {250, 4000}) {
    cfg.n_frames = nf;
    double err = 0.0;
    const int n_seeds = 4;
    for (std::uint64_t seed = 100; seed < 100 + n_seeds; ++seed) {
      const FrameEnsemble ens =
          acquire_ensemble(model, make_acquisition(cfg, Fringe::Bright, seed));
      const Eigen::VectorXd w = reconstruct_fringe(ens, model, cfg.n_keep).summary.weights;
      err += (w[0] - ref[0]) * (w[0] - ref[0]);
    }
    err = std::sqrt(err / n_seeds);
    CHECK(err < prev_err);
    prev_err = err;
  }
}
