#include <doctest.h>

#include <cmath>
#include <random>

#include "sqzlab/errors.hpp"
#include "sqzlab/pipeline.hpp"
#include "sqzlab/squeezing.hpp"

using namespace sqzlab;

namespace {

TripleDataset uniform_triple(int n) {
  TripleDataset t;
  t.bright.weights = t.dark.weights = t.vacuum.weights =
      Eigen::VectorXd::Constant(n, 1.0 / n);
  t.bright.total_mean = t.dark.total_mean = t.vacuum.total_mean = 100.0;
  t.g = Eigen::MatrixXd::Identity(n, n);
  return t;
}

}  // namespace

TEST_CASE("vacuum in, vacuum out: 0 dB everywhere") {
  const SqueezingReport rep = extract_squeezing(uniform_triple(4));
  for (const auto& m : rep.modes) {
    CHECK(m.measurable);
    CHECK(m.s_db == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(m.as_db == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("single mode analytic inputs reproduce the loss formula") {
  // r = 1.05, eta = 0.85; high-gain photon numbers feed the ratio formula
  const double r = 1.05, eta = 0.85, r2 = 4.0;
  const double var_q = eta * std::exp(2.0 * r) / 4.0 + (1.0 - eta) * 0.25;
  const double var_p = eta * std::exp(-2.0 * r) / 4.0 + (1.0 - eta) * 0.25;
  const double g2 = std::exp(2.0 * r2);

  TripleDataset t;
  t.bright.weights = t.dark.weights = t.vacuum.weights = Eigen::VectorXd::Ones(1);
  t.bright.total_mean = g2 * var_q;
  t.dark.total_mean = g2 * var_p;
  t.vacuum.total_mean = g2 * 0.25;
  t.g = Eigen::MatrixXd::Identity(1, 1);

  const SqueezingReport rep = extract_squeezing(t);
  CHECK(rep.modes[0].s_db == doctest::Approx(-5.95).epsilon(1e-2));
  CHECK(rep.modes[0].as_db == doctest::Approx(8.5).epsilon(1e-2));
}

TEST_CASE("intensity scale invariance") {
  TripleDataset t = uniform_triple(3);
  t.bright.total_mean = 500.0;
  t.dark.total_mean = 20.0;
  t.vacuum.total_mean = 80.0;
  const SqueezingReport a = extract_squeezing(t);
  t.bright.total_mean *= 3.5;
  t.dark.total_mean *= 3.5;
  t.vacuum.total_mean *= 3.5;
  const SqueezingReport b = extract_squeezing(t);
  for (std::size_t l = 0; l < a.modes.size(); ++l) {
    CHECK(a.modes[l].s_db == doctest::Approx(b.modes[l].s_db).epsilon(1e-12));
    CHECK(a.modes[l].as_db == doctest::Approx(b.modes[l].as_db).epsilon(1e-12));
  }
}

TEST_CASE("identity-g reduction to per-mode ratios") {
  TripleDataset t = uniform_triple(2);
  t.bright.weights << 0.7, 0.3;
  t.dark.weights << 0.4, 0.6;
  t.vacuum.weights << 0.5, 0.5;
  t.bright.total_mean = 1000.0;
  t.dark.total_mean = 50.0;
  t.vacuum.total_mean = 200.0;
  const SqueezingReport rep = extract_squeezing(t);
  for (int l = 0; l < 2; ++l) {
    const double as = 10.0 * std::log10((t.bright.weights[l] * 1000.0) /
                                        (t.vacuum.weights[l] * 200.0));
    const double s = 10.0 * std::log10((t.dark.weights[l] * 50.0) /
                                       (t.vacuum.weights[l] * 200.0));
    CHECK(rep.modes[l].as_db == doctest::Approx(as).epsilon(1e-12));
    CHECK(rep.modes[l].s_db == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("gauge invariance under consistent permutation") {
  TripleDataset t = uniform_triple(3);
  t.bright.weights << 0.5, 0.3, 0.2;
  t.dark.weights << 0.2, 0.5, 0.3;
  t.vacuum.weights << 0.4, 0.4, 0.2;
  std::mt19937 gen(5);
  t.g = Eigen::MatrixXd::Random(3, 3).cwiseAbs();
  const SqueezingReport a = extract_squeezing(t);

  // permute interferometer modes (columns of g and all weights) consistently
  const std::vector<int> perm = {2, 0, 1};
  TripleDataset p = t;
  for (int n = 0; n < 3; ++n) {
    p.bright.weights[n] = t.bright.weights[perm[n]];
    p.dark.weights[n] = t.dark.weights[perm[n]];
    p.vacuum.weights[n] = t.vacuum.weights[perm[n]];
    p.g.col(n) = t.g.col(perm[n]);
  }
  const SqueezingReport b = extract_squeezing(p);
  for (std::size_t l = 0; l < a.modes.size(); ++l) {
    CHECK(a.modes[l].s_db == doctest::Approx(b.modes[l].s_db).epsilon(1e-12));
    CHECK(a.modes[l].as_db == doctest::Approx(b.modes[l].as_db).epsilon(1e-12));
  }
}

TEST_CASE("vacuum floor flags unmeasurable modes") {
  TripleDataset t = uniform_triple(2);
  t.vacuum.weights << 1.0 - 1e-9, 1e-9;
  const SqueezingReport rep = extract_squeezing(t, 1e-6);
  CHECK(rep.modes[0].measurable);
  // squeezer row 1 only couples to interferometer mode 1 (g identity), which
  // fell below the floor
  CHECK_FALSE(rep.modes[1].measurable);
  CHECK(rep.row_norm_deficit[1] == doctest::Approx(1.0));
}

TEST_CASE("mismatched truncation raises") {
  TripleDataset t = uniform_triple(3);
  t.dark.weights = Eigen::VectorXd::Constant(4, 0.25);
  CHECK_THROWS_AS(extract_squeezing(t), DimensionError);
}

TEST_CASE("estimate_uncertainty") {
  const SqueezingReport rep = extract_squeezing(uniform_triple(3));
  CHECK_THROWS_AS(estimate_uncertainty({rep}), DataError);

  const UncertaintyEstimate zero = estimate_uncertainty({rep, rep, rep});
  CHECK(zero.s_std_db.cwiseAbs().maxCoeff() == 0.0);
  CHECK(zero.as_std_db.cwiseAbs().maxCoeff() == 0.0);

  SqueezingReport shifted = rep;
  for (auto& m : shifted.modes) {
    m.s_db += 1.0;
    m.as_db += 2.0;
  }
  const UncertaintyEstimate est = estimate_uncertainty({rep, shifted});
  CHECK(est.s_std_db[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(est.as_std_db[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("compare_to_truth") {
  const SqueezingReport rep = extract_squeezing(uniform_triple(2));
  std::vector<ModeTruth> truth(2);
  const TruthDeviation zero = compare_to_truth(rep, truth);
  CHECK(zero.max_abs_db == doctest::Approx(0.0));

  truth[1].s_db = -3.0;
  const TruthDeviation dev = compare_to_truth(rep, truth);
  CHECK(dev.ds_db[1] == doctest::Approx(3.0));
  CHECK(dev.max_abs_db == doctest::Approx(3.0));

  const TruthDeviation first_only = compare_to_truth(rep, truth, 1);
  CHECK(first_only.max_abs_db == doctest::Approx(0.0));
}

TEST_CASE("noise-free analytic weights reproduce the ground truth") {
  // Propagate analytically, feed the exact high-gain photon numbers through
  // the ratio formula, and compare with ground_truth_squeezing. The ratio
  // formula drops the correlations between different output modes, so a
  // residual mixing bias remains whenever the two stages' mode widths differ
  // (it vanishes exactly for identity overlap, checked above). At the default
  // width schedule the measured bias is ~0.14 dB on the first mode and
  // ~0.53 dB at worst over the first eight; the bounds below pin that down.
  ExperimentConfig cfg;
  cfg.n_points = 301;
  cfg.theta_min = -15e-3;
  cfg.theta_max = 15e-3;
  cfg.n_simulate = 12;
  cfg.n_keep = 12;
  cfg.n_report = 8;

  TripleDataset t;
  Eigen::MatrixXd g;
  for (Fringe fr : {Fringe::Bright, Fringe::Dark, Fringe::AmplifiedVacuum}) {
    const InterferometerModel model = build_model(cfg, fr);
    const Eigen::VectorXd n_mean = mode_photon_numbers(model);
    FringeSummary s;
    s.total_mean = n_mean.sum();
    s.weights = n_mean / n_mean.sum();
    switch (fr) {
      case Fringe::Bright: t.bright = s; break;
      case Fringe::Dark: t.dark = s; break;
      case Fringe::AmplifiedVacuum: t.vacuum = s; break;
    }
    g = model.g.entries;
  }
  t.g = g;
  const SqueezingReport rep = extract_squeezing(t);
  const auto truth = ground_truth_squeezing(build_model(cfg, Fringe::Bright));
  const TruthDeviation dev = compare_to_truth(rep, truth, cfg.n_report);
  CHECK(dev.max_abs_db < 0.6);
  CHECK(std::abs(dev.ds_db[0]) < 0.2);
  CHECK(std::abs(dev.das_db[0]) < 0.2);
}
