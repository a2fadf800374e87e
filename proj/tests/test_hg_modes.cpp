#include <doctest.h>

#include <cmath>

#include "sqzlab/errors.hpp"
#include "sqzlab/hg_modes.hpp"

using namespace sqzlab;

namespace {
const AngularGrid kGrid = make_grid(-30e-3, 30e-3, 601);
}

TEST_CASE("make_grid spacing and bounds") {
  CHECK(kGrid.spacing() == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(kGrid.theta(0) == doctest::Approx(-30e-3));
  CHECK(kGrid.theta(600) == doctest::Approx(30e-3));

  const AngularGrid tiny = make_grid(0.0, 1.0, 2);
  CHECK(tiny.theta(0) == 0.0);
  CHECK(tiny.theta(1) == 1.0);

  CHECK_THROWS_AS(make_grid(1.0, 1.0, 10), ConfigError);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1), ConfigError);
}

TEST_CASE("hermite_gauss_basis normalization and parity") {
  const ModeBasis b = hermite_gauss_basis(kGrid, 2e-3, 10);
  CHECK(b.inner(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  // mode 1 is odd: vanishes at theta = 0 (center of the 601-point grid)
  CHECK(std::abs(b.modes(1, 300)) < 1e-10);

  // parity (-1)^m under theta -> -theta
  for (int m = 0; m < 10; ++m) {
    double worst = 0.0;
    for (int i = 0; i < kGrid.n_points; ++i) {
      const int j = kGrid.n_points - 1 - i;
      worst = std::max(worst, std::abs(b.modes(m, i) - b.parity[m] * b.modes(m, j)));
    }
    CHECK(worst < 1e-10);
  }

  CHECK(std::abs(b.inner(0, 2)) < 1e-8);

  // Gram matrix is the identity
  double worst = 0.0;
  for (int m = 0; m < 10; ++m)
    for (int n = 0; n < 10; ++n)
      worst = std::max(worst, std::abs(b.inner(m, n) - (m == n ? 1.0 : 0.0)));
  CHECK(worst < 1e-8);
}

TEST_CASE("hermite_gauss_basis rejects too-narrow grids") {
  const AngularGrid narrow = make_grid(-2e-3, 2e-3, 101);
  CHECK_THROWS_AS(hermite_gauss_basis(narrow, 2e-3, 10), ConfigError);
}

TEST_CASE("overlap of identical bases is the identity") {
  const ModeBasis b = hermite_gauss_basis(kGrid, 1.5e-3, 8);
  const OverlapMatrix g = overlap_matrix(b, b);
  CHECK((g.entries - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("ground-mode overlap matches the closed-form Gaussian integral") {
  const double s1 = 1.2e-3, s2 = 2.1e-3;
  const ModeBasis a = hermite_gauss_basis(kGrid, s1, 1);
  const ModeBasis b = hermite_gauss_basis(kGrid, s2, 1);
  const OverlapMatrix g = overlap_matrix(a, b);
  const double expected = std::sqrt(2.0 * s1 * s2 / (s1 * s1 + s2 * s2));
  CHECK(g.entries(0, 0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("opposite parity gives exactly zero overlap (checkerboard)") {
  const ModeBasis a = hermite_gauss_basis(kGrid, 1.2e-3, 10);
  const ModeBasis b = hermite_gauss_basis(kGrid, 1.8e-3, 10);
  const OverlapMatrix g = overlap_matrix(a, b);
  for (int l = 0; l < 10; ++l)
    for (int n = 0; n < 10; ++n)
      if ((l + n) % 2 == 1) CHECK(std::abs(g.entries(l, n)) < 1e-12);
}

TEST_CASE("overlap transpose symmetry") {
  const ModeBasis a = hermite_gauss_basis(kGrid, 1.2e-3, 6);
  const ModeBasis b = hermite_gauss_basis(kGrid, 1.8e-3, 9);
  const OverlapMatrix gab = overlap_matrix(a, b);
  const OverlapMatrix gba = overlap_matrix(b, a);
  CHECK((gab.entries - gba.entries.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("row norms approach 1 as the target basis grows") {
  const ModeBasis a = hermite_gauss_basis(kGrid, 1.2e-3, 4);
  double prev = 0.0;
  for (int n_target : {4, 8, 16, 24}) {
    const ModeBasis b = hermite_gauss_basis(kGrid, 1.8e-3, n_target);
    const double row0 = 1.0 - overlap_matrix(a, b).row_deficit[0];
    CHECK(row0 >= prev - 1e-12);
    prev = row0;
  }
  CHECK(prev > 1.0 - 1e-6);
}

TEST_CASE("overlap requires a shared grid") {
  const ModeBasis a = hermite_gauss_basis(kGrid, 1.2e-3, 3);
  const ModeBasis b = hermite_gauss_basis(make_grid(-20e-3, 20e-3, 401), 1.2e-3, 3);
  CHECK_THROWS_AS(overlap_matrix(a, b), DimensionError);
}

TEST_CASE("width_schedule") {
  CHECK(width_schedule(5.0, 2e-3, 0.0) == 2e-3);
  CHECK(width_schedule(0.0, 2e-3, 0.7) == 2e-3);
  CHECK(width_schedule(3.0, 1e-3, 1.0 / 3.0) == doctest::Approx(std::sqrt(2.0) * 1e-3));
  CHECK(width_schedule(2.0, 1e-3, 0.5) > width_schedule(1.0, 1e-3, 0.5));
  CHECK_THROWS_AS(width_schedule(-1.0, 1e-3, 0.5), ConfigError);
}
