#include "sqzlab/hg_modes.hpp"

#include <cmath>
#include <fstream>

#include "sqzlab/errors.hpp"

namespace sqzlab {

Eigen::VectorXd AngularGrid::thetas() const {
  Eigen::VectorXd t(n_points);
  for (int i = 0; i < n_points; ++i) t[i] = theta(i);
  return t;
}

AngularGrid make_grid(double theta_min, double theta_max, int n_points) {
  if (!(theta_min < theta_max))
    throw ConfigError("make_grid: theta_min must be smaller than theta_max");
  if (n_points < 2) throw ConfigError("make_grid: n_points must be at least 2");
  return AngularGrid{theta_min, theta_max, n_points};
}

Eigen::VectorXd ModeBasis::central_values() const {
  int i0 = 0;
  double best = std::abs(grid.theta(0));
  for (int i = 1; i < grid.n_points; ++i) {
    double a = std::abs(grid.theta(i));
    if (a < best) {
      best = a;
      i0 = i;
    }
  }
  return modes.col(i0);
}

ModeBasis hermite_gauss_basis(const AngularGrid& grid, double sigma, int n_modes) {
  if (sigma <= 0.0) throw ConfigError("hermite_gauss_basis: sigma must be positive");
  if (n_modes < 1) throw ConfigError("hermite_gauss_basis: n_modes must be at least 1");

  const int np = grid.n_points;
  const double dtheta = grid.spacing();
  Eigen::MatrixXd modes(n_modes, np);

  // Sample phi_m(x) = H_m(x) exp(-x^2/2) via the stable recurrence
  // phi_{m+1} = sqrt(2/(m+1)) x phi_m - sqrt(m/(m+1)) phi_{m-1}
  // with x = theta/sigma. Absolute scale is irrelevant, normalization follows.
  for (int i = 0; i < np; ++i) {
    const double x = grid.theta(i) / sigma;
    double prev = 0.0;
    double cur = std::exp(-0.5 * x * x);
    for (int m = 0; m < n_modes; ++m) {
      modes(m, i) = cur;
      const double next =
          std::sqrt(2.0 / (m + 1)) * x * cur - std::sqrt(double(m) / (m + 1)) * prev;
      prev = cur;
      cur = next;
    }
  }

  // Boundary leakage check: the highest mode must have decayed at the edges.
  {
    const int m = n_modes - 1;
    Eigen::VectorXd row = modes.row(m);
    const double peak = row.cwiseAbs().maxCoeff();
    const double edge = std::max(std::abs(row[0]), std::abs(row[np - 1]));
    if (peak <= 0.0 || edge / peak > 1e-6)
      throw ConfigError("hermite_gauss_basis: grid too narrow for mode order " +
                        std::to_string(m) + " (boundary leakage " +
                        std::to_string(edge / peak) + ")");
  }

  // Gram-Schmidt under the grid quadrature removes discretization leakage.
  for (int m = 0; m < n_modes; ++m) {
    for (int k = 0; k < m; ++k) {
      const double c = modes.row(m).dot(modes.row(k)) * dtheta;
      modes.row(m) -= c * modes.row(k);
    }
    const double nrm = std::sqrt(modes.row(m).squaredNorm() * dtheta);
    if (nrm <= 0.0)
      throw ConfigError("hermite_gauss_basis: degenerate mode after orthogonalization");
    modes.row(m) /= nrm;
  }

  ModeBasis basis;
  basis.grid = grid;
  basis.modes = std::move(modes);
  basis.sigma = sigma;
  basis.parity.resize(n_modes);
  for (int m = 0; m < n_modes; ++m) basis.parity[m] = (m % 2 == 0) ? +1 : -1;
  return basis;
}

OverlapMatrix OverlapMatrix::identity(int n) {
  OverlapMatrix g;
  g.entries = Eigen::MatrixXd::Identity(n, n);
  g.row_deficit = Eigen::VectorXd::Zero(n);
  g.col_deficit = Eigen::VectorXd::Zero(n);
  return g;
}

OverlapMatrix overlap_matrix(const ModeBasis& source, const ModeBasis& target) {
  if (!(source.grid == target.grid))
    throw DimensionError("overlap_matrix: bases live on different grids");

  OverlapMatrix g;
  g.entries = source.modes * target.modes.transpose() * source.grid.spacing();
  const Eigen::MatrixXd sq = g.entries.cwiseProduct(g.entries);
  g.row_deficit = Eigen::VectorXd::Ones(sq.rows()) - sq.rowwise().sum();
  g.col_deficit = Eigen::VectorXd::Ones(sq.cols()) - sq.colwise().sum().transpose();
  return g;
}

double width_schedule(double gain, double sigma0, double c) {
  if (gain < 0.0 || sigma0 <= 0.0 || c < 0.0)
    throw ConfigError("width_schedule: need G >= 0, sigma0 > 0, c >= 0");
  return sigma0 * std::sqrt(1.0 + c * gain);
}

void export_matrix_csv(const Eigen::MatrixXd& m, const std::string& path,
                       const std::string& header) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out.precision(17);
  if (!header.empty()) out << "# " << header << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ",";
      out << m(r, c);
    }
    out << "\n";
  }
}

void export_basis_csv(const ModeBasis& basis, const std::string& path) {
  export_matrix_csv(basis.modes, path,
                    "theta_min=" + std::to_string(basis.grid.theta_min) +
                        " theta_max=" + std::to_string(basis.grid.theta_max) +
                        " n_points=" + std::to_string(basis.grid.n_points) +
                        " sigma=" + std::to_string(basis.sigma));
}

}  // namespace sqzlab
