#ifndef SQZLAB_HG_MODES_HPP
#define SQZLAB_HG_MODES_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sqzlab {

/// Uniform 1D grid over the far-field angle theta_x.
struct AngularGrid {
  double theta_min = 0.0;
  double theta_max = 0.0;
  int n_points = 0;

  double spacing() const { return (theta_max - theta_min) / (n_points - 1); }
  double theta(int i) const { return theta_min + i * spacing(); }
  Eigen::VectorXd thetas() const;

  bool operator==(const AngularGrid& other) const {
    return theta_min == other.theta_min && theta_max == other.theta_max &&
           n_points == other.n_points;
  }
};

AngularGrid make_grid(double theta_min, double theta_max, int n_points);

/// Orthonormal real mode functions sampled on a grid.
/// Row m holds u_m(theta); normalization is sum_i u_m(theta_i)^2 * dtheta = 1.
struct ModeBasis {
  AngularGrid grid;
  Eigen::MatrixXd modes;      // n_modes x n_points
  double sigma = 0.0;         // characteristic width (rad)
  std::vector<int> parity;    // +1 even, -1 odd under theta -> -theta

  int n_modes() const { return static_cast<int>(modes.rows()); }

  /// Grid-quadrature inner product of two sampled functions.
  double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& h) const {
    return f.dot(h) * grid.spacing();
  }
  double inner(int m, int n) const { return inner(modes.row(m), modes.row(n)); }

  /// Mode values at the grid point closest to theta = 0.
  Eigen::VectorXd central_values() const;
};

/// Physicists' Hermite-Gauss functions HG_m(theta/sigma), orthonormalized on
/// the grid by Gram-Schmidt so downstream decompositions see an exact
/// orthonormal set.
ModeBasis hermite_gauss_basis(const AngularGrid& grid, double sigma, int n_modes);

/// Overlap coefficients g_ln between two bases on the same grid.
struct OverlapMatrix {
  Eigen::MatrixXd entries;        // L x N, entries(l, n) = <v_l | w_n>
  Eigen::VectorXd row_deficit;    // 1 - sum_n g_ln^2 per row (truncation loss)
  Eigen::VectorXd col_deficit;    // 1 - sum_l g_ln^2 per column

  static OverlapMatrix identity(int n);
};

OverlapMatrix overlap_matrix(const ModeBasis& source, const ModeBasis& target);

/// Gain-dependent mode width, sigma(G) = sigma0 * sqrt(1 + c*G).
double width_schedule(double gain, double sigma0, double c);

/// CSV export: one header line with grid metadata, then row-major values.
void export_basis_csv(const ModeBasis& basis, const std::string& path);
void export_matrix_csv(const Eigen::MatrixXd& m, const std::string& path,
                       const std::string& header = "");

}  // namespace sqzlab

#endif
