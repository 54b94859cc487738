#pragma once

#include <Eigen/Dense>

namespace korn {

/// Default relative rank tolerance: sigma_i counts iff sigma_i > tol * sigma_1.
inline constexpr double kRankTol = 1e-9;

/// Singular value cutoff for a matrix with largest singular value `sigma1`.
/// `floor` is an absolute lower bound so that matrices which are zero up to
/// round-off get rank 0 instead of rank full.
inline double rank_cutoff(double sigma1, double rel_tol, double floor) {
  double c = rel_tol * sigma1;
  return c > floor ? c : floor;
}

/// Moore-Penrose pseudo-inverse via SVD. Singular values at or below
/// rank_cutoff(sigma_1, rel_tol, floor) are treated as zero.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& m, double rel_tol = kRankTol, double floor = 0.0);
Eigen::MatrixXcd pinv(const Eigen::MatrixXcd& m, double rel_tol = kRankTol, double floor = 0.0);

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol = kRankTol, double floor = 0.0);

/// Orthonormal basis of the column space (columns of the result).
Eigen::MatrixXd image_basis(const Eigen::MatrixXd& m, double rel_tol = kRankTol, double floor = 0.0);

/// Orthogonal projector onto the column space.
Eigen::MatrixXd image_projector(const Eigen::MatrixXd& m, double rel_tol = kRankTol,
                                double floor = 0.0);

/// Largest of the four Moore-Penrose defects of `p` as a pseudo-inverse of `m`,
/// each measured relative to the natural scale of that identity.
double mp_defect(const Eigen::MatrixXd& m, const Eigen::MatrixXd& p);
double mp_defect(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& p);

}  // namespace korn
