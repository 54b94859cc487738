#include "korn/linalg.hpp"

#include <Eigen/SVD>
#include <algorithm>

namespace korn {
namespace {

template <class Mat>
Mat pinv_impl(const Mat& m, double rel_tol, double floor) {
  using Scalar = typename Mat::Scalar;
  Mat out = Mat::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return out;
  double cut = rank_cutoff(s(0), rel_tol, floor);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s(i) > cut)) break;
    out.noalias() += svd.matrixV().col(i) * (Scalar(1.0 / s(i)) * svd.matrixU().col(i).adjoint());
  }
  return out;
}

template <class Mat>
double mp_defect_impl(const Mat& m, const Mat& p) {
  auto nrm = [](const auto& x) { return x.norm(); };
  double sm = std::max(nrm(m), 1e-300);
  double sp = std::max(nrm(p), 1e-300);
  Mat mp = m * p;
  Mat pm = p * m;
  double d1 = nrm(m * pm - m) / sm;
  double d2 = p.size() == 0 || nrm(p) == 0.0 ? 0.0 : nrm(p * mp - p) / sp;
  double s3 = std::max(nrm(mp), 1.0);
  double s4 = std::max(nrm(pm), 1.0);
  double d3 = nrm(Mat(mp.adjoint()) - mp) / s3;
  double d4 = nrm(Mat(pm.adjoint()) - pm) / s4;
  return std::max({d1, d2, d3, d4});
}

}  // namespace

Eigen::MatrixXd pinv(const Eigen::MatrixXd& m, double rel_tol, double floor) {
  return pinv_impl(m, rel_tol, floor);
}

Eigen::MatrixXcd pinv(const Eigen::MatrixXcd& m, double rel_tol, double floor) {
  return pinv_impl(m, rel_tol, floor);
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol, double floor) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  double cut = rank_cutoff(s(0), rel_tol, floor);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return r;
}

Eigen::MatrixXd image_basis(const Eigen::MatrixXd& m, double rel_tol, double floor) {
  if (m.size() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  double cut = rank_cutoff(s(0), rel_tol, floor);
  int r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Eigen::MatrixXd image_projector(const Eigen::MatrixXd& m, double rel_tol, double floor) {
  Eigen::MatrixXd u = image_basis(m, rel_tol, floor);
  return u * u.transpose();
}

double mp_defect(const Eigen::MatrixXd& m, const Eigen::MatrixXd& p) { return mp_defect_impl(m, p); }
double mp_defect(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& p) {
  return mp_defect_impl(m, p);
}

}  // namespace korn
