#include "ompkit/bloch.hpp"

#include <algorithm>
#include <cmath>

#include "ompkit/errors.hpp"

namespace ompkit {

namespace {

using C = std::complex<double>;
constexpr C kI{0.0, 1.0};

}  // namespace

void Tolerances::validate() const {
  if (!(psd_tol > 0.0) || !(rank_tol > 0.0) || !(match_tol > 0.0)) {
    throw BadParameter("tolerances must be strictly positive");
  }
}

double Herm2::max_abs_diff(const Herm2& other) const {
  return std::max(std::abs(alpha - other.alpha), (beta - other.beta).cwiseAbs().maxCoeff());
}

Complex2 Herm2::to_matrix() const {
  Complex2 m;
  m(0, 0) = alpha + beta.z();
  m(1, 1) = alpha - beta.z();
  m(0, 1) = C(beta.x(), -beta.y());
  m(1, 0) = C(beta.x(), beta.y());
  return m;
}

Herm2 Herm2::from_matrix(const Complex2& m) {
  // Coefficients tr(m P)/2 for P in {I, X, Y, Z}, keeping real parts only.
  const double a = 0.5 * (m(0, 0) + m(1, 1)).real();
  const double bx = 0.5 * (m(0, 1) + m(1, 0)).real();
  const double by = 0.5 * (kI * (m(0, 1) - m(1, 0))).real();
  const double bz = 0.5 * (m(0, 0) - m(1, 1)).real();
  return {a, Vec3(bx, by, bz)};
}

Herm2 herm2_from_state(const Vec3& v, const Tolerances& tol) {
  if (!v.allFinite() || v.norm() > 1.0 + tol.psd_tol) {
    throw BlochOutOfBall("|v| = " + std::to_string(v.norm()) + " exceeds 1");
  }
  return {0.5, 0.5 * v};
}

Eigen2 eigen2(const Herm2& a) {
  const double n = a.beta.norm();
  const Vec3 axis = n > 0.0 ? Vec3(a.beta / n) : Vec3::UnitZ();
  return {a.alpha - n, a.alpha + n, axis};
}

double trace_norm(const Herm2& a) {
  const double n = a.beta.norm();
  return std::abs(a.alpha + n) + std::abs(a.alpha - n);
}

namespace {

Eigen::JacobiSVD<RealMatrix> full_svd(const RealMatrix& m) {
  return Eigen::JacobiSVD<RealMatrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Eigen::Index rank_of(const RealVector& sv, double rank_tol) {
  if (sv.size() == 0) return 0;
  const double cutoff = rank_tol * sv(0);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) ++r;
  }
  return r;
}

}  // namespace

Eigen::Index numerical_rank(const RealMatrix& m, const Tolerances& tol) {
  if (m.size() == 0) return 0;
  return rank_of(full_svd(m).singularValues(), tol.rank_tol);
}

RealMatrix pinv(const RealMatrix& m, const Tolerances& tol) {
  RealMatrix out = RealMatrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  const auto svd = full_svd(m);
  const RealVector& sv = svd.singularValues();
  const Eigen::Index r = rank_of(sv, tol.rank_tol);
  for (Eigen::Index i = 0; i < r; ++i) {
    out += (svd.matrixV().col(i) / sv(i)) * svd.matrixU().col(i).transpose();
  }
  return out;
}

RealMatrix nullspace(const RealMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0) return RealMatrix::Identity(m.cols(), m.cols());
  const auto svd = full_svd(m);
  const Eigen::Index r = rank_of(svd.singularValues(), tol.rank_tol);
  return svd.matrixV().rightCols(m.cols() - r);
}

}  // namespace ompkit
