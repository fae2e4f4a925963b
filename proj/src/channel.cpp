#include "ompkit/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "ompkit/errors.hpp"

namespace ompkit {

const char* to_string(CptpVerdict v) {
  switch (v) {
    case CptpVerdict::kCptp: return "CPTP";
    case CptpVerdict::kNotCp: return "NOT_CP";
    case CptpVerdict::kInconclusiveUseChoi: return "INCONCLUSIVE_USE_CHOI";
  }
  return "UNKNOWN";
}

QubitChannel QubitChannel::depolarizing(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw BadParameter("depolarizing eta must lie in [0, 1], got " + std::to_string(eta));
  }
  return {(1.0 - eta) * Mat3::Identity(), Vec3::Zero()};
}

QubitChannel QubitChannel::unitary(const Vec3& axis, double angle) {
  if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > 1e-9 || !std::isfinite(angle)) {
    throw BadParameter("rotation axis must be a unit vector");
  }
  Mat3 K;
  K << 0.0, -axis.z(), axis.y(),
       axis.z(), 0.0, -axis.x(),
       -axis.y(), axis.x(), 0.0;
  const Mat3 R = Mat3::Identity() + std::sin(angle) * K + (1.0 - std::cos(angle)) * K * K;
  return {R, Vec3::Zero()};
}

Vec3 QubitChannel::apply(const Vec3& v, const Tolerances& tol) const {
  if (!v.allFinite() || v.norm() > 1.0 + tol.psd_tol) {
    throw BlochOutOfBall("|v| = " + std::to_string(v.norm()) + " exceeds 1");
  }
  return D_ * v + t_;
}

Herm2 QubitChannel::apply(const Herm2& a) const { return {a.alpha, D_ * a.beta + a.alpha * t_}; }

QubitChannel QubitChannel::compose(const QubitChannel& first) const {
  return {D_ * first.D_, D_ * first.t_ + t_};
}

QubitChannel QubitChannel::mix(const QubitChannel& other, double kappa) const {
  return {(1.0 - kappa) * D_ + kappa * other.D_, (1.0 - kappa) * t_ + kappa * other.t_};
}

CanonicalForm QubitChannel::canonical_form() const {
  Eigen::JacobiSVD<Mat3> svd(D_, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // Eigen sorts singular values in decreasing order; reverse to increasing.
  Mat3 U = svd.matrixU().rowwise().reverse();
  Mat3 V = svd.matrixV().rowwise().reverse();
  Vec3 s = svd.singularValues().reverse();
  if (U.determinant() < 0.0) {
    U.col(0) *= -1.0;
    s(0) *= -1.0;
  }
  if (V.determinant() < 0.0) {
    V.col(0) *= -1.0;
    s(0) *= -1.0;
  }
  return {s, U.transpose() * t_, U, V.transpose()};
}

Eigen::Matrix4cd QubitChannel::choi_matrix() const {
  using C = std::complex<double>;
  const C i{0.0, 1.0};
  Eigen::Matrix4cd J = Eigen::Matrix4cd::Zero();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      // |r><c| = a I + b . sigma with complex coefficients.
      Complex2 E = Complex2::Zero();
      E(r, c) = 1.0;
      const C a = 0.5 * (E(0, 0) + E(1, 1));
      const Eigen::Vector3cd b(0.5 * (E(0, 1) + E(1, 0)), 0.5 * i * (E(0, 1) - E(1, 0)),
                               0.5 * (E(0, 0) - E(1, 1)));
      const Eigen::Vector3cd nb = D_.cast<C>() * b + a * t_.cast<C>();
      Complex2 out;
      out(0, 0) = a + nb(2);
      out(1, 1) = a - nb(2);
      out(0, 1) = nb(0) - i * nb(1);
      out(1, 0) = nb(0) + i * nb(1);
      J.block<2, 2>(2 * r, 2 * c) = out;
    }
  }
  return J;
}

double QubitChannel::choi_min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(choi_matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CptpVerdict is_cptp_choi(const QubitChannel& c, double tol) {
  if (!c.D().allFinite() || !c.t().allFinite()) return CptpVerdict::kNotCp;
  return c.choi_min_eigenvalue() >= -tol ? CptpVerdict::kCptp : CptpVerdict::kNotCp;
}

CptpVerdict is_cptp_inequalities(const CanonicalForm& f, double tol) {
  const double l1 = f.lambdas(0), l2 = f.lambdas(1), l3 = f.lambdas(2);
  if (f.lambdas.cwiseAbs().maxCoeff() > 1.0 + tol) return CptpVerdict::kNotCp;

  double t1 = f.t_canon(0), t2 = f.t_canon(1);
  const double t3 = f.t_canon(2);
  bool on_axis = std::abs(t1) <= tol && std::abs(t2) <= tol;
  if (std::abs(std::abs(l3) + std::abs(t3) - 1.0) <= tol) {
    t1 = 0.0;
    t2 = 0.0;
    on_axis = true;
  }

  bool ok = true;
  for (double sg : {1.0, -1.0}) {
    const double lhs = (l1 + sg * l2) * (l1 + sg * l2);
    const double rhs = (1.0 + sg * l3) * (1.0 + sg * l3) - t3 * t3;
    ok = ok && lhs <= rhs + tol;
  }
  const double l1s = l1 * l1, l2s = l2 * l2, l3s = l3 * l3;
  const double base = 1.0 - (l1s + l2s + l3s) - (t1 * t1 + t2 * t2 + t3 * t3);
  const double quartic_rhs =
      4.0 * (l1s * (t1 * t1 + l2s) + l2s * (t2 * t2 + l3s) + l3s * (t3 * t3 + l1s) -
             2.0 * l1 * l2 * l3);
  ok = ok && base * base >= quartic_rhs - tol;

  if (!ok) return CptpVerdict::kNotCp;
  return on_axis ? CptpVerdict::kCptp : CptpVerdict::kInconclusiveUseChoi;
}

}  // namespace ompkit
