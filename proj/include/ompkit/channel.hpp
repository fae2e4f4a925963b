#pragma once

// Qubit channels as affine maps of the Bloch ball, v -> D v + t.

#include <Eigen/Dense>

#include "ompkit/bloch.hpp"

namespace ompkit {

enum class CptpVerdict {
  kCptp,
  kNotCp,
  kInconclusiveUseChoi,
};

const char* to_string(CptpVerdict v);

struct CanonicalForm {
  Vec3 lambdas;  ///< |l1| <= |l2| <= |l3|, l3 >= 0
  Vec3 t_canon;  ///< O1^T t
  Mat3 O1;
  Mat3 O2;       ///< D = O1 diag(lambdas) O2, both proper rotations
};

class QubitChannel {
 public:
  QubitChannel() : D_(Mat3::Identity()), t_(Vec3::Zero()) {}
  QubitChannel(const Mat3& D, const Vec3& t) : D_(D), t_(t) {}

  static QubitChannel identity() { return {}; }
  /// (1 - eta) rho + eta I/2. Throws BadParameter unless 0 <= eta <= 1.
  static QubitChannel depolarizing(double eta);
  /// Conjugation by a unitary: rotation of the Bloch ball by `angle` about `axis`.
  static QubitChannel unitary(const Vec3& axis, double angle);

  const Mat3& D() const { return D_; }
  const Vec3& t() const { return t_; }

  /// D v + t; throws BlochOutOfBall for |v| > 1 + psd_tol.
  Vec3 apply(const Vec3& v, const Tolerances& tol = {}) const;
  /// Linear extension to Hermitian operators: (alpha, beta) -> (alpha, D beta + alpha t).
  Herm2 apply(const Herm2& a) const;

  /// this after `first`.
  QubitChannel compose(const QubitChannel& first) const;
  /// (1 - kappa) this + kappa other.
  QubitChannel mix(const QubitChannel& other, double kappa) const;

  CanonicalForm canonical_form() const;
  /// 4x4 Choi operator sum_ij |i><j| (x) N(|i><j|), trace 2.
  Eigen::Matrix4cd choi_matrix() const;
  double choi_min_eigenvalue() const;

 private:
  Mat3 D_;
  Vec3 t_;
};

/// Authoritative test: CPTP iff the Choi operator has no eigenvalue below -tol.
CptpVerdict is_cptp_choi(const QubitChannel& c, double tol = 1e-9);

/// Inequality test on the canonical form. Conclusive when t_canon lies on the
/// third axis (or on the |l3| + |t3| = 1 boundary); otherwise a violation is
/// reported as NotCP and a pass as InconclusiveUseChoi.
CptpVerdict is_cptp_inequalities(const CanonicalForm& f, double tol = 1e-9);

}  // namespace ompkit
