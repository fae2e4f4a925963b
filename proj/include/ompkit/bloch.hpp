#pragma once

// Bloch-form algebra for 2x2 Hermitian operators and the small dense linear
// algebra (SVD, pseudoinverse, nullspace) used throughout the library.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ompkit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Complex2 = Eigen::Matrix2cd;

/// Numerical thresholds shared by every module.
struct Tolerances {
  double psd_tol = 1e-9;    ///< eigenvalue slack for positivity / zero tests
  double rank_tol = 1e-9;   ///< singular values below rank_tol * sigma_max are zero
  double match_tol = 1e-8;  ///< residual threshold for equation checks

  /// Throws BadParameter unless every field is strictly positive.
  void validate() const;
};

/// A 2x2 Hermitian operator A = alpha * I + beta . sigma.
struct Herm2 {
  double alpha = 0.0;
  Vec3 beta = Vec3::Zero();

  Herm2() = default;
  Herm2(double a, const Vec3& b) : alpha(a), beta(b) {}

  static Herm2 identity() { return {1.0, Vec3::Zero()}; }

  double trace() const { return 2.0 * alpha; }
  double lo() const { return alpha - beta.norm(); }
  double hi() const { return alpha + beta.norm(); }
  bool is_psd(double tol) const { return lo() >= -tol; }

  /// Largest absolute difference over the four real components.
  double max_abs_diff(const Herm2& other) const;

  Complex2 to_matrix() const;
  /// Hermitian part of an arbitrary 2x2 complex matrix, in Bloch form.
  static Herm2 from_matrix(const Complex2& m);

  Herm2& operator+=(const Herm2& o) {
    alpha += o.alpha;
    beta += o.beta;
    return *this;
  }
  Herm2& operator-=(const Herm2& o) {
    alpha -= o.alpha;
    beta -= o.beta;
    return *this;
  }
  Herm2& operator*=(double s) {
    alpha *= s;
    beta *= s;
    return *this;
  }
};

inline Herm2 operator+(Herm2 a, const Herm2& b) { return a += b; }
inline Herm2 operator-(Herm2 a, const Herm2& b) { return a -= b; }
inline Herm2 operator*(double s, Herm2 a) { return a *= s; }
inline Herm2 operator*(Herm2 a, double s) { return a *= s; }
inline Herm2 operator-(const Herm2& a) { return {-a.alpha, -a.beta}; }

/// tr(A B) for Hermitian A, B.
inline double trace_product(const Herm2& a, const Herm2& b) {
  return 2.0 * (a.alpha * b.alpha + a.beta.dot(b.beta));
}

/// rho = (I + v.sigma)/2. Throws BlochOutOfBall if |v| > 1 + psd_tol.
Herm2 herm2_from_state(const Vec3& v, const Tolerances& tol = {});

struct Eigen2 {
  double lo;
  double hi;
  Vec3 axis;  ///< unit eigenvector direction of `hi`; (0,0,1) when beta = 0
};

Eigen2 eigen2(const Herm2& a);

/// Sum of absolute eigenvalues.
double trace_norm(const Herm2& a);

// ---------------------------------------------------------------------------
// Real dense linear algebra

/// Numerical rank with singular values below rank_tol * sigma_max dropped.
Eigen::Index numerical_rank(const RealMatrix& m, const Tolerances& tol = {});

/// Moore-Penrose pseudoinverse (cols x rows).
RealMatrix pinv(const RealMatrix& m, const Tolerances& tol = {});

/// Orthonormal basis of ker(m), one vector per column.
RealMatrix nullspace(const RealMatrix& m, const Tolerances& tol = {});

}  // namespace ompkit
