#pragma once

// Shared helpers for the unit tests. The oracles here work on explicit 2x2
// complex matrices so they do not share code paths with the Bloch-form library.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ompkit/discrimination.hpp"
#include "ompkit/ensemble.hpp"

namespace testing {

using C2 = Eigen::Matrix2cd;
using cd = std::complex<double>;

inline C2 pauli(int k) {
  C2 m;
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cd(0, -1), cd(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline C2 density(const Eigen::Vector3d& v) {
  return 0.5 * (pauli(0) + v(0) * pauli(1) + v(1) * pauli(2) + v(2) * pauli(3));
}

inline C2 as_matrix(const ompkit::Herm2& a) {
  return a.alpha * pauli(0) + a.beta(0) * pauli(1) + a.beta(1) * pauli(2) + a.beta(2) * pauli(3);
}

inline Eigen::Vector2d eigenvalues(const C2& m) {
  return Eigen::SelfAdjointEigenSolver<C2>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double min_eig(const C2& m) { return eigenvalues(m)(0); }

inline Eigen::Vector3d random_bloch(std::mt19937_64& rng, bool pure = false) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Vector3d v(g(rng), g(rng), g(rng));
  v.normalize();
  return pure ? v : v * std::cbrt(u(rng));
}

inline ompkit::Ensemble random_ensemble(std::mt19937_64& rng, std::size_t n, bool equiprobable,
                                        bool pure = false) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> q(n);
  double total = 0.0;
  for (auto& x : q) total += (x = equiprobable ? 1.0 : u(rng));
  std::vector<ompkit::WeightedState> states;
  for (std::size_t i = 0; i < n; ++i) states.push_back({q[i] / total, random_bloch(rng, pure)});
  return ompkit::Ensemble::validate(states);
}

// Weak duality: a feasible K and a POVM reaching tr K certify optimality.
struct Certificate {
  double dual_infeasibility = 0.0;  // -min_x lambda_min(K - q_x rho_x)
  double povm_infeasibility = 0.0;  // max(-lambda_min(M_x), |sum M - I|)
  double primal = 0.0;              // sum_x q_x tr(M_x rho_x)
  double dual = 0.0;                // tr K
};

inline Certificate certify(const ompkit::Ensemble& s, const ompkit::DiscriminationSolution& sol) {
  Certificate c;
  const C2 K = as_matrix(sol.K);
  c.dual = K.trace().real();
  C2 sum = C2::Zero();
  for (std::size_t x = 0; x < s.size(); ++x) {
    const C2 rho = density(s.bloch(x));
    c.dual_infeasibility = std::max(c.dual_infeasibility, -min_eig(K - s.prior(x) * rho));
    const C2 M = as_matrix(sol.povm[x]);
    c.povm_infeasibility = std::max(c.povm_infeasibility, -min_eig(M));
    c.primal += s.prior(x) * (M * rho).trace().real();
    sum += M;
  }
  c.povm_infeasibility = std::max(c.povm_infeasibility, (sum - pauli(0)).cwiseAbs().maxCoeff());
  return c;
}

// Helstrom bound from the eigenvalues of q1 rho1 - q2 rho2.
inline double helstrom_bound(const ompkit::Ensemble& s) {
  const C2 d = s.prior(0) * density(s.bloch(0)) - s.prior(1) * density(s.bloch(1));
  return 0.5 * (1.0 + eigenvalues(d).cwiseAbs().sum());
}

}  // namespace testing
