#pragma once

// The OMP conditions for pairs (a1, a_j), j = 2..m, are linear in
// x = (d1, d2, d3, t, delta) where d_i is the i-th row of D:
//
//     Q x = Q b,   b = (e1, e2, e3, 0, 0),
//
// so every feasible channel is x = Q^+ Q b + (null space of Q) c. Admissible
// channels are the CPTP members with 0 <= delta <= min r_x.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ompkit/channel.hpp"
#include "ompkit/discrimination.hpp"
#include "ompkit/ensemble.hpp"

namespace ompkit {

inline constexpr Eigen::Index kUnknowns = 13;
inline constexpr Eigen::Index kDeltaSlot = 12;

struct OmpSystem {
  IndexSet index_set;
  RealMatrix H;      ///< (m-1) x 3, rows h_{a1 aj}
  RealVector qdiff;  ///< q_a1 - q_aj
  RealMatrix W;      ///< (m-1) x 3, column i is w_i; row j is s_a1 - s_aj
  RealMatrix Q;      ///< 3(m-1) x 13
  RealVector b;
};

/// An affine family x_particular + null_basis * c.
struct OmpFamily {
  RealVector x_particular;
  RealMatrix null_basis;  ///< 13 x dim, orthonormal columns

  Eigen::Index dim() const { return null_basis.cols(); }
  RealVector point(const RealVector& c) const;
};

struct UnpackedChannel {
  QubitChannel channel;
  double delta = 0.0;
};

/// Empty `I` means sol.identified. Throws PairSetTooSmall, MissingComplementaryState.
OmpSystem build_system(const Ensemble& s, const DiscriminationSolution& sol, const IndexSet& I = {});

OmpFamily solve_family(const OmpSystem& sys, const Tolerances& tol = {});

/// The t = 0 members of the family of `sys`.
OmpFamily unital_family(const OmpSystem& sys, const Tolerances& tol = {});

/// Members with the given delta. Throws DeltaUnreachable when no member has it.
OmpFamily delta_slice(const OmpFamily& fam, double delta, const Tolerances& tol = {});

/// Throws WrongLength unless x has 13 entries.
UnpackedChannel unpack(const RealVector& x);
RealVector pack(const QubitChannel& c, double delta);

/// Family written as x_dep = offset + coeffs * x_free. Free coordinates are
/// picked greedily in the order delta, D entries (row-major), t.
struct Parametrization {
  std::vector<Eigen::Index> free;
  std::vector<Eigen::Index> dependent;
  RealVector offset;
  RealMatrix coeffs;  ///< |dependent| x |free|
};

Parametrization parametrize(const OmpFamily& fam, const Tolerances& tol = {});

/// Human-readable name of slot i of x: d11..d33, t1..t3, delta.
const char* unknown_name(Eigen::Index i);

struct SieveConfig {
  std::size_t count = 1000;
  std::uint64_t seed = 20200630;
  double box = 2.0;  ///< coefficients uniform in [-box, box]
};

struct AdmissibleSample {
  std::size_t index = 0;  ///< draw number
  RealVector coeffs;
  QubitChannel channel;
  double delta = 0.0;
};

struct SieveResult {
  std::vector<AdmissibleSample> kept;
  std::size_t drawn = 0;
  std::size_t rejected_delta = 0;
  std::size_t rejected_cptp = 0;
  std::size_t rejected_check = 0;  ///< passed the sieve but failed check_omp
};

/// 0 <= delta <= min_{x in I} r_x + match_tol and Choi-CPTP.
bool is_admissible(const RealVector& x, const DiscriminationSolution& sol, const IndexSet& I,
                   const Tolerances& tol = {});

/// Samples the family and keeps admissible channels that also pass check_omp.
SieveResult sieve_admissible(const OmpFamily& fam, const Ensemble& s,
                             const DiscriminationSolution& sol, const IndexSet& I,
                             const SieveConfig& cfg, const Tolerances& tol = {});

/// Maximal intervals of u in [lo, hi] on which pred holds, located by a grid
/// scan and refined by bisection. Features narrower than the grid step can be missed.
std::vector<std::pair<double, double>> scan_intervals(const std::function<bool(double)>& pred,
                                                      double lo, double hi, std::size_t grid);

/// Intervals of u for which x0 + u dir is Choi-CPTP (delta is ignored).
std::vector<std::pair<double, double>> cptp_intervals(const RealVector& x0, const RealVector& dir,
                                                      double lo, double hi,
                                                      std::size_t grid = 2000,
                                                      const Tolerances& tol = {});

/// Intervals of u for which x0 + u dir is admissible.
std::vector<std::pair<double, double>> admissible_intervals(
    const RealVector& x0, const RealVector& dir, double lo, double hi,
    const DiscriminationSolution& sol, const IndexSet& I, std::size_t grid = 2000,
    const Tolerances& tol = {});

}  // namespace ompkit
