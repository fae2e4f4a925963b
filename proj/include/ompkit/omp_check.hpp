#pragma once

// Optimal-measurement-preserving (OMP) tests. A channel N preserves the
// measurement identifying I iff, for all x, y in I,
//
//     q_x N[rho_x] - q_y N[rho_y] = q_x rho_x - q_y rho_y + delta (sigma_x - sigma_y)
//
// for a single delta with 0 <= delta <= min_{x in I} r_x. In Bloch form this is
// (D - I) h_xy + (q_x - q_y) t - delta (s_x - s_y) = 0.

#include <string>
#include <vector>

#include "ompkit/channel.hpp"
#include "ompkit/discrimination.hpp"
#include "ompkit/ensemble.hpp"

namespace ompkit {

enum class OmpMode { kStrong, kWeak };

const char* to_string(OmpMode m);

struct OmpReport {
  bool is_omp = false;
  double delta = 0.0;
  std::vector<double> residuals;  ///< one per pair (a1, a_j), j = 2..m
  bool residual_ok = false;
  bool r_bound_ok = false;        ///< -match_tol <= delta <= min r_x + match_tol
  bool outside_dominated = true;  ///< states outside I stay dominated by K^(N)
  IndexSet index_set;
  OmpMode mode = OmpMode::kStrong;
  std::vector<double> weights;    ///< POVM weights of the measurement on I
  double p_guess_before = 0.0;
  double p_guess_after = 0.0;     ///< from re-solving the transformed ensemble
  bool cross_check_ok = false;    ///< re-solve agrees with delta and the POVM is still optimal
};

/// Applies N to every state of the ensemble.
Ensemble transform(const Ensemble& s, const QubitChannel& c);

/// Full test. `I` must be a subset of sol.identified with at least two
/// elements that supports a complete measurement; an empty `I` means
/// sol.identified. Throws PairSetTooSmall, ChannelNotCPTP,
/// MissingComplementaryState, InfeasibleCompleteness.
OmpReport check_omp(const Ensemble& s, const DiscriminationSolution& sol, const IndexSet& I,
                    const QubitChannel& c, const Tolerances& tol = {});

struct EquiprobableReport {
  bool is_omp = false;
  double kappa = 0.0;
  double delta = 0.0;  ///< (1 - kappa) r with r = P_g - 1/n
  double residual = 0.0;
};

/// N[rho_x] - N[rho_y] = kappa (rho_x - rho_y) over pairs of I, kappa in (0, 1].
/// Throws NotEquiprobable.
EquiprobableReport check_equiprobable(const Ensemble& s, const DiscriminationSolution& sol,
                                      const QubitChannel& c, const Tolerances& tol = {});

struct TwoStateReport {
  bool is_omp = false;
  double lambda = 0.0;
  double mu = 0.0;
  double delta = 0.0;  ///< (1 - lambda)(P_g - 1/2)
  double residual = 0.0;
  double lambda_min = 0.0;  ///< (2 q_max - 1)/(2 P_g - 1)
  bool range_ok = false;
};

/// N(h12) = lambda h12 + mu I with mu = (1 - lambda)(q1 - q2)/2.
/// Throws WrongArity, DominatedState.
TwoStateReport check_two_state(const Ensemble& s, const QubitChannel& c, const Tolerances& tol = {});

struct UnitaryReport {
  bool is_omp = false;
  double delta = 0.0;
  std::string rule;
};

/// Two identified states of a two-state ensemble: OMP iff the rotation fixes
/// the Helstrom axis. Three or more identified states: OMP iff D = I.
/// Otherwise falls back to check_omp. Throws NotUnitary.
UnitaryReport check_unitary_propositions(const Ensemble& s, const DiscriminationSolution& sol,
                                         const IndexSet& I, const QubitChannel& c,
                                         const Tolerances& tol = {});

/// True iff every pairwise difference q_x rho_x - q_y rho_y is preserved.
bool check_pg_preserving(const Ensemble& s, const QubitChannel& c, const Tolerances& tol = {});

struct ConvexMixReport {
  OmpReport mixed;
  double expected_delta = 0.0;  ///< (1 - kappa) delta_1 + kappa delta_2
  bool delta_matches = false;
};

/// Throws NotOmpInputs unless both channels are OMP for (s, I), BadParameter
/// unless kappa is in [0, 1].
ConvexMixReport convex_mix_check(const QubitChannel& c1, const QubitChannel& c2, double kappa,
                                 const Ensemble& s, const DiscriminationSolution& sol,
                                 const IndexSet& I, const Tolerances& tol = {});

}  // namespace ompkit
