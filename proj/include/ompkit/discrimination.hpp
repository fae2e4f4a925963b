#pragma once

// Minimum-error discrimination of qubit ensembles.
//
// The symmetry operator K = kappa0 I + kappa . sigma is feasible iff
// kappa0 >= q_x/2 + |kappa - q_x v_x / 2| for every x, so minimising tr K is
// the weighted one-centre problem
//
//     f(kappa) = max_x ( q_x/2 + |kappa - c_x| ),   c_x = q_x v_x / 2,
//
// with P_g = 2 min f. States whose constraint is tight are the ones an
// optimal measurement may identify.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ompkit/bloch.hpp"
#include "ompkit/ensemble.hpp"

namespace ompkit {

enum class CaseTag {
  kNoMeasurement,      ///< K = q_x rho_x: always guess x
  kNeverIdentified,    ///< K - q_x rho_x > 0
  kProjectiveElement,  ///< K - q_x rho_x has a single zero eigenvalue
};

const char* to_string(CaseTag tag);

using IndexSet = std::vector<std::size_t>;

struct DiscriminationSolution {
  Herm2 K;
  double p_guess = 0.0;
  std::vector<double> r;                     ///< r_x = P_g - q_x
  std::vector<std::optional<Vec3>> comp_states;  ///< Bloch vector of sigma_x; absent when r_x = 0
  IndexSet identified;                       ///< states with a zero eigenvalue of K - q_x rho_x
  std::vector<CaseTag> case_tags;
  std::vector<double> povm_weights;          ///< M_x = w_x (I + n_x . sigma)/2 with n_x = -s_x
  std::vector<Herm2> povm;                   ///< the POVM elements themselves

  /// min_{x in subset} r_x.
  double min_r(const IndexSet& subset) const;
  /// sigma_x in Bloch form; throws MissingComplementaryState when absent.
  Herm2 comp_state(std::size_t x) const;
};

struct SolverOptions {
  Tolerances tol{};
  double gap_tol = 1e-9;        ///< accepted duality gap tr K - sum q_x tr(M_x rho_x)
  std::size_t max_iter = 100000;
  std::size_t polish_every = 50;
};

/// Closed-form Helstrom solution for n = 2. Throws WrongArity otherwise.
DiscriminationSolution solve_two_state(const Ensemble& s, const Tolerances& tol = {});

/// General solver. Throws ConvergenceFailure if no certified optimum is found
/// within max_iter subgradient iterations.
DiscriminationSolution solve_general(const Ensemble& s, const SolverOptions& opts = {});

/// Minimum-norm nonnegative weights w with sum w = 2 and sum w_x n_x = 0,
/// where n_x = -s_x is the Bloch vector of the projector orthogonal to sigma_x.
/// Every index in `identified` must have a zero eigenvalue of K - q_x rho_x.
/// Throws InfeasibleCompleteness when no such weights exist.
std::vector<double> povm_weights(const Herm2& K, const Ensemble& s, const IndexSet& identified,
                                 const Tolerances& tol = {});

/// POVM elements for the weights returned by povm_weights (zero outside the set).
std::vector<Herm2> povm_from_weights(const Herm2& K, const Ensemble& s, const IndexSet& identified,
                                     const std::vector<double>& weights);

/// sum_x q_x tr(M_x rho_x).
double success_probability(const Ensemble& s, const std::vector<Herm2>& povm);

/// Human-readable descriptions of every violated solution invariant: dual
/// feasibility, P_g = tr K = q_x + r_x, K = q_x rho_x + r_x sigma_x on the
/// identified set, completeness, orthogonality and pairwise congruence.
std::vector<std::string> invariant_violations(const Ensemble& s, const DiscriminationSolution& sol,
                                              const Tolerances& tol = {});

/// Best success probability over randomly drawn rank-one POVMs with 2, 3 or 4
/// outcomes, each outcome assigned to its best guess. A lower bound on P_g.
double oracle_random_search(const Ensemble& s, std::size_t samples, std::uint64_t seed);

}  // namespace ompkit
