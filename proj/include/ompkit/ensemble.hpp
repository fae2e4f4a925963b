#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ompkit/bloch.hpp"

namespace ompkit {

struct WeightedState {
  double q;  ///< a priori probability
  Vec3 v;    ///< Bloch vector
};

/// A validated qubit ensemble {q_x, rho_x}. Construct through validate().
class Ensemble {
 public:
  /// Checks priors and Bloch vectors. Priors summing to 1 within 1e-9 are
  /// renormalised; larger drift is rejected with BadPriors.
  static Ensemble validate(std::vector<WeightedState> states, const Tolerances& tol = {});

  std::size_t size() const { return states_.size(); }
  const std::vector<WeightedState>& states() const { return states_; }
  const WeightedState& operator[](std::size_t x) const { return states_.at(x); }

  double prior(std::size_t x) const { return states_.at(x).q; }
  const Vec3& bloch(std::size_t x) const { return states_.at(x).v; }

  /// rho_x in Bloch form.
  Herm2 state(std::size_t x) const { return {0.5, 0.5 * states_.at(x).v}; }
  /// q_x rho_x.
  Herm2 weighted_state(std::size_t x) const { return prior(x) * state(x); }

  bool is_equiprobable(double tol = 1e-12) const;

 private:
  explicit Ensemble(std::vector<WeightedState> s) : states_(std::move(s)) {}
  std::vector<WeightedState> states_;
};

/// Helstrom data for an ordered pair: h = q_x rho_x - q_y rho_y.
struct HelstromPair {
  std::size_t x;
  std::size_t y;
  Herm2 h;
  Vec3 h_vec;  ///< q_x v_x - q_y v_y = 2 beta(h)
};

HelstromPair helstrom(const Ensemble& s, std::size_t x, std::size_t y);

struct ReducedEnsemble {
  Ensemble ensemble;
  double rescale;  ///< r = 1 - q_drop; K' = K/r, P_g' = P_g/r, r'_x = r_x/r
};

/// Drops a never-identified state and renormalises the remaining priors.
ReducedEnsemble reduce_unidentified(const Ensemble& s, std::size_t drop);

}  // namespace ompkit
