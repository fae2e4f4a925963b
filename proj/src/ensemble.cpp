#include "ompkit/ensemble.hpp"

#include <cmath>
#include <string>

#include "ompkit/errors.hpp"

namespace ompkit {

namespace {

constexpr double kRenormaliseDrift = 1e-9;

void check_index(const Ensemble& s, std::size_t x) {
  if (x >= s.size()) {
    throw IndexOutOfRange("index " + std::to_string(x) + " with " + std::to_string(s.size()) +
                          " states");
  }
}

}  // namespace

Ensemble Ensemble::validate(std::vector<WeightedState> states, const Tolerances& tol) {
  if (states.size() < 2) {
    throw TooFewStates("an ensemble needs at least two states, got " +
                       std::to_string(states.size()));
  }
  double total = 0.0;
  for (std::size_t x = 0; x < states.size(); ++x) {
    const auto& st = states[x];
    if (!std::isfinite(st.q) || st.q <= 0.0) {
      throw BadPriors("prior " + std::to_string(x) + " must be positive");
    }
    if (!st.v.allFinite() || st.v.norm() > 1.0 + tol.psd_tol) {
      throw BlochOutOfBall("state " + std::to_string(x) + " has |v| = " +
                           std::to_string(st.v.norm()));
    }
    total += st.q;
  }
  if (std::abs(total - 1.0) > kRenormaliseDrift) {
    throw BadPriors("priors sum to " + std::to_string(total));
  }
  for (auto& st : states) st.q /= total;
  return Ensemble(std::move(states));
}

bool Ensemble::is_equiprobable(double tol) const {
  for (const auto& st : states_) {
    if (std::abs(st.q - states_.front().q) > tol) return false;
  }
  return true;
}

HelstromPair helstrom(const Ensemble& s, std::size_t x, std::size_t y) {
  check_index(s, x);
  check_index(s, y);
  if (x == y) throw BadParameter("Helstrom pair needs x != y");
  const Vec3 h_vec = s.prior(x) * s.bloch(x) - s.prior(y) * s.bloch(y);
  const Herm2 h{0.5 * (s.prior(x) - s.prior(y)), 0.5 * h_vec};
  return {x, y, h, h_vec};
}

ReducedEnsemble reduce_unidentified(const Ensemble& s, std::size_t drop) {
  check_index(s, drop);
  const double r = 1.0 - s.prior(drop);
  std::vector<WeightedState> kept;
  kept.reserve(s.size() - 1);
  for (std::size_t x = 0; x < s.size(); ++x) {
    if (x == drop) continue;
    kept.push_back({s.prior(x) / r, s.bloch(x)});
  }
  return {Ensemble::validate(std::move(kept)), r};
}

}  // namespace ompkit
