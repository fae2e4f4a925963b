#include "ompkit/omp_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ompkit/errors.hpp"

namespace ompkit {

const char* to_string(OmpMode m) { return m == OmpMode::kStrong ? "STRONG" : "WEAK"; }

namespace {

IndexSet normalise(const DiscriminationSolution& sol, const IndexSet& I, std::size_t n) {
  IndexSet out = I.empty() ? sol.identified : I;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (auto x : out) {
    if (x >= n) throw IndexOutOfRange("index " + std::to_string(x));
  }
  if (out.size() < 2) {
    throw PairSetTooSmall("need at least two identified states, got " +
                          std::to_string(out.size()));
  }
  return out;
}

const Vec3& comp(const DiscriminationSolution& sol, std::size_t x) {
  if (x >= sol.comp_states.size() || !sol.comp_states[x]) {
    throw MissingComplementaryState("state " + std::to_string(x) + " has r_x = 0");
  }
  return *sol.comp_states[x];
}

}  // namespace

Ensemble transform(const Ensemble& s, const QubitChannel& c) {
  std::vector<WeightedState> out;
  out.reserve(s.size());
  for (const auto& st : s.states()) {
    Vec3 v = c.D() * st.v + c.t();
    // A CP map can overshoot the unit sphere by rounding only.
    if (v.norm() > 1.0) v.normalize();
    out.push_back({st.q, v});
  }
  return Ensemble::validate(std::move(out));
}

OmpReport check_omp(const Ensemble& s, const DiscriminationSolution& sol, const IndexSet& I,
                    const QubitChannel& c, const Tolerances& tol) {
  tol.validate();
  OmpReport rep;
  rep.index_set = normalise(sol, I, s.size());
  if (is_cptp_choi(c, tol.psd_tol) != CptpVerdict::kCptp) {
    throw ChannelNotCPTP("Choi operator has eigenvalue " +
                         std::to_string(c.choi_min_eigenvalue()));
  }
  IndexSet canonical = sol.identified;
  std::sort(canonical.begin(), canonical.end());
  rep.mode = rep.index_set == canonical ? OmpMode::kStrong : OmpMode::kWeak;
  rep.weights = povm_weights(sol.K, s, rep.index_set, tol);
  rep.p_guess_before = sol.p_guess;

  const std::size_t a1 = rep.index_set.front();
  const Mat3 DmI = c.D() - Mat3::Identity();
  std::vector<Vec3> lhs, dirs;
  double num = 0.0, den = 0.0;
  for (std::size_t j = 1; j < rep.index_set.size(); ++j) {
    const std::size_t aj = rep.index_set[j];
    const auto h = helstrom(s, a1, aj);
    const Vec3 g = DmI * h.h_vec + (s.prior(a1) - s.prior(aj)) * c.t();
    const Vec3 sxy = comp(sol, a1) - comp(sol, aj);
    num += sxy.dot(g);
    den += sxy.squaredNorm();
    lhs.push_back(g);
    dirs.push_back(sxy);
  }
  rep.delta = den > 0.0 ? num / den : 0.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < lhs.size(); ++j) {
    const double res = (lhs[j] - rep.delta * dirs[j]).cwiseAbs().maxCoeff();
    rep.residuals.push_back(res);
    worst = std::max(worst, res);
  }
  rep.residual_ok = worst <= tol.match_tol;
  rep.r_bound_ok =
      rep.delta >= -tol.match_tol && rep.delta <= sol.min_r(rep.index_set) + tol.match_tol;

  // K^(N) = q_a1 N[rho_a1] + (r_a1 - delta) sigma_a1 must dominate the states outside I.
  const Herm2 KN = s.prior(a1) * c.apply(s.state(a1)) + (sol.r[a1] - rep.delta) * sol.comp_state(a1);
  for (std::size_t y = 0; y < s.size(); ++y) {
    if (std::binary_search(rep.index_set.begin(), rep.index_set.end(), y)) continue;
    if ((KN - s.prior(y) * c.apply(s.state(y))).lo() < -tol.match_tol) {
      rep.outside_dominated = false;
    }
  }
  rep.is_omp = rep.residual_ok && rep.r_bound_ok && rep.outside_dominated;

  const Ensemble after = transform(s, c);
  SolverOptions opts;
  opts.tol = tol;
  const auto sol_after = solve_general(after, opts);
  rep.p_guess_after = sol_after.p_guess;
  if (rep.is_omp) {
    const auto povm = povm_from_weights(sol.K, s, rep.index_set, rep.weights);
    const double achieved = success_probability(after, povm);
    rep.cross_check_ok =
        std::abs(rep.delta - (rep.p_guess_before - rep.p_guess_after)) <= 10.0 * tol.match_tol &&
        std::abs(achieved - rep.p_guess_after) <= tol.match_tol;
  }
  return rep;
}

EquiprobableReport check_equiprobable(const Ensemble& s, const DiscriminationSolution& sol,
                                      const QubitChannel& c, const Tolerances& tol) {
  if (!s.is_equiprobable()) throw NotEquiprobable("priors differ");
  const IndexSet I = normalise(sol, {}, s.size());
  EquiprobableReport rep;
  double num = 0.0, den = 0.0;
  std::vector<Vec3> diffs;
  for (std::size_t j = 1; j < I.size(); ++j) {
    const Vec3 d = s.bloch(I.front()) - s.bloch(I[j]);
    num += d.dot(c.D() * d);
    den += d.squaredNorm();
    diffs.push_back(d);
  }
  rep.kappa = den > 0.0 ? num / den : 1.0;
  for (const auto& d : diffs) {
    rep.residual = std::max(rep.residual, (c.D() * d - rep.kappa * d).cwiseAbs().maxCoeff());
  }
  const double r = sol.p_guess - 1.0 / static_cast<double>(s.size());
  rep.delta = (1.0 - rep.kappa) * r;
  rep.is_omp = rep.residual <= tol.match_tol && rep.kappa > tol.match_tol &&
               rep.kappa <= 1.0 + tol.match_tol;
  return rep;
}

TwoStateReport check_two_state(const Ensemble& s, const QubitChannel& c, const Tolerances& tol) {
  if (s.size() != 2) {
    throw WrongArity("two-state check needs 2 states, got " + std::to_string(s.size()));
  }
  const auto h = helstrom(s, 0, 1);
  if (h.h.lo() >= -tol.psd_tol || h.h.hi() <= tol.psd_tol) {
    throw DominatedState("one state dominates; no measurement is needed");
  }
  const double pg = 0.5 * (1.0 + trace_norm(h.h));
  const Herm2 hn = c.apply(h.h);
  TwoStateReport rep;
  rep.lambda = h.h.beta.dot(hn.beta) / h.h.beta.squaredNorm();
  rep.mu = hn.alpha - rep.lambda * h.h.alpha;
  rep.residual = std::max((hn.beta - rep.lambda * h.h.beta).cwiseAbs().maxCoeff(),
                          std::abs(rep.mu - (1.0 - rep.lambda) * h.h.alpha));
  rep.delta = (1.0 - rep.lambda) * (pg - 0.5);

  const double q1 = s.prior(0), q2 = s.prior(1);
  const double qmax = std::max(q1, q2);
  rep.lambda_min = (2.0 * qmax - 1.0) / (2.0 * pg - 1.0);
  // |mu| <= (|q1 - q2|/2)(P_g - q_max)/(P_g - 1/2), sign of mu follows q1 - q2.
  const double mu_bound = 0.5 * std::abs(q1 - q2) * (pg - qmax) / (pg - 0.5);
  const bool mu_ok = std::abs(rep.mu) <= mu_bound + tol.match_tol &&
                     rep.mu * (q1 - q2) >= -tol.match_tol;
  rep.range_ok = rep.lambda >= rep.lambda_min - tol.match_tol &&
                 rep.lambda <= 1.0 + tol.match_tol && mu_ok;
  rep.is_omp = rep.residual <= tol.match_tol && rep.range_ok;
  return rep;
}

UnitaryReport check_unitary_propositions(const Ensemble& s, const DiscriminationSolution& sol,
                                         const IndexSet& I, const QubitChannel& c,
                                         const Tolerances& tol) {
  const Mat3& D = c.D();
  if ((D.transpose() * D - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
      std::abs(D.determinant() - 1.0) > 1e-9 || c.t().cwiseAbs().maxCoeff() > 1e-12) {
    throw NotUnitary("D must be a proper rotation with t = 0");
  }
  const IndexSet idx = normalise(sol, I, s.size());
  UnitaryReport rep;
  rep.delta = 0.0;
  const bool is_identity = (D - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol.match_tol;
  if (s.size() == 2 && idx.size() == 2) {
    const Vec3 axis = helstrom(s, 0, 1).h_vec.normalized();
    rep.is_omp = (D * axis - axis).cwiseAbs().maxCoeff() <= tol.match_tol;
    rep.rule = "two states: rotation must fix the Helstrom axis";
  } else if (idx.size() > 2) {
    rep.is_omp = is_identity;
    rep.rule = "three or more identified states: only the identity";
  } else {
    const auto full = check_omp(s, sol, idx, c, tol);
    rep.is_omp = full.is_omp;
    rep.delta = full.delta;
    rep.rule = "general OMP conditions";
  }
  return rep;
}

bool check_pg_preserving(const Ensemble& s, const QubitChannel& c, const Tolerances& tol) {
  for (std::size_t x = 0; x < s.size(); ++x) {
    for (std::size_t y = x + 1; y < s.size(); ++y) {
      const Herm2 before = s.weighted_state(x) - s.weighted_state(y);
      const Herm2 after = s.prior(x) * c.apply(s.state(x)) - s.prior(y) * c.apply(s.state(y));
      if (before.max_abs_diff(after) > tol.match_tol) return false;
    }
  }
  return true;
}

ConvexMixReport convex_mix_check(const QubitChannel& c1, const QubitChannel& c2, double kappa,
                                 const Ensemble& s, const DiscriminationSolution& sol,
                                 const IndexSet& I, const Tolerances& tol) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw BadParameter("kappa must lie in [0, 1]");
  const auto r1 = check_omp(s, sol, I, c1, tol);
  const auto r2 = check_omp(s, sol, I, c2, tol);
  if (!r1.is_omp || !r2.is_omp) throw NotOmpInputs("both channels must be OMP");
  ConvexMixReport rep;
  rep.mixed = check_omp(s, sol, I, c1.mix(c2, kappa), tol);
  rep.expected_delta = (1.0 - kappa) * r1.delta + kappa * r2.delta;
  rep.delta_matches = std::abs(rep.mixed.delta - rep.expected_delta) <= tol.match_tol;
  return rep;
}

}  // namespace ompkit
