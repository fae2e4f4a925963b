#include "ompkit/discrimination.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "ompkit/errors.hpp"

namespace ompkit {

const char* to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::kNoMeasurement: return "NO_MEASUREMENT";
    case CaseTag::kNeverIdentified: return "NEVER_IDENTIFIED";
    case CaseTag::kProjectiveElement: return "PROJECTIVE_ELEMENT";
  }
  return "UNKNOWN";
}

double DiscriminationSolution::min_r(const IndexSet& subset) const {
  double m = std::numeric_limits<double>::infinity();
  for (auto x : subset) m = std::min(m, r.at(x));
  return m;
}

Herm2 DiscriminationSolution::comp_state(std::size_t x) const {
  if (x >= comp_states.size() || !comp_states[x]) {
    throw MissingComplementaryState("state " + std::to_string(x) + " has r_x = 0");
  }
  return {0.5, 0.5 * *comp_states[x]};
}

namespace {

constexpr double kFeasibilitySlack = 1e-12;
constexpr std::size_t kMaxEnumeratedWeights = 16;

// Weighted one-centre data: centres c_x = q_x v_x / 2 and offsets a_x = q_x / 2.
struct Centres {
  std::vector<Vec3> c;
  std::vector<double> a;

  explicit Centres(const Ensemble& s) {
    for (const auto& st : s.states()) {
      c.push_back(0.5 * st.q * st.v);
      a.push_back(0.5 * st.q);
    }
  }
  std::size_t size() const { return c.size(); }

  double value(const Vec3& kappa, std::size_t* argmax = nullptr) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < c.size(); ++x) {
      const double fx = a[x] + (kappa - c[x]).norm();
      if (fx > best) {
        best = fx;
        if (argmax) *argmax = x;
      }
    }
    return best;
  }
};

struct Centre {
  Vec3 kappa;
  double radius;
};

// Solves |kappa - c_i| = R - a_i for i in `support`, with kappa in the affine
// hull of the support centres. Up to two roots.
std::vector<Centre> solve_support(const Centres& p, const std::vector<std::size_t>& support) {
  const std::size_t i0 = support.front();
  if (support.size() == 1) return {{p.c[i0], p.a[i0]}};

  const auto k = static_cast<Eigen::Index>(support.size() - 1);
  RealMatrix E(3, k);
  RealVector u(k), w(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const std::size_t ij = support[static_cast<std::size_t>(j) + 1];
    E.col(j) = p.c[ij] - p.c[i0];
    u(j) = 0.5 * (E.col(j).squaredNorm() - p.a[ij] * p.a[ij] + p.a[i0] * p.a[i0]);
    w(j) = p.a[ij] - p.a[i0];
  }
  const RealMatrix G = E.transpose() * E;
  Eigen::JacobiSVD<RealMatrix> svd(E);
  const RealVector& sv = svd.singularValues();
  if (sv(k - 1) <= 1e-9 * std::max(sv(0), 1e-300)) return {};

  const auto lu = G.fullPivLu();
  const Vec3 pv = E * lu.solve(u);
  const Vec3 gv = E * lu.solve(w);

  // |pv + R gv|^2 = (R - a0)^2
  const double a0 = p.a[i0];
  const double qa = gv.squaredNorm() - 1.0;
  const double qb = 2.0 * (pv.dot(gv) + a0);
  const double qc = pv.squaredNorm() - a0 * a0;
  std::vector<double> roots;
  if (std::abs(qa) < 1e-14) {
    if (std::abs(qb) > 0.0) roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < -1e-14) return {};
    const double sq = std::sqrt(std::max(disc, 0.0));
    // Numerically stable pair of roots.
    const double t = -0.5 * (qb + std::copysign(sq, qb));
    if (t != 0.0) {
      roots.push_back(t / qa);
      roots.push_back(qc / t);
    } else {
      roots.push_back(0.0);
    }
  }

  double amax = 0.0;
  for (auto i : support) amax = std::max(amax, p.a[i]);
  std::vector<Centre> out;
  for (double R : roots) {
    if (!std::isfinite(R) || R < amax - kFeasibilitySlack) continue;
    out.push_back({p.c[i0] + pv + R * gv, R});
  }
  return out;
}

bool feasible(const Centres& p, const Centre& cand) {
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p.a[x] + (cand.kappa - p.c[x]).norm() > cand.radius + kFeasibilitySlack) return false;
  }
  return true;
}

// Fills every solution field from K.
DiscriminationSolution assemble(const Ensemble& s, const Herm2& K, const Tolerances& tol) {
  const std::size_t n = s.size();
  DiscriminationSolution sol;
  sol.K = K;
  sol.p_guess = K.trace();
  sol.r.resize(n);
  sol.comp_states.assign(n, std::nullopt);
  sol.case_tags.resize(n);
  sol.povm_weights.assign(n, 0.0);
  sol.povm.assign(n, Herm2{});

  std::optional<std::size_t> no_measurement;
  IndexSet projective;
  for (std::size_t x = 0; x < n; ++x) {
    const Herm2 diff = K - s.weighted_state(x);
    sol.r[x] = sol.p_guess - s.prior(x);
    if (diff.hi() <= tol.psd_tol) {
      sol.case_tags[x] = CaseTag::kNoMeasurement;
      if (!no_measurement) no_measurement = x;
    } else if (diff.lo() <= tol.psd_tol) {
      sol.case_tags[x] = CaseTag::kProjectiveElement;
      projective.push_back(x);
    } else {
      sol.case_tags[x] = CaseTag::kNeverIdentified;
    }
    if (sol.r[x] > tol.psd_tol) {
      Vec3 sx = 2.0 * diff.beta / sol.r[x];
      if (sol.case_tags[x] == CaseTag::kProjectiveElement && sx.norm() > 0.0) sx.normalize();
      sol.comp_states[x] = sx;
    }
  }

  if (no_measurement) {
    sol.identified = {*no_measurement};
    sol.povm_weights[*no_measurement] = 1.0;
    sol.povm[*no_measurement] = Herm2::identity();
  } else {
    sol.identified = projective;
    const auto w = povm_weights(K, s, projective, tol);
    for (std::size_t i = 0; i < projective.size(); ++i) sol.povm_weights[projective[i]] = w[i];
    sol.povm = povm_from_weights(K, s, projective, w);
  }
  return sol;
}

std::optional<DiscriminationSolution> certify(const Ensemble& s, const Centre& cand,
                                              const SolverOptions& opts) {
  try {
    auto sol = assemble(s, Herm2{cand.radius, cand.kappa}, opts.tol);
    const double gap = sol.p_guess - success_probability(s, sol.povm);
    if (std::abs(gap) <= opts.gap_tol) return sol;
  } catch (const InfeasibleCompleteness&) {
  }
  return std::nullopt;
}

// Tries every support of size <= 4 drawn from `candidates`.
std::optional<DiscriminationSolution> polish(const Ensemble& s, const Centres& p,
                                             const std::vector<std::size_t>& candidates,
                                             const SolverOptions& opts) {
  const std::size_t m = candidates.size();
  std::optional<DiscriminationSolution> best;
  std::vector<std::size_t> support;
  for (std::size_t k = 1; k <= std::min<std::size_t>(4, m); ++k) {
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      support.clear();
      for (std::size_t i = 0; i < m; ++i) {
        if (mask[i]) support.push_back(candidates[i]);
      }
      for (const auto& cand : solve_support(p, support)) {
        if (!feasible(p, cand)) continue;
        if (best && cand.radius >= 0.5 * best->p_guess) continue;
        if (auto sol = certify(s, cand, opts)) best = std::move(sol);
      }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    if (best) return best;
  }
  return best;
}

}  // namespace

DiscriminationSolution solve_two_state(const Ensemble& s, const Tolerances& tol) {
  if (s.size() != 2) {
    throw WrongArity("closed-form Helstrom solution needs 2 states, got " +
                     std::to_string(s.size()));
  }
  const auto h = helstrom(s, 0, 1);
  Herm2 K;
  if (h.h.lo() >= -tol.psd_tol) {
    K = s.weighted_state(0);
  } else if (h.h.hi() <= tol.psd_tol) {
    K = s.weighted_state(1);
  } else {
    const double pg = 0.5 * (1.0 + trace_norm(h.h));
    const double r0 = pg - s.prior(0);
    const Vec3 s0 = -h.h_vec.normalized();
    K = s.weighted_state(0) + r0 * Herm2{0.5, 0.5 * s0};
  }
  return assemble(s, K, tol);
}

DiscriminationSolution solve_general(const Ensemble& s, const SolverOptions& opts) {
  opts.tol.validate();
  const Centres p(s);
  const std::size_t n = p.size();

  double lower = *std::max_element(p.a.begin(), p.a.end());
  Vec3 kappa = Vec3::Zero();
  for (std::size_t x = 0; x < n; ++x) kappa += s.prior(x) * p.c[x];

  std::size_t arg = 0;
  double f = p.value(kappa, &arg);
  Vec3 best_kappa = kappa;
  double best_f = f;
  double level_gap = 0.5 * (best_f - lower);
  std::size_t stall = 0;
  std::size_t attempt = 0;

  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    const Vec3 d = kappa - p.c[arg];
    const double dn = d.norm();
    if (dn == 0.0) {
      // kappa sits on the argmax centre: f = a_arg is a lower bound, hence optimal.
      lower = std::max(lower, f);
    } else {
      const Vec3 g = d / dn;
      const double target = best_f - level_gap;
      kappa -= std::max(f - target, 0.0) * g;
      f = p.value(kappa, &arg);
      if (f < best_f - 1e-15) {
        best_f = f;
        best_kappa = kappa;
        stall = 0;
      } else if (++stall >= 20) {
        level_gap *= 0.5;
        kappa = best_kappa;
        f = p.value(kappa, &arg);
        stall = 0;
      }
    }

    if (it % opts.polish_every == 0 || dn == 0.0) {
      // Widen the candidate window on every attempt; it eventually covers all states.
      const double window = 1e-6 * std::pow(4.0, static_cast<double>(attempt++));
      std::vector<std::size_t> candidates;
      for (std::size_t x = 0; x < n; ++x) {
        const double slack = best_f - p.a[x] - (best_kappa - p.c[x]).norm();
        if (slack <= window) candidates.push_back(x);
      }
      if (auto sol = polish(s, p, candidates, opts)) return *sol;
    }
  }
  throw ConvergenceFailure("no certified optimum after " + std::to_string(opts.max_iter) +
                           " iterations");
}

std::vector<double> povm_weights(const Herm2& K, const Ensemble& s, const IndexSet& identified,
                                 const Tolerances& tol) {
  const std::size_t m = identified.size();
  if (m == 0) throw InfeasibleCompleteness("empty identified set");

  RealMatrix A(4, static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t x = identified[i];
    if (x >= s.size()) throw IndexOutOfRange("index " + std::to_string(x));
    const Herm2 diff = K - s.weighted_state(x);
    if (diff.lo() > tol.psd_tol) {
      throw InfeasibleCompleteness("state " + std::to_string(x) +
                                   " has no zero eigenvalue in K - q_x rho_x");
    }
    if (diff.beta.norm() <= tol.psd_tol) {
      throw InfeasibleCompleteness("state " + std::to_string(x) + " has K = q_x rho_x");
    }
    const auto col = static_cast<Eigen::Index>(i);
    A(0, col) = 1.0;
    A.block<3, 1>(1, col) = -diff.beta.normalized();  // n_x = -s_x
  }
  Eigen::Vector4d b(2.0, 0.0, 0.0, 0.0);

  // The optimum restricted to its support is the minimum-norm solution there,
  // so enumerating supports finds it.
  const std::size_t max_support = m <= kMaxEnumeratedWeights ? m : 4;
  std::optional<RealVector> best;
  double best_norm = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> cols;
  for (std::size_t k = 1; k <= max_support; ++k) {
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      cols.clear();
      for (std::size_t i = 0; i < m; ++i) {
        if (mask[i]) cols.push_back(static_cast<Eigen::Index>(i));
      }
      RealMatrix Af(4, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t j = 0; j < cols.size(); ++j) {
        Af.col(static_cast<Eigen::Index>(j)) = A.col(cols[j]);
      }
      const RealVector wf = pinv(Af, tol) * b;
      if ((Af * wf - b).norm() > tol.psd_tol || wf.minCoeff() < -1e-12) continue;
      const double nrm = wf.norm();
      if (nrm < best_norm) {
        best_norm = nrm;
        RealVector w = RealVector::Zero(static_cast<Eigen::Index>(m));
        for (std::size_t j = 0; j < cols.size(); ++j) {
          w(cols[j]) = std::max(0.0, wf(static_cast<Eigen::Index>(j)));
        }
        best = w;
      }
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  if (!best) throw InfeasibleCompleteness("no nonnegative weights complete the POVM");
  return {best->data(), best->data() + best->size()};
}

std::vector<Herm2> povm_from_weights(const Herm2& K, const Ensemble& s, const IndexSet& identified,
                                     const std::vector<double>& weights) {
  std::vector<Herm2> povm(s.size(), Herm2{});
  for (std::size_t i = 0; i < identified.size(); ++i) {
    const std::size_t x = identified[i];
    const Vec3 n = -(K - s.weighted_state(x)).beta.normalized();
    povm[x] = Herm2{0.5 * weights.at(i), 0.5 * weights.at(i) * n};
  }
  return povm;
}

double success_probability(const Ensemble& s, const std::vector<Herm2>& povm) {
  if (povm.size() != s.size()) {
    throw WrongLength("expected " + std::to_string(s.size()) + " POVM elements, got " +
                      std::to_string(povm.size()));
  }
  double total = 0.0;
  for (std::size_t x = 0; x < s.size(); ++x) {
    total += s.prior(x) * trace_product(povm.at(x), s.state(x));
  }
  return total;
}

namespace {

// Success probability of a random rank-one k-outcome POVM E_j = T v_j v_j^dag T
// with T = S^(-1/2), S = sum_j v_j v_j^dag; each outcome goes to its best state.
template <int K>
double random_povm_value(const Ensemble& s, std::mt19937_64& rng,
                         std::normal_distribution<double>& gauss) {
  std::array<Eigen::Vector2cd, K> v;
  Complex2 S = Complex2::Zero();
  for (auto& vj : v) {
    for (Eigen::Index r = 0; r < 2; ++r) {
      const double re = gauss(rng);
      vj(r) = {re, gauss(rng)};
    }
    S += vj * vj.adjoint();
  }
  const Herm2 sb = Herm2::from_matrix(S);
  const double n = sb.beta.norm();
  const double ihi = 1.0 / std::sqrt(sb.alpha + n), ilo = 1.0 / std::sqrt(sb.alpha - n);
  const Vec3 axis = n > 0.0 ? Vec3(sb.beta / n) : Vec3::UnitZ();
  const Complex2 T = Herm2{0.5 * (ihi + ilo), 0.5 * (ihi - ilo) * axis}.to_matrix();
  double value = 0.0;
  for (const auto& vj : v) {
    const Eigen::Vector2cd w = T * vj;
    const Herm2 element = Herm2::from_matrix(w * w.adjoint());
    double outcome = 0.0;
    for (std::size_t x = 0; x < s.size(); ++x) {
      outcome = std::max(outcome, s.prior(x) * trace_product(element, s.state(x)));
    }
    value += outcome;
  }
  return value;
}

}  // namespace

double oracle_random_search(const Ensemble& s, std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    double value = 0.0;
    switch (i % 3) {
      case 0: value = random_povm_value<2>(s, rng, gauss); break;
      case 1: value = random_povm_value<3>(s, rng, gauss); break;
      default: value = random_povm_value<4>(s, rng, gauss); break;
    }
    best = std::max(best, value);
  }
  return best;
}

std::vector<std::string> invariant_violations(const Ensemble& s, const DiscriminationSolution& sol,
                                              const Tolerances& tol) {
  std::vector<std::string> out;
  auto fail = [&](const std::string& what, std::size_t x) {
    out.push_back(what + " (state " + std::to_string(x) + ")");
  };
  if (std::abs(sol.p_guess - sol.K.trace()) > tol.match_tol) out.push_back("P_g != tr K");
  Herm2 total;
  for (std::size_t x = 0; x < s.size(); ++x) {
    const Herm2 diff = sol.K - s.weighted_state(x);
    if (!diff.is_psd(tol.psd_tol)) fail("K - q_x rho_x is not PSD", x);
    if (std::abs(sol.p_guess - s.prior(x) - sol.r[x]) > tol.match_tol) fail("P_g != q_x + r_x", x);
    total += sol.povm[x];
    if (!sol.povm[x].is_psd(tol.psd_tol)) fail("POVM element is not PSD", x);
  }
  if (total.max_abs_diff(Herm2::identity()) > tol.match_tol) out.push_back("sum of POVM elements != I");
  for (auto x : sol.identified) {
    const Herm2 diff = sol.K - s.weighted_state(x);
    if (std::abs(diff.lo()) > tol.psd_tol) fail("K - q_x rho_x has no zero eigenvalue", x);
    if (!sol.comp_states[x]) continue;
    const Herm2 sigma = sol.comp_state(x);
    if ((s.weighted_state(x) + sol.r[x] * sigma).max_abs_diff(sol.K) > tol.match_tol) {
      fail("K != q_x rho_x + r_x sigma_x", x);
    }
    if (std::abs(trace_product(sol.povm[x], sigma)) > tol.match_tol) fail("tr(M_x sigma_x) != 0", x);
  }
  for (std::size_t i = 0; i < sol.identified.size(); ++i) {
    for (std::size_t j = i + 1; j < sol.identified.size(); ++j) {
      const std::size_t x = sol.identified[i], y = sol.identified[j];
      if (!sol.comp_states[x] || !sol.comp_states[y]) continue;
      const Herm2 rhs = sol.r[y] * sol.comp_state(y) - sol.r[x] * sol.comp_state(x);
      if (helstrom(s, x, y).h.max_abs_diff(rhs) > tol.match_tol) fail("h_xy != r_y sigma_y - r_x sigma_x", x);
    }
  }
  return out;
}

}  // namespace ompkit
