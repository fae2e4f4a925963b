#include "ompkit/omp_construct.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ompkit/errors.hpp"
#include "ompkit/omp_check.hpp"

namespace ompkit {

namespace {

IndexSet resolve(const DiscriminationSolution& sol, const IndexSet& I) {
  IndexSet out = I.empty() ? sol.identified : I;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

OmpFamily family_of(const RealMatrix& A, const RealVector& b, const Tolerances& tol) {
  return {pinv(A, tol) * (A * b), nullspace(A, tol)};
}

}  // namespace

RealVector OmpFamily::point(const RealVector& c) const {
  if (c.size() != dim()) {
    throw WrongLength("expected " + std::to_string(dim()) + " coefficients, got " +
                      std::to_string(c.size()));
  }
  return x_particular + null_basis * c;
}

OmpSystem build_system(const Ensemble& s, const DiscriminationSolution& sol, const IndexSet& I) {
  OmpSystem sys;
  sys.index_set = resolve(sol, I);
  for (auto x : sys.index_set) {
    if (x >= s.size()) throw IndexOutOfRange("index " + std::to_string(x));
  }
  if (sys.index_set.size() < 2) {
    throw PairSetTooSmall("need at least two identified states, got " +
                          std::to_string(sys.index_set.size()));
  }
  const auto rows = static_cast<Eigen::Index>(sys.index_set.size() - 1);
  const std::size_t a1 = sys.index_set.front();
  sys.H.resize(rows, 3);
  sys.qdiff.resize(rows);
  sys.W.resize(rows, 3);
  for (Eigen::Index j = 0; j < rows; ++j) {
    const std::size_t aj = sys.index_set[static_cast<std::size_t>(j) + 1];
    sys.H.row(j) = helstrom(s, a1, aj).h_vec.transpose();
    sys.qdiff(j) = s.prior(a1) - s.prior(aj);
    const Herm2 sa = sol.comp_state(a1), sb = sol.comp_state(aj);
    sys.W.row(j) = (2.0 * (sa.beta - sb.beta)).transpose();
  }

  sys.Q = RealMatrix::Zero(3 * rows, kUnknowns);
  for (Eigen::Index i = 0; i < 3; ++i) {
    sys.Q.block(i * rows, 3 * i, rows, 3) = sys.H;
    sys.Q.block(i * rows, 9 + i, rows, 1) = sys.qdiff;
    sys.Q.block(i * rows, kDeltaSlot, rows, 1) = -sys.W.col(i);
  }
  sys.b = pack(QubitChannel::identity(), 0.0);
  return sys;
}

OmpFamily solve_family(const OmpSystem& sys, const Tolerances& tol) {
  return family_of(sys.Q, sys.b, tol);
}

OmpFamily unital_family(const OmpSystem& sys, const Tolerances& tol) {
  RealMatrix A(sys.Q.rows() + 3, kUnknowns);
  A.topRows(sys.Q.rows()) = sys.Q;
  A.bottomRows(3).setZero();
  for (Eigen::Index i = 0; i < 3; ++i) A(sys.Q.rows() + i, 9 + i) = 1.0;
  return family_of(A, sys.b, tol);
}

OmpFamily delta_slice(const OmpFamily& fam, double delta, const Tolerances& tol) {
  const RealVector row = fam.null_basis.row(kDeltaSlot).transpose();
  const double gap = delta - fam.x_particular(kDeltaSlot);
  const double n2 = row.squaredNorm();
  if (n2 <= tol.rank_tol * tol.rank_tol) {
    if (std::abs(gap) > tol.match_tol) {
      throw DeltaUnreachable("delta is fixed at " + std::to_string(fam.x_particular(kDeltaSlot)) +
                             " in this family");
    }
    return fam;
  }
  OmpFamily out;
  out.x_particular = fam.x_particular + fam.null_basis * (row * (gap / n2));
  out.x_particular(kDeltaSlot) = delta;
  out.null_basis = fam.null_basis * nullspace(row.transpose(), tol);
  return out;
}

UnpackedChannel unpack(const RealVector& x) {
  if (x.size() != kUnknowns) {
    throw WrongLength("expected 13 unknowns, got " + std::to_string(x.size()));
  }
  Mat3 D;
  for (Eigen::Index i = 0; i < 3; ++i) D.row(i) = x.segment<3>(3 * i).transpose();
  return {QubitChannel(D, x.segment<3>(9)), x(kDeltaSlot)};
}

RealVector pack(const QubitChannel& c, double delta) {
  RealVector x(kUnknowns);
  for (Eigen::Index i = 0; i < 3; ++i) x.segment<3>(3 * i) = c.D().row(i).transpose();
  x.segment<3>(9) = c.t();
  x(kDeltaSlot) = delta;
  return x;
}

const char* unknown_name(Eigen::Index i) {
  static const char* const names[] = {"d11", "d12", "d13", "d21", "d22", "d23", "d31",
                                      "d32", "d33", "t1",  "t2",  "t3",  "delta"};
  return (i >= 0 && i < kUnknowns) ? names[i] : "?";
}

Parametrization parametrize(const OmpFamily& fam, const Tolerances& tol) {
  Parametrization p;
  const Eigen::Index dim = fam.dim();
  std::vector<Eigen::Index> order{kDeltaSlot};
  for (Eigen::Index i = 0; i < kDeltaSlot; ++i) order.push_back(i);

  RealMatrix picked(0, dim);
  for (auto i : order) {
    if (static_cast<Eigen::Index>(p.free.size()) == dim) break;
    RealMatrix trial(picked.rows() + 1, dim);
    trial << picked, fam.null_basis.row(i);
    // The basis is orthonormal, so rank is judged on an absolute scale.
    const RealVector sv = Eigen::JacobiSVD<RealMatrix>(trial).singularValues();
    if ((sv.array() > tol.rank_tol).count() > picked.rows()) {
      picked = trial;
      p.free.push_back(i);
    }
  }
  std::sort(p.free.begin(), p.free.end(), [](Eigen::Index a, Eigen::Index b) {
    // delta first, then the natural order
    if (a == kDeltaSlot || b == kDeltaSlot) return a == kDeltaSlot && b != kDeltaSlot;
    return a < b;
  });
  for (Eigen::Index i = 0; i < kUnknowns; ++i) {
    if (std::find(p.free.begin(), p.free.end(), i) == p.free.end()) p.dependent.push_back(i);
  }

  const auto nf = static_cast<Eigen::Index>(p.free.size());
  const auto nd = static_cast<Eigen::Index>(p.dependent.size());
  RealMatrix NF(nf, dim), ND(nd, dim);
  RealVector xF(nf), xD(nd);
  for (Eigen::Index k = 0; k < nf; ++k) {
    NF.row(k) = fam.null_basis.row(p.free[static_cast<std::size_t>(k)]);
    xF(k) = fam.x_particular(p.free[static_cast<std::size_t>(k)]);
  }
  for (Eigen::Index k = 0; k < nd; ++k) {
    ND.row(k) = fam.null_basis.row(p.dependent[static_cast<std::size_t>(k)]);
    xD(k) = fam.x_particular(p.dependent[static_cast<std::size_t>(k)]);
  }
  p.coeffs = nf > 0 ? RealMatrix(ND * NF.inverse()) : RealMatrix::Zero(nd, 0);
  p.offset = xD - p.coeffs * xF;
  return p;
}

bool is_admissible(const RealVector& x, const DiscriminationSolution& sol, const IndexSet& I,
                   const Tolerances& tol) {
  const auto u = unpack(x);
  if (u.delta < 0.0 || u.delta > sol.min_r(resolve(sol, I)) + tol.match_tol) return false;
  return is_cptp_choi(u.channel, tol.psd_tol) == CptpVerdict::kCptp;
}

SieveResult sieve_admissible(const OmpFamily& fam, const Ensemble& s,
                             const DiscriminationSolution& sol, const IndexSet& I,
                             const SieveConfig& cfg, const Tolerances& tol) {
  if (cfg.count < 1) throw BadParameter("sample count must be at least 1");
  if (!(cfg.box > 0.0)) throw BadParameter("coefficient box must be positive");
  const IndexSet idx = resolve(sol, I);
  const double r_min = sol.min_r(idx);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coef(-cfg.box, cfg.box);
  SieveResult out;
  for (std::size_t k = 0; k < cfg.count; ++k) {
    RealVector c(fam.dim());
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = coef(rng);
    ++out.drawn;
    const auto u = unpack(fam.point(c));
    if (u.delta < 0.0 || u.delta > r_min + tol.match_tol) {
      ++out.rejected_delta;
      continue;
    }
    if (is_cptp_choi(u.channel, tol.psd_tol) != CptpVerdict::kCptp) {
      ++out.rejected_cptp;
      continue;
    }
    if (!check_omp(s, sol, idx, u.channel, tol).is_omp) {
      ++out.rejected_check;
      continue;
    }
    out.kept.push_back({k, c, u.channel, u.delta});
  }
  return out;
}

std::vector<std::pair<double, double>> scan_intervals(const std::function<bool(double)>& pred,
                                                      double lo, double hi, std::size_t grid) {
  if (!(hi > lo) || grid < 2) throw BadParameter("need lo < hi and grid >= 2");
  auto edge = [&](double a, double b, bool fa) {
    // pred(a) = fa != pred(b); shrink onto the switch point
    for (int it = 0; it < 80 && b - a > 1e-14; ++it) {
      const double m = 0.5 * (a + b);
      (pred(m) == fa ? a : b) = m;
    }
    return fa ? a : b;
  };

  std::vector<std::pair<double, double>> out;
  double prev_u = lo;
  bool prev = pred(lo);
  double start = lo;
  for (std::size_t k = 1; k <= grid; ++k) {
    const double u = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid);
    const bool cur = pred(u);
    if (cur != prev) {
      const double e = edge(prev_u, u, prev);
      if (cur) {
        start = e;
      } else {
        out.emplace_back(start, e);
      }
    }
    prev = cur;
    prev_u = u;
  }
  if (prev) out.emplace_back(start, hi);
  return out;
}

std::vector<std::pair<double, double>> cptp_intervals(const RealVector& x0, const RealVector& dir,
                                                      double lo, double hi, std::size_t grid,
                                                      const Tolerances& tol) {
  return scan_intervals(
      [&](double u) {
        return is_cptp_choi(unpack(x0 + u * dir).channel, tol.psd_tol) == CptpVerdict::kCptp;
      },
      lo, hi, grid);
}

std::vector<std::pair<double, double>> admissible_intervals(
    const RealVector& x0, const RealVector& dir, double lo, double hi,
    const DiscriminationSolution& sol, const IndexSet& I, std::size_t grid,
    const Tolerances& tol) {
  return scan_intervals([&](double u) { return is_admissible(x0 + u * dir, sol, I, tol); }, lo,
                        hi, grid);
}

}  // namespace ompkit
