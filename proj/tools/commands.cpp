#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <limits>
#include <sstream>

#include "embedded_data.hpp"
#include "ompkit/errors.hpp"

namespace ompkit::cli {

namespace {

constexpr std::uint64_t kDefaultSeed = 20200630;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json envelope(const std::string& command, const CommonOptions& opts) {
  json doc = {{"tool", "ompkit"},
              {"version", OMPKIT_VERSION},
              {"command", command},
              {"tolerances", to_json(opts.tol)}};
  if (opts.timestamp) doc["timestamp"] = utc_timestamp();
  return doc;
}

DiscriminationSolution solve(const Ensemble& s, const Tolerances& tol) {
  SolverOptions so;
  so.tol = tol;
  return solve_general(s, so);
}

json sieve_to_json(const SieveResult& r, const FamilyOptions& fam) {
  json kept = json::array();
  for (const auto& k : r.kept) {
    kept.push_back({{"sample", k.index},
                    {"delta", k.delta},
                    {"D", to_json(RealMatrix(k.channel.D()))},
                    {"t", to_json(k.channel.t())}});
  }
  return {{"samples", fam.samples},
          {"seed", fam.seed},
          {"box", fam.box},
          {"drawn", r.drawn},
          {"kept_count", r.kept.size()},
          {"rejected_delta", r.rejected_delta},
          {"rejected_cptp", r.rejected_cptp},
          {"rejected_check", r.rejected_check},
          {"kept", kept}};
}

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json parametrization_to_json(const Parametrization& p) {
  json free = json::array(), deps = json::array();
  for (auto f : p.free) free.push_back(unknown_name(f));
  for (std::size_t k = 0; k < p.dependent.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    json terms = json::object();
    std::string expr = std::string(unknown_name(p.dependent[k])) + " = " + format_number(p.offset(row));
    for (std::size_t f = 0; f < p.free.size(); ++f) {
      const double c = p.coeffs(row, static_cast<Eigen::Index>(f));
      if (std::abs(c) <= 1e-12) continue;
      terms[unknown_name(p.free[f])] = c;
      expr += (c < 0 ? " - " : " + ") + format_number(std::abs(c)) + "*" + unknown_name(p.free[f]);
    }
    deps.push_back({{"name", unknown_name(p.dependent[k])},
                    {"offset", p.offset(row)},
                    {"terms", terms},
                    {"expression", expr}});
  }
  return {{"free", free}, {"dependent", deps}};
}

// ---- examples -------------------------------------------------------------

struct Field {
  std::string name;
  double computed;
  double expected;
  double tol;
  bool ok() const { return std::isfinite(computed) && std::abs(computed - expected) <= tol; }
};

struct Outcome {
  std::string name;
  std::vector<Field> fields;
  std::vector<std::string> notes;
  bool pass() const {
    for (const auto& f : fields) {
      if (!f.ok()) return false;
    }
    return true;
  }
  void add(const std::string& n, double c, double e, double t) { fields.push_back({n, c, e, t}); }
  void add_matrix(const std::string& n, const RealMatrix& c, const RealMatrix& e, double t) {
    if (c.rows() != e.rows() || c.cols() != e.cols()) {
      add(n + ".shape", static_cast<double>(c.size()), static_cast<double>(e.size()), 0.0);
      return;
    }
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.cols(); ++j) {
        add(n + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", c(i, j), e(i, j), t);
      }
    }
  }
};

Ensemble embedded(std::string_view name) {
  for (const auto& [key, text] : kEmbeddedEnsembles) {
    if (key == name) return ensemble_from_json(json::parse(text));
  }
  throw ParseError("no embedded ensemble named " + std::string(name));
}

std::string intervals_text(const std::vector<std::pair<double, double>>& iv) {
  std::ostringstream os;
  os << std::setprecision(6);
  for (std::size_t i = 0; i < iv.size(); ++i) {
    os << (i ? " U " : "") << "[" << iv[i].first << ", " << iv[i].second << "]";
  }
  return iv.empty() ? "empty" : os.str();
}

// Deterministic, generic coefficient vectors for probing a family.
std::vector<RealVector> probes(Eigen::Index dim) {
  std::vector<RealVector> out;
  for (int k = 1; k <= 3; ++k) {
    RealVector c(dim);
    for (Eigen::Index i = 0; i < dim; ++i) c(i) = std::sin(1.7 * k + 0.9 * static_cast<double>(i));
    out.push_back(c);
  }
  return out;
}

// Largest deviation of family members from D = (1 - k delta) I.
double scalar_family_residual(const OmpFamily& fam, double k) {
  double worst = 0.0;
  for (const auto& c : probes(fam.dim())) {
    const auto u = unpack(fam.point(c));
    const Mat3 expect = (1.0 - k * u.delta) * Mat3::Identity();
    worst = std::max(worst, (u.channel.D() - expect).cwiseAbs().maxCoeff());
  }
  return worst;
}

Outcome example_one_basis(const Tolerances& tol) {
  Outcome o{"one-basis", {}, {}};
  const Ensemble s = embedded("one-basis");
  const auto sol = solve(s, tol);
  const auto sys = build_system(s, sol);
  const double qd = s.prior(0) - s.prior(1);
  o.add("p_guess", sol.p_guess, 1.0, 1e-8);
  o.add_matrix("H", sys.H, RealMatrix{{0.0, 0.0, 1.0}}, 1e-12);
  o.add_matrix("w", sys.W, RealMatrix{{0.0, 0.0, -2.0}}, 1e-9);
  o.add("q", sys.qdiff(0), qd, 1e-12);

  const double delta = 0.1;
  const auto slice = delta_slice(solve_family(sys, tol), delta, tol);
  double worst = 0.0;
  for (const auto& c : probes(slice.dim())) {
    const auto u = unpack(slice.point(c));
    const Mat3& D = u.channel.D();
    const Vec3& t = u.channel.t();
    worst = std::max({worst, std::abs(D(0, 2) + qd * t(0)), std::abs(D(1, 2) + qd * t(1)),
                      std::abs(D(2, 2) - (1.0 - 2.0 * delta - qd * t(2))),
                      std::abs(u.delta - delta)});
  }
  o.add("fixed-delta third column residual", worst, 0.0, 1e-8);

  const auto unital = delta_slice(unital_family(sys, tol), delta, tol);
  worst = 0.0;
  for (const auto& c : probes(unital.dim())) {
    const Mat3 D = unpack(unital.point(c)).channel.D();
    worst = std::max({worst, std::abs(D(0, 2)), std::abs(D(1, 2)),
                      std::abs(D(2, 2) - (1.0 - 2.0 * delta))});
  }
  o.add("unital third column residual", worst, 0.0, 1e-8);
  return o;
}

Outcome example_bb84(const Tolerances& tol) {
  Outcome o{"bb84", {}, {}};
  const Ensemble s = embedded("bb84");
  const auto sol = solve(s, tol);
  o.add("p_guess", sol.p_guess, 0.5, 1e-8);
  o.add("P(M four-outcome)", success_probability(s, sol.povm), 0.5, 1e-8);
  for (const auto& [label, idx] : {std::pair<std::string, IndexSet>{"M_Z", {0, 1}},
                                   std::pair<std::string, IndexSet>{"M_X", {2, 3}}}) {
    const auto w = povm_weights(sol.K, s, idx, tol);
    o.add("P(" + label + ")", success_probability(s, povm_from_weights(sol.K, s, idx, w)), 0.5, 1e-8);
  }

  const auto sys = build_system(s, sol);
  o.add_matrix("H", sys.H, RealMatrix{{0, 0, 0.5}, {-0.25, 0, 0.25}, {0.25, 0, 0.25}}, 1e-12);
  o.add_matrix("s_a1aj", sys.W, RealMatrix{{0, 0, -2}, {1, 0, -1}, {-1, 0, -1}}, 1e-9);

  const auto fam = solve_family(sys, tol);
  o.add("nullity", static_cast<double>(fam.dim()), 7.0, 0.0);
  double worst = 0.0;
  for (const auto& c : probes(fam.dim())) {
    const auto u = unpack(fam.point(c));
    const Mat3& D = u.channel.D();
    const double k = 1.0 - 4.0 * u.delta;
    worst = std::max({worst, std::abs(D(0, 0) - k), std::abs(D(2, 2) - k), std::abs(D(0, 2)),
                      std::abs(D(1, 0)), std::abs(D(1, 2)), std::abs(D(2, 0))});
  }
  o.add("D pattern residual", worst, 0.0, 1e-8);

  // Unital slice y = z = w = 1 - 4 delta.
  auto line_point = [](double delta) {
    const double k = 1.0 - 4.0 * delta;
    Mat3 D;
    D << k, k, 0, 0, k, 0, 0, k, k;
    return pack(QubitChannel(D, Vec3::Zero()), delta);
  };
  const RealVector x0 = line_point(0.0);
  const RealVector dir = line_point(1.0) - x0;
  const double probe_delta = 0.1;
  const Vec3 lam = unpack(line_point(probe_delta)).channel.canonical_form().lambdas.cwiseAbs();
  const double k = 1.0 - 4.0 * probe_delta;
  o.add("|lambda_1|", lam(0), std::sqrt(2.0 - std::sqrt(3.0)) * k, 1e-8);
  o.add("|lambda_2|", lam(1), k, 1e-8);
  o.add("|lambda_3|", lam(2), std::sqrt(2.0 + std::sqrt(3.0)) * k, 1e-8);

  const auto region = admissible_intervals(x0, dir, 0.0, 0.3, sol, {}, 3000, tol);
  o.notes.push_back("unital slice admissible delta: " + intervals_text(region));
  if (!region.empty()) {
    o.add("upper region start", region.back().first, 0.146, 1e-3);
    o.add("upper region end", region.back().second, 0.25, 1e-3);
  } else {
    o.add("upper region start", std::numeric_limits<double>::quiet_NaN(), 0.146, 1e-3);
  }
  bool lower_found = false;
  for (const auto& [a, b] : region) lower_found = lower_found || (a <= 1e-3 && std::abs(b - 0.078) <= 1e-3);
  o.notes.push_back(std::string("reference lower interval [0, 0.078] ") +
                    (lower_found ? "reproduced" : "not reproduced (Choi test fails there)"));

  const RealVector xn = line_point(0.3);
  RealVector tdir = RealVector::Zero(kUnknowns);
  tdir(10) = 1.0;
  const auto t2 = cptp_intervals(xn, tdir, -1.0, 1.0, 4000, tol);
  const bool t2_found = t2.size() == 1 && std::abs(t2.front().second - 0.678) <= 1e-3 &&
                        std::abs(t2.front().first + 0.678) <= 1e-3;
  o.notes.push_back("non-unital slice (delta = 0.3) CPTP t2: " + intervals_text(t2) +
                    "; reference bound 0.678 " + (t2_found ? "reproduced" : "not reproduced"));
  return o;
}

Outcome example_scalar(const std::string& name, const RealMatrix& H, const RealMatrix& w_cols,
                       double p_guess, double k, Eigen::Index nullity, const Tolerances& tol) {
  Outcome o{name, {}, {}};
  const Ensemble s = embedded(name);
  const auto sol = solve(s, tol);
  o.add("p_guess", sol.p_guess, p_guess, 1e-8);
  const auto sys = build_system(s, sol);
  o.add_matrix("H", sys.H, H, 1e-12);
  o.add_matrix("w", RealMatrix(sys.W.transpose()), w_cols, 1e-9);
  const auto fam = solve_family(sys, tol);
  o.add("nullity", static_cast<double>(fam.dim()), static_cast<double>(nullity), 0.0);
  o.add("D = (1 - k delta) I residual", scalar_family_residual(fam, k), 0.0, 1e-8);
  const auto unital = unital_family(sys, tol);
  o.add("unital nullity", static_cast<double>(unital.dim()), 1.0, 0.0);
  o.add("unital D residual", scalar_family_residual(unital, k), 0.0, 1e-8);
  return o;
}

Outcome example_three_mubs(const Tolerances& tol) {
  const RealMatrix H = RealMatrix{{0, 0, 2}, {-1, 0, 1}, {1, 0, 1}, {0, -1, 1}, {0, 1, 1}} / 6.0;
  const RealMatrix w{{0, 1, -1, 0, 0}, {0, 0, 0, 1, -1}, {-2, -1, -1, -1, -1}};
  return example_scalar("three-mubs", H, w, 1.0 / 3.0, 6.0, 4, tol);
}

Outcome example_sic(const Tolerances& tol) {
  const double r2 = std::sqrt(2.0);
  const double c = std::sqrt(2.0 / 3.0);
  const RealMatrix H = RealMatrix{{-2 * r2 / 3, 0, 4.0 / 3},
                                  {r2 / 3, -c, 4.0 / 3},
                                  {r2 / 3, c, 4.0 / 3}} / 4.0;
  const RealMatrix w{{2 * r2 / 3, -r2 / 3, -r2 / 3}, {0, c, -c}, {-4.0 / 3, -4.0 / 3, -4.0 / 3}};
  return example_scalar("sic", H, w, 0.5, 4.0, 4, tol);
}

Outcome example_unequal(const Tolerances& tol) {
  Outcome o{"unequal-3", {}, {}};
  const Ensemble s = embedded("unequal-3");
  const auto sol = solve(s, tol);
  const RealMatrix comp{{-0.796, 0.385, -0.466}, {0.605, -0.713, 0.354}, {0.304, 0.936, 0.178}};
  for (Eigen::Index x = 0; x < 3; ++x) {
    const auto& sx = sol.comp_states[static_cast<std::size_t>(x)];
    for (Eigen::Index i = 0; i < 3; ++i) {
      o.add("s" + std::to_string(x + 1) + "[" + std::to_string(i) + "]",
            sx ? (*sx)(i) : std::numeric_limits<double>::quiet_NaN(), comp(x, i), 1e-3);
    }
  }
  const auto sys = build_system(s, sol);
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  o.add_matrix("H", sys.H,
               RealMatrix{{(1 + r2) / 8, -r3 / 8, 1 / (4 * r2)}, {(1 + r2) / 8, r3 / 8, 1 / (4 * r2)}},
               1e-12);
  o.add_matrix("w", RealMatrix(sys.W.transpose()),
               RealMatrix{{-1.401, -1.100}, {1.098, -0.551}, {-0.821, -0.644}}, 1e-3);

  const auto p = parametrize(solve_family(sys, tol), tol);
  auto term = [&](const std::string& dep, const std::string& var) {
    for (std::size_t k = 0; k < p.dependent.size(); ++k) {
      if (unknown_name(p.dependent[k]) != dep) continue;
      const auto row = static_cast<Eigen::Index>(k);
      if (var.empty()) return p.offset(row);
      for (std::size_t f = 0; f < p.free.size(); ++f) {
        if (unknown_name(p.free[f]) == var) return p.coeffs(row, static_cast<Eigen::Index>(f));
      }
      return 0.0;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const struct {
    const char* dep;
    const char* var;
    double value;
  } golden[] = {
      {"d13", "", 1.707},   {"d13", "d11", -1.707}, {"d13", "delta", -7.075},
      {"d23", "", 0.0},     {"d23", "d21", -1.707}, {"d23", "delta", 1.547},
      {"d33", "", 1.0},     {"d33", "d31", -1.707}, {"d33", "delta", -4.145},
      {"t1", "", 0.0},      {"t1", "d12", -2.598},  {"t1", "delta", 1.808},
      {"t2", "", 2.598},    {"t2", "d22", -2.598},  {"t2", "delta", -9.894},
      {"t3", "", 0.0},      {"t3", "d32", -2.598},  {"t3", "delta", 1.059},
  };
  for (const auto& g : golden) {
    o.add(std::string(g.dep) + (g.var[0] ? std::string("/") + g.var : std::string(" offset")),
          term(g.dep, g.var), g.value, 1e-3);
  }
  return o;
}

json outcome_to_json(const Outcome& o) {
  json fields = json::array();
  for (const auto& f : o.fields) {
    fields.push_back({{"name", f.name},
                      {"computed", f.computed},
                      {"expected", f.expected},
                      {"diff", f.computed - f.expected},
                      {"tol", f.tol},
                      {"ok", f.ok()}});
  }
  return {{"name", o.name}, {"pass", o.pass()}, {"fields", fields}, {"notes", o.notes}};
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OMPKIT_SEED")) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
  }
  return kDefaultSeed;
}

CommandResult cmd_solve(const std::string& ensemble_path, const std::optional<std::string>& measurement,
                        const CommonOptions& opts) {
  const Ensemble s = ensemble_from_json(read_json_file(ensemble_path), opts.tol);
  const auto sol = solve(s, opts.tol);
  CommandResult res;
  res.report = envelope("solve", opts);
  res.report["ensemble"] = ensemble_to_json(s);
  res.report["solution"] = to_json(sol);
  const auto violations = invariant_violations(s, sol, opts.tol);
  res.report["invariant_violations"] = violations;
  if (!violations.empty()) res.exit_code = kExitInvariant;

  if (measurement) {
    const IndexSet idx = parse_labels(*measurement, s.size());
    const auto w = povm_weights(sol.K, s, idx, opts.tol);
    const double achieved = success_probability(s, povm_from_weights(sol.K, s, idx, w));
    const bool optimal = std::abs(achieved - sol.p_guess) <= opts.tol.match_tol;
    res.report["measurement"] = {{"index_set", labels_to_json(idx)},
                                 {"weights", w},
                                 {"success_probability", achieved},
                                 {"optimal", optimal}};
    if (!optimal) res.exit_code = kExitInvariant;
  }
  return res;
}

CommandResult cmd_check(const std::string& ensemble_path, const std::string& channel_path,
                        const std::optional<std::string>& weak, const CommonOptions& opts) {
  const Ensemble s = ensemble_from_json(read_json_file(ensemble_path), opts.tol);
  const QubitChannel c = channel_from_json(read_json_file(channel_path));
  CommandResult res;
  res.report = envelope("check", opts);
  res.report["channel"] = channel_to_json(c);
  const auto canon = c.canonical_form();
  res.report["cptp"] = {{"choi", to_string(is_cptp_choi(c, opts.tol.psd_tol))},
                        {"choi_min_eigenvalue", c.choi_min_eigenvalue()},
                        {"inequalities", to_string(is_cptp_inequalities(canon, opts.tol.psd_tol))},
                        {"canonical_form", to_json(canon)}};
  if (is_cptp_choi(c, opts.tol.psd_tol) != CptpVerdict::kCptp) {
    res.exit_code = kExitNotCptp;
    res.report["error"] = "channel is not completely positive";
    return res;
  }

  const auto sol = solve(s, opts.tol);
  const IndexSet idx = weak ? parse_labels(*weak, s.size()) : IndexSet{};
  const auto rep = check_omp(s, sol, idx, c, opts.tol);
  res.report["p_guess"] = sol.p_guess;
  res.report["omp"] = to_json(rep);
  res.report["pg_preserving"] = check_pg_preserving(s, c, opts.tol);

  if (s.is_equiprobable() && !weak) {
    const auto eq = check_equiprobable(s, sol, c, opts.tol);
    res.report["equiprobable"] = {{"is_omp", eq.is_omp},
                                  {"kappa", eq.kappa},
                                  {"delta", eq.delta},
                                  {"residual", eq.residual}};
  }
  if (s.size() == 2 && sol.identified.size() == 2) {
    const auto two = check_two_state(s, c, opts.tol);
    res.report["two_state"] = {{"is_omp", two.is_omp},   {"lambda", two.lambda},
                               {"mu", two.mu},           {"delta", two.delta},
                               {"residual", two.residual}, {"lambda_min", two.lambda_min},
                               {"range_ok", two.range_ok}};
  }
  try {
    const auto u = check_unitary_propositions(s, sol, idx, c, opts.tol);
    res.report["unitary"] = {{"is_omp", u.is_omp}, {"delta", u.delta}, {"rule", u.rule}};
  } catch (const NotUnitary&) {
  }
  res.exit_code = rep.is_omp ? kExitOk : kExitNegative;
  return res;
}

CommandResult cmd_family(const std::string& ensemble_path, const FamilyOptions& fo,
                         const CommonOptions& opts) {
  const Ensemble s = ensemble_from_json(read_json_file(ensemble_path), opts.tol);
  const auto sol = solve(s, opts.tol);
  const IndexSet idx = fo.measurement ? parse_labels(*fo.measurement, s.size()) : IndexSet{};
  const auto sys = build_system(s, sol, idx);
  OmpFamily fam = fo.unital ? unital_family(sys, opts.tol) : solve_family(sys, opts.tol);
  if (fo.fixed_delta) fam = delta_slice(fam, *fo.fixed_delta, opts.tol);

  SieveConfig cfg;
  cfg.count = fo.samples;
  cfg.seed = fo.seed;
  cfg.box = fo.box;
  const auto sieve = sieve_admissible(fam, s, sol, idx, cfg, opts.tol);

  CommandResult res;
  res.report = envelope("family", opts);
  res.report["p_guess"] = sol.p_guess;
  res.report["index_set"] = labels_to_json(sys.index_set);
  res.report["unital"] = fo.unital;
  if (fo.fixed_delta) res.report["fixed_delta"] = *fo.fixed_delta;
  res.report["system"] = {{"H", to_json(sys.H)},
                          {"qdiff", to_json(sys.qdiff)},
                          {"w", to_json(RealMatrix(sys.W.transpose()))},
                          {"Q", to_json(sys.Q)},
                          {"b", to_json(sys.b)}};
  json basis = json::array();
  for (Eigen::Index i = 0; i < fam.dim(); ++i) basis.push_back(to_json(RealVector(fam.null_basis.col(i))));
  res.report["family"] = {{"x_particular", to_json(fam.x_particular)},
                          {"null_basis", basis},
                          {"nullity", fam.dim()},
                          {"parametrization", parametrization_to_json(parametrize(fam, opts.tol))}};
  res.report["sieve"] = sieve_to_json(sieve, fo);
  return res;
}

CommandResult cmd_examples(const ExamplesOptions& ex, const CommonOptions& opts) {
  std::vector<Outcome> outcomes{example_one_basis(opts.tol), example_bb84(opts.tol),
                                example_three_mubs(opts.tol), example_sic(opts.tol),
                                example_unequal(opts.tol)};
  bool known = ex.corrupt.empty();
  for (auto& o : outcomes) {
    if (o.name == ex.corrupt && !o.fields.empty()) {
      o.fields.front().expected += 1.0;
      known = true;
    }
  }
  if (!known) throw ParseError("no example named " + ex.corrupt);

  CommandResult res;
  res.report = envelope("examples", opts);
  json list = json::array();
  std::ostringstream text;
  std::size_t passed = 0;
  text << std::left << std::setw(12) << "EXAMPLE" << std::setw(8) << "RESULT" << "FIELDS\n";
  for (const auto& o : outcomes) {
    list.push_back(outcome_to_json(o));
    std::size_t ok = 0;
    for (const auto& f : o.fields) ok += f.ok() ? 1 : 0;
    passed += o.pass() ? 1 : 0;
    text << std::setw(12) << o.name << std::setw(8) << (o.pass() ? "PASS" : "FAIL") << ok << "/"
         << o.fields.size() << "\n";
    for (const auto& f : o.fields) {
      if (f.ok()) continue;
      text << "  " << f.name << ": computed " << format_number(f.computed) << ", expected "
           << format_number(f.expected) << ", diff " << format_number(f.computed - f.expected)
           << ", tol " << f.tol << "\n";
    }
    for (const auto& n : o.notes) text << "  NOTE " << n << "\n";
  }
  text << passed << "/" << outcomes.size() << " PASS\n";
  res.report["examples"] = list;
  res.report["passed"] = passed;
  res.report["total"] = outcomes.size();
  res.text = text.str();
  res.exit_code = passed == outcomes.size() ? kExitOk : kExitNegative;
  return res;
}

CommandResult guarded(const std::string& command, const CommonOptions& opts,
                      const std::function<CommandResult()>& body) {
  auto fail = [&](int code, const std::string& kind, const std::string& what) {
    CommandResult res;
    res.exit_code = code;
    res.report = envelope(command, opts);
    res.report["error"] = {{"kind", kind}, {"message", what}};
    return res;
  };
  try {
    return body();
  } catch (const ParseError& e) {
    return fail(kExitParse, "parse", e.what());
  } catch (const ChannelNotCPTP& e) {
    return fail(kExitNotCptp, "not_cptp", e.what());
  } catch (const ConvergenceFailure& e) {
    return fail(kExitSolver, "solver", e.what());
  } catch (const Error& e) {
    return fail(kExitInvariant, "invariant", e.what());
  } catch (const json::exception& e) {
    return fail(kExitParse, "parse", e.what());
  }
}

}  // namespace ompkit::cli
