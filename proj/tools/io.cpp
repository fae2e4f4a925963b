#include "io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "ompkit/errors.hpp"

namespace ompkit::cli {

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ParseError(where + ": unknown key '" + key + "'");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing key '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

Vec3 vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) throw ParseError(where + ": expected 3 numbers");
  return {number(v[0], where), number(v[1], where), number(v[2], where)};
}

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Ensemble ensemble_from_json(const json& doc, const Tolerances& tol) {
  reject_unknown_keys(doc, {"states"}, "ensemble");
  const json& states = require(doc, "states", "ensemble");
  if (!states.is_array()) throw ParseError("ensemble: 'states' must be a list");
  std::vector<WeightedState> raw;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    reject_unknown_keys(states[i], {"q", "bloch"}, where);
    raw.push_back({number(require(states[i], "q", where), where + ".q"),
                   vec3(require(states[i], "bloch", where), where + ".bloch")});
  }
  try {
    return Ensemble::validate(std::move(raw), tol);
  } catch (const Error& e) {
    throw ParseError(std::string("ensemble: ") + e.what());
  }
}

QubitChannel channel_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("channel: expected an object");
  try {
    if (doc.contains("kind")) {
      const json& kind = doc.at("kind");
      if (!kind.is_string()) throw ParseError("channel: 'kind' must be a string");
      const auto k = kind.get<std::string>();
      if (k == "depolarizing") {
        reject_unknown_keys(doc, {"kind", "eta"}, "channel");
        return QubitChannel::depolarizing(number(require(doc, "eta", "channel"), "channel.eta"));
      }
      if (k == "unitary") {
        reject_unknown_keys(doc, {"kind", "axis", "angle"}, "channel");
        return QubitChannel::unitary(vec3(require(doc, "axis", "channel"), "channel.axis"),
                                     number(require(doc, "angle", "channel"), "channel.angle"));
      }
      if (k != "affine") throw ParseError("channel: unknown kind '" + k + "'");
    }
    reject_unknown_keys(doc, {"kind", "D", "t"}, "channel");
    const json& D = require(doc, "D", "channel");
    if (!D.is_array() || D.size() != 3) throw ParseError("channel.D: expected 3 rows");
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      m.row(i) = vec3(D[static_cast<std::size_t>(i)], "channel.D").transpose();
    }
    return {m, vec3(require(doc, "t", "channel"), "channel.t")};
  } catch (const BadParameter& e) {
    throw ParseError(std::string("channel: ") + e.what());
  }
}

json ensemble_to_json(const Ensemble& s) {
  json states = json::array();
  for (const auto& st : s.states()) states.push_back({{"q", st.q}, {"bloch", to_json(st.v)}});
  return {{"states", states}};
}

json channel_to_json(const QubitChannel& c) {
  return {{"D", to_json(RealMatrix(c.D()))}, {"t", to_json(c.t())}};
}

IndexSet parse_labels(const std::string& text, std::size_t n) {
  IndexSet out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long label = 0;
    try {
      label = std::stol(item, &pos);
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
    } catch (const std::exception&) {
      throw ParseError("bad index '" + item + "'");
    }
    if (pos != item.size() || label < 1 || static_cast<std::size_t>(label) > n) {
      throw ParseError("index '" + item + "' is not in 1.." + std::to_string(n));
    }
    out.push_back(static_cast<std::size_t>(label - 1));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw ParseError("empty index list");
  return out;
}

json labels_to_json(const IndexSet& zero_based) {
  json out = json::array();
  IndexSet sorted = zero_based;
  std::sort(sorted.begin(), sorted.end());
  for (auto x : sorted) out.push_back(x + 1);
  return out;
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const RealMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(RealVector(m.row(i).transpose())));
  return out;
}

json to_json(const Herm2& a) { return {{"alpha", a.alpha}, {"beta", to_json(a.beta)}}; }

json to_json(const Tolerances& tol) {
  return {{"psd_tol", tol.psd_tol}, {"rank_tol", tol.rank_tol}, {"match_tol", tol.match_tol}};
}

json to_json(const DiscriminationSolution& sol) {
  json comp = json::array(), tags = json::array();
  for (const auto& s : sol.comp_states) comp.push_back(s ? to_json(*s) : json(nullptr));
  for (auto t : sol.case_tags) tags.push_back(to_string(t));
  json povm = json::array();
  for (const auto& m : sol.povm) povm.push_back(to_json(m));
  return {{"K", to_json(sol.K)},
          {"p_guess", sol.p_guess},
          {"r", sol.r},
          {"comp_states", comp},
          {"identified", labels_to_json(sol.identified)},
          {"case_tags", tags},
          {"povm_weights", sol.povm_weights},
          {"povm", povm}};
}

json to_json(const OmpReport& rep) {
  return {{"is_omp", rep.is_omp},
          {"delta", rep.delta},
          {"residuals", rep.residuals},
          {"residual_ok", rep.residual_ok},
          {"r_bound_ok", rep.r_bound_ok},
          {"outside_dominated", rep.outside_dominated},
          {"index_set", labels_to_json(rep.index_set)},
          {"mode", to_string(rep.mode)},
          {"weights", rep.weights},
          {"p_guess_before", rep.p_guess_before},
          {"p_guess_after", rep.p_guess_after},
          {"cross_check_ok", rep.cross_check_ok}};
}

json to_json(const CanonicalForm& f) {
  return {{"lambdas", to_json(f.lambdas)},
          {"t_canon", to_json(f.t_canon)},
          {"O1", to_json(RealMatrix(f.O1))},
          {"O2", to_json(RealMatrix(f.O2))}};
}

std::string dump(const json& doc) { return doc.dump(2); }

}  // namespace ompkit::cli
