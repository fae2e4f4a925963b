#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ompkit/channel.hpp"
#include "ompkit/discrimination.hpp"
#include "ompkit/ensemble.hpp"
#include "ompkit/errors.hpp"
#include "ompkit/omp_check.hpp"
#include "ompkit/omp_construct.hpp"
#include "ompkit/reference.hpp"

namespace py = pybind11;
using namespace ompkit;

namespace {

Ensemble make_ensemble(const std::vector<std::pair<double, Vec3>>& states) {
  std::vector<WeightedState> raw;
  for (const auto& [q, v] : states) raw.push_back({q, v});
  return Ensemble::validate(std::move(raw));
}

}  // namespace

PYBIND11_MODULE(_ompkit, m) {
  m.doc() = "Minimum-error discrimination and OMP channels for qubit ensembles";

  py::register_exception<Error>(m, "OmpkitError", PyExc_ValueError);

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("psd_tol", &Tolerances::psd_tol)
      .def_readwrite("rank_tol", &Tolerances::rank_tol)
      .def_readwrite("match_tol", &Tolerances::match_tol);

  py::class_<Herm2>(m, "Herm2")
      .def(py::init<double, const Vec3&>(), py::arg("alpha"), py::arg("beta"))
      .def_readonly("alpha", &Herm2::alpha)
      .def_readonly("beta", &Herm2::beta)
      .def("trace", &Herm2::trace)
      .def("eigenvalues", [](const Herm2& a) { return std::make_pair(a.lo(), a.hi()); })
      .def("to_matrix", &Herm2::to_matrix)
      .def("__repr__", [](const Herm2& a) {
        return "Herm2(alpha=" + std::to_string(a.alpha) + ")";
      });

  py::class_<Ensemble>(m, "Ensemble")
      .def(py::init(&make_ensemble), py::arg("states"),
           "Build from a list of (prior, bloch_vector) pairs.")
      .def("__len__", &Ensemble::size)
      .def("prior", &Ensemble::prior)
      .def("bloch", &Ensemble::bloch)
      .def("is_equiprobable", &Ensemble::is_equiprobable, py::arg("tol") = 1e-12);

  py::enum_<CaseTag>(m, "CaseTag")
      .value("NO_MEASUREMENT", CaseTag::kNoMeasurement)
      .value("NEVER_IDENTIFIED", CaseTag::kNeverIdentified)
      .value("PROJECTIVE_ELEMENT", CaseTag::kProjectiveElement);

  py::class_<DiscriminationSolution>(m, "DiscriminationSolution")
      .def_readonly("K", &DiscriminationSolution::K)
      .def_readonly("p_guess", &DiscriminationSolution::p_guess)
      .def_readonly("r", &DiscriminationSolution::r)
      .def_readonly("comp_states", &DiscriminationSolution::comp_states)
      .def_readonly("identified", &DiscriminationSolution::identified)
      .def_readonly("case_tags", &DiscriminationSolution::case_tags)
      .def_readonly("povm_weights", &DiscriminationSolution::povm_weights)
      .def_readonly("povm", &DiscriminationSolution::povm);

  m.def("solve", [](const Ensemble& s) { return solve_general(s); }, py::arg("ensemble"));
  m.def("solve_two_state", [](const Ensemble& s) { return solve_two_state(s); },
        py::arg("ensemble"));
  m.def("oracle_random_search", &oracle_random_search, py::arg("ensemble"), py::arg("samples"),
        py::arg("seed"));
  m.def("invariant_violations",
        [](const Ensemble& s, const DiscriminationSolution& sol) {
          return invariant_violations(s, sol);
        });

  py::class_<QubitChannel>(m, "QubitChannel")
      .def(py::init<const Mat3&, const Vec3&>(), py::arg("D"), py::arg("t"))
      .def_static("identity", &QubitChannel::identity)
      .def_static("depolarizing", &QubitChannel::depolarizing, py::arg("eta"))
      .def_static("unitary", &QubitChannel::unitary, py::arg("axis"), py::arg("angle"))
      .def_property_readonly("D", &QubitChannel::D)
      .def_property_readonly("t", &QubitChannel::t)
      .def("apply", [](const QubitChannel& c, const Vec3& v) { return c.apply(v); })
      .def("choi_matrix", &QubitChannel::choi_matrix)
      .def("is_cptp", [](const QubitChannel& c, double tol) {
        return is_cptp_choi(c, tol) == CptpVerdict::kCptp;
      }, py::arg("tol") = 1e-9)
      .def("singular_values", [](const QubitChannel& c) { return c.canonical_form().lambdas; });

  py::class_<OmpReport>(m, "OmpReport")
      .def_readonly("is_omp", &OmpReport::is_omp)
      .def_readonly("delta", &OmpReport::delta)
      .def_readonly("residuals", &OmpReport::residuals)
      .def_readonly("r_bound_ok", &OmpReport::r_bound_ok)
      .def_readonly("index_set", &OmpReport::index_set)
      .def_readonly("p_guess_before", &OmpReport::p_guess_before)
      .def_readonly("p_guess_after", &OmpReport::p_guess_after)
      .def_readonly("cross_check_ok", &OmpReport::cross_check_ok)
      .def_property_readonly("mode", [](const OmpReport& r) { return to_string(r.mode); });

  m.def("check_omp",
        [](const Ensemble& s, const DiscriminationSolution& sol, const QubitChannel& c,
           const IndexSet& I) { return check_omp(s, sol, I, c); },
        py::arg("ensemble"), py::arg("solution"), py::arg("channel"),
        py::arg("index_set") = IndexSet{});

  py::class_<OmpSystem>(m, "OmpSystem")
      .def_readonly("index_set", &OmpSystem::index_set)
      .def_readonly("H", &OmpSystem::H)
      .def_readonly("qdiff", &OmpSystem::qdiff)
      .def_readonly("W", &OmpSystem::W)
      .def_readonly("Q", &OmpSystem::Q)
      .def_readonly("b", &OmpSystem::b);

  py::class_<OmpFamily>(m, "OmpFamily")
      .def_readonly("x_particular", &OmpFamily::x_particular)
      .def_readonly("null_basis", &OmpFamily::null_basis)
      .def_property_readonly("dim", &OmpFamily::dim)
      .def("point", &OmpFamily::point);

  m.def("build_system",
        [](const Ensemble& s, const DiscriminationSolution& sol, const IndexSet& I) {
          return build_system(s, sol, I);
        },
        py::arg("ensemble"), py::arg("solution"), py::arg("index_set") = IndexSet{});
  m.def("solve_family", [](const OmpSystem& sys) { return solve_family(sys); });
  m.def("unital_family", [](const OmpSystem& sys) { return unital_family(sys); });
  m.def("delta_slice", [](const OmpFamily& f, double d) { return delta_slice(f, d); });
  m.def("unpack", [](const RealVector& x) {
    const auto u = unpack(x);
    return std::make_pair(u.channel, u.delta);
  });
  m.def("sieve",
        [](const OmpFamily& fam, const Ensemble& s, const DiscriminationSolution& sol,
           std::size_t count, std::uint64_t seed, double box) {
          SieveConfig cfg{count, seed, box};
          std::vector<std::pair<QubitChannel, double>> out;
          for (const auto& k : sieve_admissible(fam, s, sol, {}, cfg).kept) {
            out.emplace_back(k.channel, k.delta);
          }
          return out;
        },
        py::arg("family"), py::arg("ensemble"), py::arg("solution"), py::arg("count") = 1000,
        py::arg("seed") = 20200630, py::arg("box") = 2.0);

  auto ref = m.def_submodule("reference", "Built-in example ensembles");
  ref.def("one_basis", &reference::one_basis, py::arg("q1") = 2.0 / 3.0);
  ref.def("bb84", &reference::bb84);
  ref.def("three_mubs", &reference::three_mubs);
  ref.def("sic", &reference::sic);
  ref.def("unequal_priors", &reference::unequal_priors);
}
