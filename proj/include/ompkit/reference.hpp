#pragma once

// Built-in ensembles used by the examples command and the test suites.

#include <string>
#include <utility>
#include <vector>

#include "ompkit/ensemble.hpp"

namespace ompkit::reference {

/// +z and -z with priors (q1, 1 - q1).
Ensemble one_basis(double q1 = 2.0 / 3.0);
/// +z, -z, +x, -x at 1/4 each.
Ensemble bb84();
/// +z, -z, +x, -x, +y, -y at 1/6 each.
Ensemble three_mubs();
/// Regular tetrahedron at 1/4 each.
Ensemble sic();
/// Three mixed states with priors (1/3, 5/12, 1/4).
Ensemble unequal_priors();

std::vector<std::pair<std::string, Ensemble>> all();

}  // namespace ompkit::reference
