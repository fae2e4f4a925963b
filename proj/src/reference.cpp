#include "ompkit/reference.hpp"

#include <cmath>

namespace ompkit::reference {

Ensemble one_basis(double q1) {
  return Ensemble::validate({{q1, Vec3(0, 0, 1)}, {1.0 - q1, Vec3(0, 0, -1)}});
}

Ensemble bb84() {
  return Ensemble::validate({{0.25, Vec3(0, 0, 1)},
                             {0.25, Vec3(0, 0, -1)},
                             {0.25, Vec3(1, 0, 0)},
                             {0.25, Vec3(-1, 0, 0)}});
}

Ensemble three_mubs() {
  const double q = 1.0 / 6.0;
  return Ensemble::validate({{q, Vec3(0, 0, 1)},
                             {q, Vec3(0, 0, -1)},
                             {q, Vec3(1, 0, 0)},
                             {q, Vec3(-1, 0, 0)},
                             {q, Vec3(0, 1, 0)},
                             {q, Vec3(0, -1, 0)}});
}

Ensemble sic() {
  const double r2 = std::sqrt(2.0);
  return Ensemble::validate({{0.25, Vec3(0, 0, 1)},
                             {0.25, Vec3(2 * r2 / 3, 0, -1.0 / 3)},
                             {0.25, Vec3(-r2 / 3, std::sqrt(2.0 / 3), -1.0 / 3)},
                             {0.25, Vec3(-r2 / 3, -std::sqrt(2.0 / 3), -1.0 / 3)}});
}

Ensemble unequal_priors() {
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  return Ensemble::validate({{1.0 / 3, Vec3(3, 0, 3) / (4 * r2)},
                             {5.0 / 12, Vec3(-3, 3 * r3, 0) / 10},
                             {0.25, Vec3(-1, -r3, 0) / 2}});
}

std::vector<std::pair<std::string, Ensemble>> all() {
  return {{"one-basis", one_basis()},
          {"bb84", bb84()},
          {"three-mubs", three_mubs()},
          {"sic", sic()},
          {"unequal-3", unequal_priors()}};
}

}  // namespace ompkit::reference
