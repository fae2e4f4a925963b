#pragma once

// File formats of the command-line tool. See docs/formats.md.

#include <string>

#include <json.hpp>

#include "ompkit/bloch.hpp"
#include "ompkit/channel.hpp"
#include "ompkit/discrimination.hpp"
#include "ompkit/ensemble.hpp"
#include "ompkit/omp_check.hpp"
#include "ompkit/omp_construct.hpp"

namespace ompkit::cli {

using nlohmann::json;

/// Malformed or invalid input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path);

Ensemble ensemble_from_json(const json& doc, const Tolerances& tol = {});
QubitChannel channel_from_json(const json& doc);
json ensemble_to_json(const Ensemble& s);
json channel_to_json(const QubitChannel& c);

/// Index lists such as "1,2" use 1-based labels.
IndexSet parse_labels(const std::string& text, std::size_t n);
json labels_to_json(const IndexSet& zero_based);

json to_json(const Vec3& v);
json to_json(const RealVector& v);
json to_json(const RealMatrix& m);
json to_json(const Herm2& a);
json to_json(const Tolerances& tol);
json to_json(const DiscriminationSolution& sol);
json to_json(const OmpReport& rep);
json to_json(const CanonicalForm& f);

/// Serialises with every double printed in its shortest exact form (at most
/// 17 significant digits).
std::string dump(const json& doc);

}  // namespace ompkit::cli
