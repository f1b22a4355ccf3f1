#pragma once

// JSON encodings shared by the CLI and the tests.
//
// Value: {"n": 2, "scalar": [re, im], "matrix": [[[re, im], ...], ...]},
// where "matrix" is the Hilbert-Schmidt part of the pair. When "scalar" is
// omitted the matrix is read as a plain matrix, i.e. the pair (1, matrix - I).
// Matrix entries may also be bare real numbers.

#include <json.hpp>

#include "spdcone/project.hpp"
#include "spdcone/triple.hpp"

namespace spdcone {

using Json = nlohmann::json;

Json to_json(const UnitizedHermitian& x);
Json to_json(const UnitizedOperator& x);
Json matrix_to_json(const Matrix& m);

Matrix matrix_from_json(const Json& j);
UnitizedOperator operator_from_json(const Json& j);
/// Rejects values whose scalar has a nonzero imaginary part or whose matrix
/// is not Hermitian.
UnitizedHermitian hermitian_from_json(const Json& j);
ConePoint point_from_json(const Json& j);

/// {"kind": "diagonal"|"scalar"|"full", "n"} | {"kind": "block", "n", "k"} |
/// {"kind": "commutant", "y": value} | {"kind": "polynomial", "a": value} |
/// {"kind": "custom", "basis": [value, ...]}. A missing "n" falls back to
/// `default_n`.
TripleSystem system_from_json(const Json& j, int default_n = 0);
Json system_to_json(const TripleSystem& m);

ProjectionOptions options_from_json(const Json& j);
Json to_json(const ProjectionResult& r);

}  // namespace spdcone
