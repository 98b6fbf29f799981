#pragma once

#include <string>

#include <json.hpp>

#include "steinkit/db.hpp"
#include "steinkit/inclusion.hpp"
#include "steinkit/mconvex.hpp"
#include "steinkit/realization.hpp"
#include "steinkit/stein.hpp"
#include "steinkit/types.hpp"

namespace steinkit {

using Json = nlohmann::json;

/// Matrix interchange format: {"rows": r, "cols": c, "re": [[...]], "im":
/// [[...]]} with row-major nested arrays; "im" may be omitted (zeros).
/// Serialization of doubles is shortest-round-trip, hence lossless.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"H": <matrix>, "alpha": a, "closed": bool}
Json stein_set_to_json(const SteinSetSpec& s);
SteinSetSpec stein_set_from_json(const Json& j);

/// {"n": n, "blocks": [<matrix>, ...]}
Json isometry_tuple_to_json(const IsometryTuple& t);
IsometryTuple isometry_tuple_from_json(const Json& j);

/// {"n": n, "m": m, "A": .., "B": .., "C": .., "D": ..}; A, B, C are omitted
/// when n = 0. Also accepted on input: {"n", "m", "R": <flat matrix>}.
Json realization_to_json(const RealizationArray& r);
RealizationArray realization_from_json(const Json& j);

/// {"n": n, "members": [<matrix>, ...]} with real members.
Json matrix_set_to_json(const MatrixSet& m);
MatrixSet matrix_set_from_json(const Json& j);

Json stein_gap_report_to_json(const SteinGapReport& r);
Json kyp_certificate_to_json(const KypCertificate& c);

/// {"verdict": "...", "sampled_sup": s, "worst_z": {"re","im"},
///  "certificate": <P matrix> | null}
Json db_verdict_to_json(const DbVerdict& v);

Json trajectory_to_json(const Trajectory& t);

/// Rows "j,norm,member" with member = -1 on the final state (no step taken).
std::string trajectory_to_csv(const Trajectory& t);

/// Parses a JSON document from disk; unreadable files and malformed JSON both
/// surface as JsonParseError.
Json load_json_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace steinkit
