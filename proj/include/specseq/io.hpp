// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "specseq/stencil.hpp"
#include "specseq/ztransform.hpp"

namespace specseq {

using Json = nlohmann::json;

// JSON layouts:
//   matrix    {"dim": d, "re": [[...], ...], "im": [[...], ...]}   im optional
//   vector    {"dim": d, "re": [...], "im": [...]} or a plain real array
//   sequence  {"dim": d, "lo": n, "values": [[[re...], [im...]], ...]}
//             one entry per index from lo; a plain real array is also accepted
//   circle    {"rho": r, "samples": [[[re...], [im...]], ...]}
//   stencil   {"dim": d, "terms": [{"offset": o, "kernel": name, ...}], "forcing": sequence}
//             or a single term object, or {"kernel": "implicit_euler", "h": h, "f": name}

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

Matrix matrix_from_json(const Json& j);
Json matrix_to_json(const Matrix& m);

Vector vector_from_json(const Json& j);
Json vector_to_json(const Vector& v);

WindowedSequence sequence_from_json(const Json& j);
Json sequence_to_json(const WindowedSequence& u);

Json circle_to_json(const CircleFunction& f);

/// default_dim is used when the document carries no "dim" and no matrix to
/// infer it from (0 means none).
StencilMap stencil_from_json(const Json& j, Index default_dim = 0);

std::vector<Vector> grid_from_json(const Json& j);

/// Rows "n,component,re,im" with a header line.
std::string sequence_csv(const WindowedSequence& u);

}  // namespace specseq
