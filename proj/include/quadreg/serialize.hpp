#pragma once

// JSON and CSV encodings shared by the CLI and the reproduction report.
// Matrix entries in user-facing output are 1-based.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quadreg/birkhoff.hpp"
#include "quadreg/erdos.hpp"
#include "quadreg/qot.hpp"
#include "quadreg/regpath.hpp"

namespace quadreg {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal, or `digits` significant digits when given.
std::string format_double(double v, int digits = 0);

Json to_json(const RatVec& v);
Json to_json(const RatMat& m);
Json support_rows(const SupportMatrix& s);

Json face_to_json(const BirkhoffFace& face, bool centered);
Json path_to_json(const RegPath& path);
Json erdos_to_json(const std::vector<ErdosRecord>& records);
Json scan_to_json(const SupportScanReport& report);

// Header eta,delta,coord_0,...; one row per eta.
std::string path_grid_csv(const RegPath& path, const std::vector<Rational>& etas);
// Header inv_two_eta,weight; 12 significant digits.
std::string weight_curve_csv(const std::vector<WeightPoint>& points);

// Exact parsing of a JSON cost: a flat array of entries, or an array of rows.
// Entries may be strings ("-11/10", "-1.1") or JSON numbers; numbers are
// read through their shortest decimal form. Throws ParseError.
RatVec parse_vector_json(std::string_view text);
RatMat parse_matrix_json(std::string_view text);

}  // namespace quadreg
