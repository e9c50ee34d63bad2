#pragma once

#include <string>

#include <json.hpp>

#include "toral/equidist.hpp"
#include "toral/intlinalg.hpp"
#include "toral/lrs.hpp"
#include "toral/modarith.hpp"
#include "toral/orbits.hpp"

namespace toral {

using json = nlohmann::ordered_json;

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
json to_json(const Int& v);
/// {"num": ..., "den": ...}
json to_json(const Rat& v);
/// Coefficient array, constant term first.
json to_json(const IntPoly& f);
json to_json(const IntMatrix& A);
json to_json(const SplitPrimeCert& c);
json to_json(const LrsProfile& p);
json to_json(const OrbitRecord& r, bool with_points = false);
json to_json(const BoxMeasureReport& r);
json to_json(const DistanceCertificate& c);

/// "k,p-config,T,d2,dnT" rows for one level; p-config is "p^k*q^j".
std::string csv_header();
std::string csv_row(const OrbitRecord& r);
std::string prime_config(const OrbitRecord& r);

/// JSON array of rows or whitespace/newline separated integers (rows by line).
IntMatrix parse_matrix(const std::string& text);
/// Reads `source` as a file if one exists at that path, else parses it inline.
IntMatrix load_matrix(const std::string& source);
/// "num/den,num/den,..." (a bare integer means den 1).
TorusPoint parse_point(const std::string& text);

}  // namespace toral
