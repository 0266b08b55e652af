#pragma once

#include "corrmate/config.hpp"
#include "corrmate/correspondence.hpp"
#include "corrmate/fuchsian.hpp"
#include "corrmate/normal_form.hpp"
#include "corrmate/rational.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

namespace corrmate {

using json = nlohmann::json;

inline constexpr const char* kSchema = "corrmate/1";

json complex_to_json(Complex z);                 // [re, im]
Complex complex_from_json(const json& j);        // [re, im] or a bare number
json point_to_json(const SpherePoint& z);        // [re, im] or "inf"
SpherePoint point_from_json(const json& j);
json mobius_to_json(const MobiusMap& m);         // [[re,im] x 4], row-major a b c d
MobiusMap mobius_from_json(const json& j);
json poly_to_json(const Poly& p);
Poly poly_from_json(const json& j);
json map_to_json(const RationalMap& R);          // {"num": [...], "den": [...]}
RationalMap map_from_json(const json& j);
json config_to_json(const Config& cfg);
Config config_from_json(const json& j);

/// {"schema": "corrmate/1", "config": {...}}; every file written starts from this.
json envelope(const Config& cfg);
/// Throws std::invalid_argument if the schema field is missing or different.
void check_schema(const json& j);

/// {n, p, generators: {"r,s": matrix}, geodesics: {"r,s": [u, v]}}
json group_to_json(const GroupData& g);

json normal_form_to_json(const NormalFormResult& res);

/// Human-readable form, e.g. "z + 0.333333 z^-3" when the denominator is a monomial.
std::string format_map(const RationalMap& R);

json read_json(const std::string& path);
void write_json(const json& j, const std::string& path);

/// re,im,rank (infinity written as inf,inf)
void write_cloud_csv(const std::vector<CloudPoint>& cloud, std::ostream& os);

/// "RE,IM" or "inf".
SpherePoint parse_point(const std::string& s);

} // namespace corrmate
