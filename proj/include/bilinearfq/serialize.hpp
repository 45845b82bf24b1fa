#ifndef BILINEARFQ_SERIALIZE_HPP
#define BILINEARFQ_SERIALIZE_HPP

// JSON and CSV forms of fields, vector sets, grid functions and reports.
// Real numbers are rounded to 6 decimal places in both encodings so the two
// carry the same numeric payload.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilinear.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "finite_field.hpp"
#include "fourier.hpp"
#include "waring.hpp"

namespace bfq {

using Json = nlohmann::ordered_json;

inline double round6(double x) {
    if (!std::isfinite(x)) return x;
    const double r = std::round(x * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;  // no negative zero
}

inline std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", round6(x));
    return buf;
}

// ---- field ----------------------------------------------------------------

inline Json to_json(const Field& f) {
    return Json{{"p", f.p()}, {"m", f.m()}, {"modulus", f.modulus()}};
}

inline Field field_from_json(const Json& j) {
    const auto p = j.at("p").get<std::uint64_t>();
    const auto m = j.at("m").get<std::uint64_t>();
    if (!j.contains("modulus")) return make_extension_field(p, m);
    auto modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
    if (modulus.size() != m + 1) throw Error(ErrorCode::InvalidArgument, "modulus length must be m + 1");
    return make_field_with_modulus(p, std::move(modulus));
}

// ---- vector sets ----------------------------------------------------------

inline Json to_json(const VectorSet& s) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto v = s[i];
        arr.push_back(std::vector<std::uint32_t>(v.begin(), v.end()));
    }
    return arr;
}

/// Array of coordinate arrays; each coordinate is an element code.
inline VectorSet vector_set_from_json(const VectorSpace& space, const Json& j) {
    if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "vector set must be a JSON array");
    std::vector<std::uint64_t> idx;
    for (const auto& item : j) {
        const auto coords = item.get<std::vector<std::uint32_t>>();
        if (coords.size() != space.dim())
            throw Error(ErrorCode::DimensionMismatch, "vector of dimension " + std::to_string(coords.size()));
        for (auto c : coords)
            if (c >= space.field().q()) throw Error(ErrorCode::InvalidArgument, "coordinate outside the field");
        idx.push_back(space.encode(coords));
    }
    return VectorSet::from_indices(space, std::move(idx));
}

inline Json to_json(const Vector& v) {
    Json arr = Json::array();
    for (auto c : v.coords) arr.push_back(c.code);
    return arr;
}

// ---- grid functions -------------------------------------------------------

inline Json to_json(const GridFunction& g) {
    Json values = Json::array();
    for (const auto& z : g.values) values.push_back(Json::array({z.real(), z.imag()}));
    return Json{{"spec", to_json(g.space.field())}, {"d", g.space.dim()}, {"values", std::move(values)}};
}

inline GridFunction grid_from_json(const Json& j) {
    VectorSpace space(field_from_json(j.at("spec")), j.at("d").get<std::uint32_t>());
    std::vector<std::complex<double>> values;
    for (const auto& pair : j.at("values")) values.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
    return GridFunction(std::move(space), std::move(values));
}

// ---- reports --------------------------------------------------------------

inline Json to_json(const CountReport& r) {
    Json j{{"q", r.q},
           {"d", r.d},
           {"sizes", r.set_sizes},
           {"exact_count", r.exact_count},
           {"main_term", round6(r.main_term)}};
    j["error_bound"] = r.error_bound ? Json(round6(*r.error_bound)) : Json(nullptr);
    j["deviation"] = round6(r.deviation);
    j["relative_deviation"] = round6(r.relative_deviation);
    j["bound_satisfied"] = r.bound_satisfied ? Json(*r.bound_satisfied) : Json(nullptr);
    return j;
}

inline std::string count_csv_header() { return "q,d,sizes,exact,main,bound,deviation,relative_deviation,pass"; }

inline std::string to_csv(const CountReport& r) {
    std::ostringstream os;
    os << r.q << ',' << r.d << ',';
    for (std::size_t i = 0; i < r.set_sizes.size(); ++i) os << (i ? ";" : "") << r.set_sizes[i];
    os << ',' << r.exact_count << ',' << fixed6(r.main_term) << ',' << (r.error_bound ? fixed6(*r.error_bound) : "")
       << ',' << fixed6(r.deviation) << ',' << fixed6(r.relative_deviation) << ','
       << (r.bound_satisfied ? (*r.bound_satisfied ? "true" : "false") : "");
    return os.str();
}

inline Json to_json(const VarianceReport& r) {
    return Json{{"variance", round6(r.value)}, {"bound", round6(r.bound)}, {"strictly_below", r.strictly_below}};
}

inline Json to_json(const RIdentities& r) {
    return Json{{"r1", round6(r.r1.real())},
                {"r1_imag", round6(r.r1.imag())},
                {"r2", round6(r.r2.real())},
                {"r2_imag", round6(r.r2.imag())},
                {"r1_rounded", r.r1_rounded},
                {"r1_expected", r.r1_expected},
                {"r2_rounded", r.r2_rounded},
                {"r2_lower", r.r2_lower},
                {"combined", round6(r.combined)},
                {"variance", round6(r.variance)},
                {"r1_exact", r.r1_exact},
                {"r2_bounded", r.r2_bounded},
                {"variance_matches", r.variance_matches}};
}

inline Json to_json(const TriplesResult& r) {
    Json j{{"count", r.count}, {"total", r.total}, {"density", round6(r.density)}, {"fibers", r.fibers}};
    if (r.triples) {
        Json t = Json::array();
        for (const auto& tr : *r.triples) t.push_back(Json::array({tr[0].code, tr[1].code, tr[2].code}));
        j["triples"] = std::move(t);
    }
    return j;
}

inline Json to_json(const ValueSetReport& r) {
    return Json{{"size", r.size},
                {"lower_bound", round6(r.lower_bound)},
                {"bound_holds", r.bound_holds},
                {"bound_asserted", r.bound_asserted},
                {"second_moment", r.second_moment},
                {"cauchy_schwarz_holds", r.cauchy_schwarz_holds},
                {"incidences", r.incidences}};
}

inline Json to_json(const SecondMomentReport& r) {
    Json j{{"lhs", r.lhs},
           {"rhs", round6(r.rhs)},
           {"main_part", round6(r.main_part)},
           {"line_part", round6(r.line_part)},
           {"origin_part", round6(r.origin_part)},
           {"holds", r.holds},
           {"max_line_meet", r.max_line_meet},
           {"line_condition", r.line_condition}};
    j["simplified_rhs"] = r.simplified_rhs ? Json(round6(*r.simplified_rhs)) : Json(nullptr);
    j["simplified_holds"] = r.simplified_holds ? Json(*r.simplified_holds) : Json(nullptr);
    return j;
}

inline Json to_json(const WaringResult& r) {
    return Json{{"k", r.k}, {"p", r.p}, {"gamma", r.gamma}, {"gamma_star", r.gamma_star}, {"stages", r.reachable_by_stage}};
}

inline std::string waring_csv_header() { return "k,p,gamma,gamma_star,stages"; }

inline std::string to_csv(const WaringResult& r) {
    std::ostringstream os;
    os << r.k << ',' << r.p << ',' << r.gamma << ',' << r.gamma_star << ',';
    for (std::size_t i = 0; i < r.reachable_by_stage.size(); ++i) os << (i ? ";" : "") << r.reachable_by_stage[i];
    return os.str();
}

inline Json to_json(const RemarkCheck& r) {
    return Json{{"k", r.k},
                {"p", r.p},
                {"d", r.d},
                {"condition_holds", r.condition_holds},
                {"gamma_star", r.gamma_star},
                {"gamma_star_le_d", r.gamma_star_le_d},
                {"pair_count_route", r.pair_count_route},
                {"route", r.route},
                {"route_agrees", r.route_agrees},
                {"pair_bound_holds", r.pair_bound_holds},
                {"consistent", r.consistent}};
}

/// Header and row for a flat JSON object: floats at 6 decimals, arrays
/// joined with ';', null as an empty field.
inline std::pair<std::string, std::string> json_to_csv(const Json& obj) {
    std::string header, row;
    auto scalar = [](const Json& v) -> std::string {
        if (v.is_null()) return "";
        if (v.is_number_float()) return fixed6(v.get<double>());
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    };
    bool first = true;
    for (const auto& [key, value] : obj.items()) {
        header += (first ? "" : ",") + key;
        row += first ? "" : ",";
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) {
                const auto& item = value[i];
                row += (i ? ";" : "") + (item.is_array() ? item.dump() : scalar(item));
            }
        } else {
            row += scalar(value);
        }
        first = false;
    }
    return {header, row};
}

}  // namespace bfq

#endif  // BILINEARFQ_SERIALIZE_HPP
