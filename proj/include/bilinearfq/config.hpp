#ifndef BILINEARFQ_CONFIG_HPP
#define BILINEARFQ_CONFIG_HPP

// Experiment configuration: the textual forms of fields, forms, sets,
// targets and equation systems accepted on the command line and in JSON
// config files.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilinear.hpp"
#include "counting.hpp"
#include "error.hpp"
#include "finite_field.hpp"
#include "serialize.hpp"
#include "sets.hpp"

namespace bfq {

struct ExperimentConfig {
    std::uint64_t p = 3;
    std::uint64_t m = 1;
    std::uint32_t d = 2;
    std::string form = "dot";             // dot | diag:<kappa> | [[..],[..]]
    std::vector<std::string> sets;        // full | punctured-full | star-grid | random:<density>:<seed> | file:<path>
    std::string lambda = "1";             // code, comma list, or "all"
    std::string edges;                    // "1-2:1,2-3:4" (1-based variables)
    std::vector<std::uint32_t> a;         // base point for value-set / second-moment
    std::uint64_t k = 2;                  // Waring exponent
    std::uint64_t seed = 7;
    std::uint32_t instances = 12;         // random trials for verify-all
    unsigned workers = 1;
    bool csv = false;
    bool materialize = false;
    bool allow_zero = false;
    bool restrict_to_hyperplanes = false;
    std::optional<std::uint64_t> guardrail;
};

/// Overrides fields present in a JSON object (keys as in ExperimentConfig;
/// "sets" may be an array or a comma-separated string).
inline void apply_json(ExperimentConfig& c, const Json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
    auto get = [&](const char* key, auto& dst) {
        if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
    };
    get("p", c.p);
    get("m", c.m);
    get("d", c.d);
    get("form", c.form);
    get("edges", c.edges);
    get("a", c.a);
    get("k", c.k);
    get("seed", c.seed);
    get("instances", c.instances);
    get("workers", c.workers);
    get("csv", c.csv);
    get("materialize", c.materialize);
    get("allow_zero", c.allow_zero);
    get("restrict", c.restrict_to_hyperplanes);
    if (j.contains("guardrail")) c.guardrail = j.at("guardrail").get<std::uint64_t>();
    if (j.contains("lambda")) {
        const auto& l = j.at("lambda");
        c.lambda = l.is_string() ? l.get<std::string>() : std::to_string(l.get<std::uint64_t>());
    }
    if (j.contains("sets")) {
        const auto& s = j.at("sets");
        if (s.is_array()) {
            c.sets = s.get<std::vector<std::string>>();
        } else {
            c.sets.clear();
            std::stringstream ss(s.get<std::string>());
            for (std::string item; std::getline(ss, item, ',');) c.sets.push_back(item);
        }
    }
}

inline ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {}) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config file " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
    }
    apply_json(base, j);
    return base;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
    return out;
}

inline std::uint64_t parse_uint(const std::string& s, const char* what) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-')
        throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + ": '" + s + "'");
    return v;
}

inline double parse_real(const std::string& s, const char* what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + ": '" + s + "'");
    return v;
}

inline Field make_field(const ExperimentConfig& c) { return make_extension_field(c.p, c.m); }

/// dot | diag:<kappa> | JSON matrix literal of element codes.
inline BilinearForm parse_form(const Field& field, std::uint32_t d, const std::string& spec) {
    if (spec == "dot") return dot_form(field, d);
    if (spec.rfind("diag:", 0) == 0) return diagonal_form(field, d, field.element(parse_uint(spec.substr(5), "kappa")));
    Json j;
    try {
        j = Json::parse(spec);
    } catch (const Json::parse_error&) {
        throw Error(ErrorCode::InvalidArgument, "form must be dot, diag:<kappa> or a JSON matrix");
    }
    std::vector<std::vector<FieldElement>> rows;
    for (const auto& row : j) {
        rows.emplace_back();
        for (const auto& x : row) rows.back().push_back(field.element(x.get<std::uint64_t>()));
    }
    if (rows.size() != d) throw Error(ErrorCode::DimensionMismatch, "matrix size does not match d");
    return make_form(field, rows);
}

inline VectorSet parse_set(const VectorSpace& space, const std::string& spec) {
    if (spec == "full") return full_set(space);
    if (spec == "punctured-full") return punctured_full_set(space);
    if (spec == "star-grid") return star_grid_set(space);
    if (spec.rfind("random:", 0) == 0) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "random sets are random:<density>:<seed>");
        return random_set(space, parse_real(parts[1], "density"), parse_uint(parts[2], "seed"));
    }
    const std::string path = spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec;
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "unknown set spec or unreadable file '" + spec + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::InvalidArgument, "set file " + path + " is not valid JSON");
    }
    return vector_set_from_json(space, j);
}

/// Comma list of element codes, or "all" (every nonzero element, plus zero
/// when allowed).
inline std::vector<FieldElement> parse_lambdas(const Field& field, const std::string& spec, bool allow_zero = false) {
    std::vector<FieldElement> out;
    if (spec == "all") {
        for (std::uint32_t x = allow_zero ? 0 : 1; x < field.q(); ++x) out.emplace_back(x);
        return out;
    }
    for (const auto& item : split(spec, ',')) out.push_back(field.element(parse_uint(item, "lambda")));
    if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no lambda given");
    return out;
}

/// "i-j:lambda" items, variables numbered from 1.
inline std::vector<Edge> parse_edges(const Field& field, const std::string& spec) {
    std::vector<Edge> out;
    if (spec.empty()) return out;
    for (const auto& item : split(spec, ',')) {
        const auto colon = item.find(':');
        const auto dash = item.find('-');
        if (colon == std::string::npos || dash == std::string::npos || dash > colon)
            throw Error(ErrorCode::InvalidArgument, "edges are i-j:lambda, got '" + item + "'");
        auto i = parse_uint(item.substr(0, dash), "edge endpoint");
        auto j = parse_uint(item.substr(dash + 1, colon - dash - 1), "edge endpoint");
        if (i == 0 || j == 0) throw Error(ErrorCode::InvalidArgument, "variables are numbered from 1");
        if (i > j) std::swap(i, j);
        out.push_back({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1),
                       field.element(parse_uint(item.substr(colon + 1), "edge lambda"))});
    }
    return out;
}

inline Vector parse_vector(const VectorSpace& space, const std::vector<std::uint32_t>& coords) {
    if (coords.size() != space.dim()) throw Error(ErrorCode::DimensionMismatch, "vector needs d coordinates");
    Vector v;
    for (auto c : coords) v.coords.push_back(space.field().element(c));
    return v;
}

}  // namespace bfq

#endif  // BILINEARFQ_CONFIG_HPP
