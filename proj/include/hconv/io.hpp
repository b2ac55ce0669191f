#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hconv/convex_sets.hpp"
#include "hconv/quadratic.hpp"

// File formats used by the command line tool and its tests.
//
//   vector      JSON array of numbers
//   matrix      JSON {"n": manifold dim, "A": row-major entries} or CSV rows
//   cone set    JSON {"variant": "generators" | "halfspaces" | "ball", ...}
//
// Doubles go through nlohmann::json, which emits the shortest decimal that
// round-trips exactly, so serialized output is byte-stable across runs.

namespace hconv {

using json = nlohmann::json;

struct io_error : error {
    using error::error;
};

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw io_error("cannot parse " + path + ": " + e.what());
    }
    return j;
}

inline Vec vec_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw io_error("expected a nonempty numeric array");
    Vec v(static_cast<long>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw io_error("expected a numeric array");
        v[static_cast<long>(i)] = j[i].get<double>();
    }
    return v;
}

inline json vec_to_json(const Vec& v) {
    json j = json::array();
    for (long i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

inline Vec read_vector(const std::string& path) { return vec_from_json(read_json_file(path)); }

inline bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline Mat read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                throw io_error("cannot parse CSV cell '" + cell + "' in " + path);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw io_error("empty CSV matrix in " + path);
    const size_t cols = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != cols) throw io_error("ragged CSV matrix in " + path);
    if (rows.size() != cols) throw io_error("CSV matrix must be square in " + path);
    Mat m(static_cast<long>(rows.size()), static_cast<long>(cols));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols; ++j)
            m(static_cast<long>(i), static_cast<long>(j)) = rows[i][j];
    return m;
}

// {"n": manifold dimension, "A": (n+1)^2 entries, row-major}.
inline Mat read_matrix(const std::string& path) {
    if (has_suffix(path, ".csv")) return read_matrix_csv(path);
    const json j = read_json_file(path);
    if (!j.is_object() || !j.contains("n") || !j.contains("A"))
        throw io_error("matrix JSON must be {\"n\": ..., \"A\": [...]} in " + path);
    const long n = j["n"].get<long>();
    if (n < 1) throw io_error("matrix dimension must be positive in " + path);
    const long amb = n + 1;
    const Vec flat = vec_from_json(j["A"]);
    if (flat.size() != amb * amb)
        throw io_error("matrix entry count does not match n in " + path);
    Mat m(amb, amb);
    for (long i = 0; i < amb; ++i)
        for (long k = 0; k < amb; ++k) m(i, k) = flat[i * amb + k];
    return m;
}

inline json matrix_to_json(const Mat& m) {
    json flat = json::array();
    for (long i = 0; i < m.rows(); ++i)
        for (long k = 0; k < m.cols(); ++k) flat.push_back(m(i, k));
    return json{{"n", m.rows() - 1}, {"A", flat}};
}

inline ConeSet read_cone_set(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.is_object() || !j.contains("variant"))
        throw io_error("cone set JSON must carry a \"variant\" field in " + path);
    const std::string variant = j["variant"].get<std::string>();
    if (variant == "generators") {
        if (!j.contains("generators") || !j["generators"].is_array())
            throw io_error("generators variant needs a \"generators\" array in " + path);
        std::vector<HPoint> gens;
        for (const auto& g : j["generators"]) gens.emplace_back(vec_from_json(g));
        return GeneratorSet(std::move(gens));
    }
    if (variant == "halfspaces") {
        if (!j.contains("normals") || !j["normals"].is_array())
            throw io_error("halfspaces variant needs a \"normals\" array in " + path);
        std::vector<Vec> normals;
        for (const auto& w : j["normals"]) normals.push_back(vec_from_json(w));
        long amb = 0;
        if (!normals.empty())
            amb = normals.front().size();
        else if (j.contains("n"))
            amb = j["n"].get<long>() + 1;
        else
            throw io_error("halfspaces variant with no normals needs \"n\" in " + path);
        return HalfspaceSet(std::move(normals), amb);
    }
    if (variant == "ball") {
        if (!j.contains("center") || !j.contains("radius"))
            throw io_error("ball variant needs \"center\" and \"radius\" in " + path);
        return BallSet(HPoint(vec_from_json(j["center"])), j["radius"].get<double>());
    }
    throw io_error("unknown cone set variant '" + variant + "' in " + path);
}

inline json cone_set_to_json(const ConeSet& c) {
    if (const auto* gs = std::get_if<GeneratorSet>(&c)) {
        json gens = json::array();
        for (const auto& g : gs->generators) gens.push_back(vec_to_json(g.coords()));
        return json{{"variant", "generators"}, {"generators", gens}};
    }
    if (const auto* hs = std::get_if<HalfspaceSet>(&c)) {
        json normals = json::array();
        for (const auto& w : hs->normals) normals.push_back(vec_to_json(w));
        return json{{"variant", "halfspaces"}, {"normals", normals}, {"n", hs->ambient_dim - 1}};
    }
    const auto& b = std::get<BallSet>(c);
    return json{{"variant", "ball"},
                {"center", vec_to_json(b.center.coords())},
                {"radius", b.radius}};
}

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::convex: return "convex";
        case Verdict::not_convex: return "not-convex";
        default: return "inconclusive-near-boundary";
    }
}

inline std::string shortcut_name(Shortcut s) {
    switch (s) {
        case Shortcut::necessary_failed: return "necessary-failed";
        case Shortcut::diagonal_rule: return "diagonal-rule";
        case Shortcut::a_zero_rule: return "a-zero-rule";
        case Shortcut::gap_rule: return "gap-rule";
        default: return "search";
    }
}

inline json certificate_to_json(const Certificate& cert) {
    json j{{"verdict", verdict_name(cert.verdict)}, {"shortcut", shortcut_name(cert.shortcut)}};
    if (cert.alpha) j["alpha"] = *cert.alpha;
    if (cert.psi_at_alpha) j["psi"] = *cert.psi_at_alpha;
    if (cert.witness) j["witness"] = vec_to_json(*cert.witness);
    return j;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << text;
}

}  // namespace hconv
