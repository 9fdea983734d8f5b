#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include <json.hpp>

#include "svset/brownian.hpp"
#include "svset/tree.hpp"
#include "svset/typecone.hpp"
#include "svset/version.hpp"

namespace svset {

using json = nlohmann::json;

namespace io {

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const char* context) {
    if (!j.is_object()) throw MalformedInput(std::string(context) + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw MalformedInput(std::string(context) + ": unknown key \"" + it.key() + "\"");
}

inline json load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw MalformedInput("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

// temp-then-rename so readers never observe a partial file
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw MalformedInput("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

// 17 significant digits: doubles round-trip exactly, locale-free
inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace io

inline json polytope_to_json(const Polytope& p) {
    json j;
    j["dim"] = p.dim();
    json verts = json::array();
    for (const Vec& v : p.vertices()) verts.push_back(v);
    j["vertices"] = verts;
    if (p.has_facets()) {
        json normals = json::array(), offsets = json::array();
        for (const Facet& f : p.facets()) {
            normals.push_back(f.normal);
            offsets.push_back(f.offset);
        }
        j["normals"] = normals;
        j["offsets"] = offsets;
    }
    return j;
}

inline Polytope polytope_from_json(const json& j) {
    io::require_keys(j, {"dim", "vertices", "normals", "offsets"}, "polytope");
    if (!j.contains("dim") || !j.contains("vertices"))
        throw MalformedInput("polytope: needs \"dim\" and \"vertices\"");
    int dim = j.at("dim").get<int>();
    std::vector<Vec> pts;
    for (const auto& row : j.at("vertices")) {
        Vec v = row.get<Vec>();
        if (static_cast<int>(v.size()) != dim)
            throw MalformedInput("polytope: vertex length does not match dim");
        pts.push_back(std::move(v));
    }
    Polytope p(pts);
    if (j.contains("normals") != j.contains("offsets"))
        throw MalformedInput("polytope: normals and offsets must come together");
    if (j.contains("normals")) {
        auto normals = j.at("normals");
        auto offsets = j.at("offsets");
        if (normals.size() != offsets.size())
            throw MalformedInput("polytope: facet arrays of different length");
        for (std::size_t k = 0; k < normals.size(); ++k) {
            Vec n = normals[k].get<Vec>();
            double off = offsets[k].get<double>();
            for (const Vec& v : p.vertices())
                if (dot(n, v) > off + 1e-6)
                    throw MalformedInput("polytope: a vertex violates a declared facet");
        }
    }
    return p;
}

inline json fan_to_json(const Fan& f) {
    json j;
    json rays = json::array();
    for (const Vec& r : f.rays) rays.push_back(r);
    j["rays"] = rays;
    j["maximal"] = f.maximal;
    return j;
}

inline Fan fan_from_json(const json& j) {
    io::require_keys(j, {"rays", "maximal"}, "fan");
    if (!j.contains("rays") || !j.contains("maximal"))
        throw MalformedInput("fan: needs \"rays\" and \"maximal\"");
    std::vector<Vec> rays;
    for (const auto& row : j.at("rays")) rays.push_back(row.get<Vec>());
    std::vector<std::vector<int>> maximal;
    for (const auto& row : j.at("maximal")) maximal.push_back(row.get<std::vector<int>>());
    return make_fan(std::move(rays), std::move(maximal));
}

inline json typecone_to_json(const TypeCone& tc) {
    json rows = json::array();
    for (const AlphaRow& r : tc.rows) {
        json alpha = json::object();
        for (std::size_t jdx = 0; jdx < r.alpha.size(); ++jdx)
            if (r.alpha[jdx] != 0.0) alpha[std::to_string(jdx)] = r.alpha[jdx];
        rows.push_back(json{{"alpha", alpha}, {"pair", {r.c1, r.c2}}});
    }
    return json{{"rows", rows}};
}

// Tree file: branching/probs plus the leaf-indexed selections xi.
struct TreeInput {
    ScenarioTree tree;
    std::vector<TreeVectorRV> selections;
};

inline TreeInput tree_from_json(const json& j) {
    io::require_keys(j, {"branching", "probs", "leaves"}, "tree");
    if (!j.contains("branching")) throw MalformedInput("tree: needs \"branching\"");
    std::vector<int> branching = j.at("branching").get<std::vector<int>>();
    if (branching.empty()) throw MalformedInput("tree: empty branching array");
    std::vector<std::vector<double>> probs;
    if (j.contains("probs")) probs = j.at("probs").get<std::vector<std::vector<double>>>();
    ScenarioTree tree = ScenarioTree::from_branching(branching, probs);

    TreeInput in{std::move(tree), {}};
    if (!j.contains("leaves")) throw MalformedInput("tree: needs \"leaves\"");
    io::require_keys(j.at("leaves"), {"xi"}, "tree.leaves");
    const auto& xi = j.at("leaves").at("xi");
    if (!xi.is_array() || xi.empty()) throw MalformedInput("tree: leaves.xi must be a nonempty array");
    for (const auto& sel : xi) {
        TreeVectorRV rv;
        for (const auto& row : sel) rv.push_back(row.get<Vec>());
        if (static_cast<int>(rv.size()) != in.tree.leaf_count())
            throw MalformedInput("tree: selection length does not match leaf count");
        in.selections.push_back(std::move(rv));
    }
    return in;
}

inline json tree_to_json(const std::vector<int>& branching,
                         const std::vector<std::vector<double>>& probs,
                         const std::vector<TreeVectorRV>& selections) {
    json j;
    j["branching"] = branching;
    if (!probs.empty()) j["probs"] = probs;
    json xi = json::array();
    for (const auto& sel : selections) {
        json rows = json::array();
        for (const Vec& v : sel) rows.push_back(v);
        xi.push_back(rows);
    }
    j["leaves"] = json{{"xi", xi}};
    return j;
}

// Simulation configuration; unknown keys are rejected on ingest.
struct SimConfig {
    std::uint64_t seed = 1;
    int samples = 100000;
    int steps = 10000;
    double horizon = 1.0;
    double alpha = 0.5;
    std::string mode = "walk";
    int grid_k = 720;
    int thin = 0;  // 0: store about 500 slices
    int traj_samples = 1;
    std::vector<double> corr;  // empty: independent components

    int thin_stride() const { return thin > 0 ? thin : std::max(1, (steps + 499) / 500); }

    DriverConfig driver() const {
        DriverConfig d;
        d.m = 3;
        d.steps = steps;
        d.horizon = horizon;
        d.mode = mode == "gauss" ? DriverMode::Gauss : DriverMode::Walk;
        d.seed = seed;
        d.samples = samples;
        d.corr = corr;
        return d;
    }
};

inline SimConfig sim_config_from_json(const json& j) {
    io::require_keys(j, {"seed", "samples", "N", "T", "alpha", "mode", "grid_k", "thin",
                         "traj_samples", "corr"},
                     "config");
    SimConfig c;
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("N")) c.steps = j.at("N").get<int>();
    if (j.contains("T")) c.horizon = j.at("T").get<double>();
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("mode")) c.mode = j.at("mode").get<std::string>();
    if (j.contains("grid_k")) c.grid_k = j.at("grid_k").get<int>();
    if (j.contains("thin")) c.thin = j.at("thin").get<int>();
    if (j.contains("traj_samples")) c.traj_samples = j.at("traj_samples").get<int>();
    if (j.contains("corr")) {
        auto rows = j.at("corr").get<std::vector<std::vector<double>>>();
        for (const auto& row : rows) {
            if (rows.size() != 3 || row.size() != 3)
                throw MalformedInput("config: corr must be 3x3");
            c.corr.insert(c.corr.end(), row.begin(), row.end());
        }
    }
    if (c.samples < 1 || c.steps < 1 || !(c.horizon > 0.0))
        throw MalformedInput("config: samples, N must be >= 1 and T > 0");
    if (c.mode != "walk" && c.mode != "gauss")
        throw MalformedInput("config: mode must be \"walk\" or \"gauss\"");
    if (c.grid_k < 2 || c.grid_k % 2 != 0)
        throw MalformedInput("config: grid_k must be even and >= 2");
    if (c.thin < 0 || c.traj_samples < 0) throw MalformedInput("config: negative thin or traj_samples");
    if (c.traj_samples > c.samples) c.traj_samples = c.samples;
    return c;
}

inline json sim_config_to_json(const SimConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["N"] = c.steps;
    j["T"] = c.horizon;
    j["alpha"] = c.alpha;
    j["mode"] = c.mode;
    j["grid_k"] = c.grid_k;
    j["thin"] = c.thin;
    j["traj_samples"] = c.traj_samples;
    if (!c.corr.empty()) {
        json rows = json::array();
        for (int r = 0; r < 3; ++r)
            rows.push_back(std::vector<double>(c.corr.begin() + 3 * r, c.corr.begin() + 3 * r + 3));
        j["corr"] = rows;
    }
    return j;
}

// Command report: schema-versioned, tri-state verdicts, deterministic bytes.
struct Report {
    std::string command;
    json config = json::object();
    std::map<std::string, std::string> verdicts;  // pass | fail | diagnostic
    json tables = json::object();
};

inline json report_to_json(const Report& r) {
    json j;
    j["schema_version"] = 1;
    j["command"] = r.command;
    j["config"] = r.config;
    j["verdicts"] = r.verdicts;
    j["tables"] = r.tables;
    j["library_version"] = kVersion;
    return j;
}

inline bool report_passed(const Report& r) {
    for (const auto& [k, v] : r.verdicts)
        if (v == "fail") return false;
    return true;
}

}  // namespace svset
