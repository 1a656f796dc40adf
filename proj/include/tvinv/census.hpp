#pragma once

// Builtin triangulations shipped as manifest files under data/census and
// embedded at build time. Each is checked against recorded combinatorial
// facts when first loaded.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tvinv/complexes.hpp"
#include "tvinv/errors.hpp"
#include "tvinv/census_data.hpp" // generated: kCensusFiles

namespace tvinv {

struct CensusCriteria {
    int tets = 0;
    int edge_classes = 0;
    int interior_vertices = 0;
    int ideal_vertices = 0;
    int b0_closed = 0;
    int b2_gf2 = 0;
};

struct CensusEntry {
    std::string_view name;
    std::string_view description;
    CensusCriteria criteria;
};

inline const std::vector<CensusEntry>& census_entries()
{
    static const std::vector<CensusEntry> entries{
        {"s3_2tet", "3-sphere, two tetrahedra glued by the identity", {2, 6, 4, 0, 1, 0}},
        {"s3_3tet", "3-sphere, three tetrahedra (2-3 move of s3_2tet)", {3, 7, 4, 0, 1, 0}},
        {"s2xs1", "S^2 x S^1, one vertex", {2, 3, 1, 0, 1, 1}},
        {"t2xi", "T^2 x I, two ideal torus vertices", {3, 3, 0, 2, 0, 1}},
        {"fig8", "figure-eight knot complement, one ideal vertex", {2, 2, 0, 1, 0, 0}},
    };
    return entries;
}

inline std::vector<std::string> builtin_names()
{
    std::vector<std::string> out;
    for (const auto& e : census_entries())
        out.emplace_back(e.name);
    return out;
}

/// Throws ConsistencyError when `tri` does not match `c`.
inline void check_census_criteria(const Triangulation& tri, const CensusCriteria& c)
{
    int interior = 0, ideal = 0;
    for (const auto& vc : classify_vertices(tri))
        (vc.kind == VertexKind::Interior ? interior : ideal) += 1;
    const BettiNumbers b = betti_gf2(tri);
    const int edges = static_cast<int>(tri.edge_classes().size());
    if (tri.tet_count() != c.tets || edges != c.edge_classes || interior != c.interior_vertices ||
        ideal != c.ideal_vertices || b.b0_closed != c.b0_closed || b.b2 != c.b2_gf2)
        throw ConsistencyError(
            "census entry '" + tri.name() + "' fails its validation criteria: tets=" +
            std::to_string(tri.tet_count()) + " edges=" + std::to_string(edges) +
            " interior=" + std::to_string(interior) + " ideal=" + std::to_string(ideal) +
            " b0=" + std::to_string(b.b0_closed) + " b2=" + std::to_string(b.b2));
}

/// Embedded manifest text of a builtin.
inline std::string_view builtin_manifest(std::string_view name)
{
    for (const auto& f : kCensusFiles)
        if (f.name == name)
            return f.text;
    std::string known;
    for (const auto& e : census_entries())
        known += (known.empty() ? "" : ", ") + std::string(e.name);
    throw DomainError("unknown builtin '" + std::string(name) + "' (known: " + known + ")");
}

/// Parsed and validated builtin; loaded once per process.
inline const Triangulation& builtin(std::string_view name)
{
    static const std::map<std::string, Triangulation, std::less<>> loaded = [] {
        std::map<std::string, Triangulation, std::less<>> m;
        for (const auto& e : census_entries()) {
            Triangulation tri = parse_manifest(std::string(builtin_manifest(e.name)));
            check_census_criteria(tri, e.criteria);
            m.emplace(std::string(e.name), std::move(tri));
        }
        return m;
    }();
    auto it = loaded.find(name);
    if (it == loaded.end())
        builtin_manifest(name); // throws with the list of known names
    return it->second;
}

} // namespace tvinv
