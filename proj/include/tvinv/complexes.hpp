#pragma once

// Triangulations given by face gluings: validation, edge and vertex classes,
// vertex links, GF(2) Betti numbers, and the JSON manifest format.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tvinv/errors.hpp"
#include "tvinv/sixj.hpp"

namespace tvinv {

/// Face `face` of tetrahedron `tet` is glued to face `to_face` of `to_tet`.
/// `perm` lists the images of the source face's three vertices taken in
/// ascending order. Faces are indexed by their opposite vertex.
struct Gluing {
    int tet = 0;
    int face = 0;
    int to_tet = 0;
    int to_face = 0;
    std::array<int, 3> perm{};

    friend bool operator==(const Gluing&, const Gluing&) = default;
};

/// Vertex map of a gluing extended to all four vertices (face -> to_face).
struct Perm4 {
    std::array<int, 4> img{0, 1, 2, 3};

    int operator()(int v) const noexcept { return img[v]; }

    int sign() const noexcept
    {
        int inversions = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (img[i] > img[j])
                    ++inversions;
        return inversions % 2 == 0 ? 1 : -1;
    }

    Perm4 inverse() const noexcept
    {
        Perm4 p;
        for (int i = 0; i < 4; ++i)
            p.img[img[i]] = i;
        return p;
    }

    friend bool operator==(const Perm4&, const Perm4&) = default;
};

struct TriangulationMetadata {
    std::optional<int> b0_closed;
    std::optional<int> b2_gf2;
    std::optional<double> gromov_norm;
    std::optional<double> volume_hint;
    std::optional<std::string> expected_tv_description;

    friend bool operator==(const TriangulationMetadata&, const TriangulationMetadata&) = default;
};

/// (tet, slot) with slot 0..5 in the kEdgeSlots convention.
using EdgeSlotRef = std::pair<int, int>;
/// (tet, vertex 0..3).
using VertexRef = std::pair<int, int>;

struct EdgeClass {
    int id = 0;
    std::vector<EdgeSlotRef> members;
};

enum class VertexKind { Interior, Ideal };

struct VertexClass {
    int id = 0;
    std::vector<VertexRef> members;
    int link_euler = 0;
    bool link_orientable = true;
    VertexKind kind = VertexKind::Interior;
};

struct BettiNumbers {
    int b0_closed = 0;
    int b2 = 0;
    bool from_metadata = false;
};

struct ValidationOptions {
    bool require_orientable = true;
    bool check_vertex_links = true;
};

namespace detail {

/// Union-find with a parity bit per element relative to its root.
class ParityUnionFind {
public:
    explicit ParityUnionFind(std::size_t n) : parent_(n), parity_(n, 0)
    {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    std::pair<std::size_t, int> find(std::size_t x)
    {
        int par = 0;
        std::size_t root = x;
        while (parent_[root] != root) {
            par ^= parity_[root];
            root = parent_[root];
        }
        // Path compression, keeping parities relative to the new parent.
        std::size_t cur = x;
        int cur_par = par;
        while (parent_[cur] != root) {
            const std::size_t next = parent_[cur];
            const int next_par = cur_par ^ parity_[cur];
            parent_[cur] = root;
            parity_[cur] = cur_par;
            cur = next;
            cur_par = next_par;
        }
        return {root, par};
    }

    /// Joins x and y with relative parity p; false on a parity conflict.
    bool unite(std::size_t x, std::size_t y, int p)
    {
        auto [rx, px] = find(x);
        auto [ry, py] = find(y);
        if (rx == ry)
            return (px ^ py) == p;
        if (ry < rx) {
            std::swap(rx, ry);
            std::swap(px, py);
        }
        parent_[ry] = rx;
        parity_[ry] = px ^ py ^ p;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> parity_;
};

/// Rank over GF(2) of a matrix given as rows of 64-bit words.
inline int gf2_rank(std::vector<std::vector<std::uint64_t>> rows)
{
    int rank = 0;
    if (rows.empty())
        return 0;
    const std::size_t words = rows.front().size();
    std::size_t pivot_row = 0;
    for (std::size_t bit = 0; bit < words * 64 && pivot_row < rows.size(); ++bit) {
        const std::size_t w = bit / 64;
        const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
        std::size_t sel = pivot_row;
        while (sel < rows.size() && !(rows[sel][w] & mask))
            ++sel;
        if (sel == rows.size())
            continue;
        std::swap(rows[sel], rows[pivot_row]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != pivot_row && (rows[i][w] & mask))
                for (std::size_t k = 0; k < words; ++k)
                    rows[i][k] ^= rows[pivot_row][k];
        ++pivot_row;
        ++rank;
    }
    return rank;
}

inline std::vector<std::vector<std::uint64_t>> gf2_matrix(std::size_t rows, std::size_t cols)
{
    return std::vector<std::vector<std::uint64_t>>(
        rows, std::vector<std::uint64_t>(std::max<std::size_t>(1, (cols + 63) / 64), 0));
}

inline void gf2_flip(std::vector<std::vector<std::uint64_t>>& m, std::size_t row, std::size_t col)
{
    m[row][col / 64] ^= std::uint64_t{1} << (col % 64);
}

/// Direction of x -> y in the corner triangle at vertex v, relative to the
/// cyclic order of its vertices sorted ascending.
inline int corner_direction(int v, int x, int y)
{
    std::array<int, 3> c{};
    int n = 0;
    for (int w = 0; w < 4; ++w)
        if (w != v)
            c[n++] = w;
    for (int i = 0; i < 3; ++i)
        if (c[i] == x)
            return c[(i + 1) % 3] == y ? 1 : -1;
    return 0;
}

} // namespace detail

/// Closed pseudo-manifold given by pairwise face gluings, with derived
/// combinatorics. Immutable once built.
class Triangulation {
public:
    struct Adjacent {
        int tet = -1;
        int face = -1;
        Perm4 map;
    };

    Triangulation() = default;

    static Triangulation build(std::string name, int tet_count, std::vector<Gluing> gluings,
                               TriangulationMetadata metadata = {}, ValidationOptions opts = {});

    const std::string& name() const noexcept { return name_; }
    int tet_count() const noexcept { return tet_count_; }
    /// Every gluing in both directions, sorted by (tet, face).
    const std::vector<Gluing>& gluings() const noexcept { return gluings_; }
    const TriangulationMetadata& metadata() const noexcept { return metadata_; }

    const Adjacent& adjacent(int tet, int face) const { return adj_[tet * 4 + face]; }

    const std::vector<EdgeClass>& edge_classes() const noexcept { return edge_classes_; }
    int edge_class_of(int tet, int slot) const { return edge_class_of_[tet * 6 + slot]; }
    std::array<int, 6> tet_edge_classes(int tet) const
    {
        std::array<int, 6> out{};
        for (int k = 0; k < 6; ++k)
            out[k] = edge_class_of(tet, k);
        return out;
    }

    int vertex_class_count() const noexcept { return vertex_class_count_; }
    int vertex_class_of(int tet, int v) const { return vertex_class_of_[tet * 4 + v]; }

    int face_class_count() const noexcept { return face_class_count_; }
    int face_class_of(int tet, int face) const { return face_class_of_[tet * 4 + face]; }

    bool is_orientable() const noexcept { return orientable_; }
    /// +1/-1 per tetrahedron when orientable.
    const std::vector<int>& orientation() const noexcept { return orientation_; }

    /// Connected components of the tetrahedron adjacency graph, as a
    /// component index per tetrahedron.
    const std::vector<int>& component_of() const noexcept { return component_of_; }
    int component_count() const noexcept { return component_count_; }

    friend bool operator==(const Triangulation& a, const Triangulation& b)
    {
        return a.name_ == b.name_ && a.tet_count_ == b.tet_count_ && a.gluings_ == b.gluings_ &&
               a.metadata_ == b.metadata_;
    }

private:
    std::string name_;
    int tet_count_ = 0;
    std::vector<Gluing> gluings_;
    TriangulationMetadata metadata_;
    std::vector<Adjacent> adj_;
    std::vector<EdgeClass> edge_classes_;
    std::vector<int> edge_class_of_;
    int vertex_class_count_ = 0;
    std::vector<int> vertex_class_of_;
    int face_class_count_ = 0;
    std::vector<int> face_class_of_;
    bool orientable_ = true;
    std::vector<int> orientation_;
    std::vector<int> component_of_;
    int component_count_ = 0;
};

/// Vertex classes with their links classified; throws ManifestError
/// (BadVertexLink) when a link is non-orientable or has Euler
/// characteristic other than 2 or 0.
inline std::vector<VertexClass> classify_vertices(const Triangulation& tri)
{
    const int n = tri.tet_count();
    std::vector<VertexClass> out(tri.vertex_class_count());
    for (int i = 0; i < tri.vertex_class_count(); ++i)
        out[i].id = i;
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v)
            out[tri.vertex_class_of(t, v)].members.emplace_back(t, v);

    // Link vertices are corner-triangle corners (t, v, w), w != v: where edge
    // vw meets the link of v.
    detail::ParityUnionFind link_vertices(static_cast<std::size_t>(n) * 16);
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v)
            for (int w = 0; w < 4; ++w) {
                if (w == v)
                    continue;
                for (int f = 0; f < 4; ++f) {
                    if (f == v || f == w)
                        continue;
                    const auto& adj = tri.adjacent(t, f);
                    link_vertices.unite(t * 16 + v * 4 + w,
                                        adj.tet * 16 + adj.map(v) * 4 + adj.map(w), 0);
                }
            }
    std::vector<std::vector<std::size_t>> roots(out.size());
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v)
            for (int w = 0; w < 4; ++w)
                if (w != v)
                    roots[tri.vertex_class_of(t, v)].push_back(
                        link_vertices.find(t * 16 + v * 4 + w).first);

    // Orientability of each link by propagating corner-triangle orientations.
    std::vector<int> corner_orient(static_cast<std::size_t>(n) * 4, 0);
    std::vector<bool> link_ok(out.size(), true);
    for (int start = 0; start < n * 4; ++start) {
        if (corner_orient[start] != 0)
            continue;
        corner_orient[start] = 1;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            const int t = cur / 4, v = cur % 4;
            for (int f = 0; f < 4; ++f) {
                if (f == v)
                    continue;
                int w1 = -1, w2 = -1;
                for (int w = 0; w < 4; ++w)
                    if (w != v && w != f)
                        (w1 < 0 ? w1 : w2) = w;
                const auto& adj = tri.adjacent(t, f);
                const int v2 = adj.map(v);
                const int d1 = detail::corner_direction(v, w1, w2);
                const int d2 = detail::corner_direction(v2, adj.map(w1), adj.map(w2));
                const int want = -corner_orient[cur] * d1 * d2;
                const int nxt = adj.tet * 4 + v2;
                if (corner_orient[nxt] == 0) {
                    corner_orient[nxt] = want;
                    stack.push_back(nxt);
                }
                else if (corner_orient[nxt] != want) {
                    link_ok[tri.vertex_class_of(t, v)] = false;
                }
            }
        }
    }

    for (auto& vc : out) {
        auto& r = roots[vc.id];
        std::sort(r.begin(), r.end());
        const int link_v = static_cast<int>(std::unique(r.begin(), r.end()) - r.begin());
        const int faces = static_cast<int>(vc.members.size());
        vc.link_euler = link_v - 3 * faces / 2 + faces;
        vc.link_orientable = link_ok[vc.id];
        if (!vc.link_orientable)
            throw ManifestError(ManifestErrorKind::BadVertexLink,
                                "vertex class " + std::to_string(vc.id) +
                                    " has a non-orientable link (Euler characteristic " +
                                    std::to_string(vc.link_euler) + ")");
        if (vc.link_euler == 2)
            vc.kind = VertexKind::Interior;
        else if (vc.link_euler == 0)
            vc.kind = VertexKind::Ideal;
        else
            throw ManifestError(ManifestErrorKind::BadVertexLink,
                                "vertex class " + std::to_string(vc.id) +
                                    " has link Euler characteristic " +
                                    std::to_string(vc.link_euler));
    }
    return out;
}

inline int interior_vertex_count(const Triangulation& tri)
{
    int n = 0;
    for (const auto& vc : classify_vertices(tri))
        if (vc.kind == VertexKind::Interior)
            ++n;
    return n;
}

inline const std::vector<EdgeClass>& edge_classes(const Triangulation& tri)
{
    return tri.edge_classes();
}

/// GF(2) ranks computed from the cell complex when every vertex is interior.
inline BettiNumbers computed_betti_gf2(const Triangulation& tri)
{
    const int nv = tri.vertex_class_count();
    const int ne = static_cast<int>(tri.edge_classes().size());
    const int nf = tri.face_class_count();
    const int nt = tri.tet_count();

    auto d1 = detail::gf2_matrix(ne, nv);
    for (const auto& ec : tri.edge_classes()) {
        const auto [t, k] = ec.members.front();
        detail::gf2_flip(d1, ec.id, tri.vertex_class_of(t, kEdgeSlots[k].first));
        detail::gf2_flip(d1, ec.id, tri.vertex_class_of(t, kEdgeSlots[k].second));
    }
    auto d2 = detail::gf2_matrix(nf, ne);
    std::vector<bool> seen_face(nf, false);
    for (int t = 0; t < nt; ++t)
        for (int f = 0; f < 4; ++f) {
            const int fc = tri.face_class_of(t, f);
            if (seen_face[fc])
                continue;
            seen_face[fc] = true;
            for (int x = 0; x < 4; ++x)
                for (int y = x + 1; y < 4; ++y)
                    if (x != f && y != f)
                        detail::gf2_flip(d2, fc, tri.edge_class_of(t, edge_slot(x, y)));
        }
    auto d3 = detail::gf2_matrix(nt, nf);
    for (int t = 0; t < nt; ++t)
        for (int f = 0; f < 4; ++f)
            detail::gf2_flip(d3, t, tri.face_class_of(t, f));

    const int r1 = detail::gf2_rank(d1);
    const int r2 = detail::gf2_rank(d2);
    const int r3 = detail::gf2_rank(d3);
    BettiNumbers b;
    b.b0_closed = nv - r1;
    b.b2 = nf - r2 - r3;
    return b;
}

/// b0 (closed components) and b2 over GF(2). Computed for closed
/// triangulations; taken from metadata when ideal vertices are present.
inline BettiNumbers betti_gf2(const Triangulation& tri)
{
    const auto vcs = classify_vertices(tri);
    const bool closed = std::all_of(vcs.begin(), vcs.end(), [](const VertexClass& v) {
        return v.kind == VertexKind::Interior;
    });
    if (closed)
        return computed_betti_gf2(tri);
    const auto& md = tri.metadata();
    if (!md.b0_closed || !md.b2_gf2)
        throw ManifestError(ManifestErrorKind::MetadataRequired,
                            "'" + tri.name() +
                                "' has ideal vertices; b0_closed and b2_gf2 must come from metadata");
    return {*md.b0_closed, *md.b2_gf2, true};
}

inline Triangulation Triangulation::build(std::string name, int tet_count,
                                          std::vector<Gluing> gluings,
                                          TriangulationMetadata metadata, ValidationOptions opts)
{
    using K = ManifestErrorKind;
    auto where = [](const Gluing& g) {
        return "tet " + std::to_string(g.tet) + " face " + std::to_string(g.face);
    };
    if (tet_count < 0)
        throw ManifestError(K::IndexOutOfRange, "tet_count is negative");

    Triangulation tri;
    tri.name_ = std::move(name);
    tri.tet_count_ = tet_count;
    tri.metadata_ = std::move(metadata);
    tri.adj_.assign(static_cast<std::size_t>(tet_count) * 4, Adjacent{});

    for (const auto& g : gluings) {
        if (g.tet < 0 || g.tet >= tet_count || g.to_tet < 0 || g.to_tet >= tet_count)
            throw ManifestError(K::IndexOutOfRange, where(g) + ": tetrahedron index");
        if (g.face < 0 || g.face > 3 || g.to_face < 0 || g.to_face > 3)
            throw ManifestError(K::IndexOutOfRange, where(g) + ": face index");
        std::array<bool, 4> used{};
        for (int p : g.perm) {
            if (p < 0 || p > 3 || p == g.to_face || used[p])
                throw ManifestError(K::MalformedPermutation,
                                    where(g) + ": perm must be a bijection onto the target face");
            used[p] = true;
        }
        if (g.tet == g.to_tet && g.face == g.to_face)
            throw ManifestError(K::SelfGluedFace, where(g));
        Adjacent& slot = tri.adj_[g.tet * 4 + g.face];
        if (slot.tet >= 0)
            throw ManifestError(K::DuplicateFace, where(g));
        slot.tet = g.to_tet;
        slot.face = g.to_face;
        slot.map.img[g.face] = g.to_face;
        int k = 0;
        for (int v = 0; v < 4; ++v)
            if (v != g.face)
                slot.map.img[v] = g.perm[k++];
    }
    for (int t = 0; t < tet_count; ++t)
        for (int f = 0; f < 4; ++f) {
            const Adjacent& a = tri.adj_[t * 4 + f];
            if (a.tet < 0)
                throw ManifestError(K::UnpairedFace,
                                    "tet " + std::to_string(t) + " face " + std::to_string(f));
            const Adjacent& back = tri.adj_[a.tet * 4 + a.face];
            if (back.tet != t || back.face != f || !(back.map == a.map.inverse()))
                throw ManifestError(K::NonInvolutive, "tet " + std::to_string(t) + " face " +
                                                          std::to_string(f) +
                                                          ": reverse gluing missing or not inverse");
        }

    // Canonical gluing list.
    tri.gluings_.clear();
    for (int t = 0; t < tet_count; ++t)
        for (int f = 0; f < 4; ++f) {
            const Adjacent& a = tri.adj_[t * 4 + f];
            Gluing g{t, f, a.tet, a.face, {}};
            int k = 0;
            for (int v = 0; v < 4; ++v)
                if (v != f)
                    g.perm[k++] = a.map(v);
            tri.gluings_.push_back(g);
        }

    // Orientation and components by breadth-first propagation.
    tri.orientation_.assign(tet_count, 0);
    tri.component_of_.assign(tet_count, -1);
    tri.orientable_ = true;
    for (int s = 0; s < tet_count; ++s) {
        if (tri.orientation_[s] != 0)
            continue;
        const int comp = tri.component_count_++;
        tri.orientation_[s] = 1;
        tri.component_of_[s] = comp;
        std::vector<int> stack{s};
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            for (int f = 0; f < 4; ++f) {
                const Adjacent& a = tri.adj_[t * 4 + f];
                const int want = -a.map.sign() * tri.orientation_[t];
                if (tri.orientation_[a.tet] == 0) {
                    tri.orientation_[a.tet] = want;
                    tri.component_of_[a.tet] = comp;
                    stack.push_back(a.tet);
                }
                else if (tri.orientation_[a.tet] != want) {
                    tri.orientable_ = false;
                }
            }
        }
    }
    if (opts.require_orientable && !tri.orientable_)
        throw ManifestError(K::NonOrientable, "'" + tri.name_ + "'");

    // Edge classes; parity tracks whether an identification reverses the edge.
    detail::ParityUnionFind edges(static_cast<std::size_t>(tet_count) * 6);
    for (int t = 0; t < tet_count; ++t)
        for (int k = 0; k < 6; ++k) {
            const auto [x, y] = kEdgeSlots[k];
            for (int f = 0; f < 4; ++f) {
                if (f == x || f == y)
                    continue;
                const Adjacent& a = tri.adj_[t * 4 + f];
                const int px = a.map(x), py = a.map(y);
                if (!edges.unite(t * 6 + k, a.tet * 6 + edge_slot(px, py), px > py ? 1 : 0))
                    throw ManifestError(K::InvalidEdge,
                                        "tet " + std::to_string(t) + " edge slot " +
                                            std::to_string(k + 1));
            }
        }
    tri.edge_class_of_.assign(static_cast<std::size_t>(tet_count) * 6, -1);
    {
        std::vector<int> id_of_root(static_cast<std::size_t>(tet_count) * 6, -1);
        for (int t = 0; t < tet_count; ++t)
            for (int k = 0; k < 6; ++k) {
                const auto root = edges.find(t * 6 + k).first;
                if (id_of_root[root] < 0) {
                    id_of_root[root] = static_cast<int>(tri.edge_classes_.size());
                    tri.edge_classes_.push_back({id_of_root[root], {}});
                }
                tri.edge_class_of_[t * 6 + k] = id_of_root[root];
                tri.edge_classes_[id_of_root[root]].members.emplace_back(t, k);
            }
    }

    // Vertex classes.
    detail::ParityUnionFind verts(static_cast<std::size_t>(tet_count) * 4);
    for (int t = 0; t < tet_count; ++t)
        for (int v = 0; v < 4; ++v)
            for (int f = 0; f < 4; ++f)
                if (f != v) {
                    const Adjacent& a = tri.adj_[t * 4 + f];
                    verts.unite(t * 4 + v, a.tet * 4 + a.map(v), 0);
                }
    tri.vertex_class_of_.assign(static_cast<std::size_t>(tet_count) * 4, -1);
    {
        std::vector<int> id_of_root(static_cast<std::size_t>(tet_count) * 4, -1);
        for (int i = 0; i < tet_count * 4; ++i) {
            const auto root = verts.find(i).first;
            if (id_of_root[root] < 0)
                id_of_root[root] = tri.vertex_class_count_++;
            tri.vertex_class_of_[i] = id_of_root[root];
        }
    }

    // Face classes: each glued pair is one face.
    tri.face_class_of_.assign(static_cast<std::size_t>(tet_count) * 4, -1);
    for (int t = 0; t < tet_count; ++t)
        for (int f = 0; f < 4; ++f) {
            if (tri.face_class_of_[t * 4 + f] >= 0)
                continue;
            const Adjacent& a = tri.adj_[t * 4 + f];
            tri.face_class_of_[t * 4 + f] = tri.face_class_count_;
            tri.face_class_of_[a.tet * 4 + a.face] = tri.face_class_count_;
            ++tri.face_class_count_;
        }

    if (opts.check_vertex_links) {
        const auto vcs = classify_vertices(tri);
        const bool closed = std::all_of(vcs.begin(), vcs.end(), [](const VertexClass& v) {
            return v.kind == VertexKind::Interior;
        });
        if (closed && (tri.metadata_.b0_closed || tri.metadata_.b2_gf2)) {
            const BettiNumbers b = computed_betti_gf2(tri);
            if ((tri.metadata_.b0_closed && *tri.metadata_.b0_closed != b.b0_closed) ||
                (tri.metadata_.b2_gf2 && *tri.metadata_.b2_gf2 != b.b2))
                throw ManifestError(K::MetadataMismatch,
                                    "computed b0_closed=" + std::to_string(b.b0_closed) +
                                        ", b2_gf2=" + std::to_string(b.b2));
        }
    }
    return tri;
}

/// Same complex with tetrahedron t renamed to order[t].
inline Triangulation relabel_tetrahedra(const Triangulation& tri, const std::vector<int>& order)
{
    std::vector<Gluing> gl;
    gl.reserve(tri.gluings().size());
    for (Gluing g : tri.gluings()) {
        g.tet = order.at(g.tet);
        g.to_tet = order.at(g.to_tet);
        gl.push_back(g);
    }
    return Triangulation::build(tri.name(), tri.tet_count(), std::move(gl), tri.metadata());
}

/// Disjoint union; tetrahedra of `b` follow those of `a`. Betti metadata and
/// Gromov norms add when both sides carry them.
inline Triangulation disjoint_union(const Triangulation& a, const Triangulation& b)
{
    std::vector<Gluing> gl = a.gluings();
    for (Gluing g : b.gluings()) {
        g.tet += a.tet_count();
        g.to_tet += a.tet_count();
        gl.push_back(g);
    }
    TriangulationMetadata md;
    const auto& ma = a.metadata();
    const auto& mb = b.metadata();
    if (ma.b0_closed && mb.b0_closed)
        md.b0_closed = *ma.b0_closed + *mb.b0_closed;
    if (ma.b2_gf2 && mb.b2_gf2)
        md.b2_gf2 = *ma.b2_gf2 + *mb.b2_gf2;
    if (ma.gromov_norm && mb.gromov_norm)
        md.gromov_norm = *ma.gromov_norm + *mb.gromov_norm;
    return Triangulation::build(a.name() + "+" + b.name(), a.tet_count() + b.tet_count(),
                                std::move(gl), md);
}

// ---------------------------------------------------------------------------
// Manifest format

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                           const std::string& context)
{
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw ManifestError(ManifestErrorKind::UnknownField, context + "'" + key + "'");
    }
}

inline int require_int(const nlohmann::json& obj, const char* key, const std::string& context)
{
    if (!obj.contains(key))
        throw ManifestError(ManifestErrorKind::MissingField, context + "'" + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number_integer())
        throw ManifestError(ManifestErrorKind::Syntax, context + "'" + key + "' must be an integer");
    return v.get<int>();
}

} // namespace detail

/// Parses and validates a manifest document (JSON text).
inline Triangulation parse_manifest(const std::string& text, ValidationOptions opts = {})
{
    using K = ManifestErrorKind;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::parse_error& e) {
        throw ManifestError(K::Syntax, e.what());
    }
    if (!doc.is_object())
        throw ManifestError(K::Syntax, "top level must be an object");
    detail::reject_unknown(doc, {"name", "tet_count", "gluings", "metadata"}, "");

    std::string name;
    if (doc.contains("name")) {
        if (!doc["name"].is_string())
            throw ManifestError(K::Syntax, "'name' must be a string");
        name = doc["name"].get<std::string>();
    }
    const int tet_count = detail::require_int(doc, "tet_count", "");

    std::vector<Gluing> gluings;
    if (!doc.contains("gluings"))
        throw ManifestError(K::MissingField, "'gluings'");
    if (!doc["gluings"].is_array())
        throw ManifestError(K::Syntax, "'gluings' must be a list");
    int index = 0;
    for (const auto& rec : doc["gluings"]) {
        const std::string ctx = "gluing " + std::to_string(index++) + ": ";
        if (!rec.is_object())
            throw ManifestError(K::Syntax, ctx + "record must be an object");
        detail::reject_unknown(rec, {"tet", "face", "to_tet", "to_face", "perm"}, ctx);
        Gluing g;
        g.tet = detail::require_int(rec, "tet", ctx);
        g.face = detail::require_int(rec, "face", ctx);
        g.to_tet = detail::require_int(rec, "to_tet", ctx);
        g.to_face = detail::require_int(rec, "to_face", ctx);
        if (!rec.contains("perm"))
            throw ManifestError(K::MissingField, ctx + "'perm'");
        const auto& p = rec["perm"];
        if (!p.is_array() || p.size() != 3)
            throw ManifestError(K::MalformedPermutation, ctx + "perm must list three vertices");
        for (int k = 0; k < 3; ++k) {
            if (!p[k].is_number_integer())
                throw ManifestError(K::MalformedPermutation, ctx + "perm entries must be integers");
            g.perm[k] = p[k].get<int>();
        }
        gluings.push_back(g);
    }

    TriangulationMetadata md;
    if (doc.contains("metadata")) {
        const auto& m = doc["metadata"];
        if (!m.is_object())
            throw ManifestError(K::Syntax, "'metadata' must be an object");
        detail::reject_unknown(
            m, {"b0_closed", "b2_gf2", "gromov_norm", "volume_hint", "expected_tv_description"},
            "metadata: ");
        if (m.contains("b0_closed"))
            md.b0_closed = detail::require_int(m, "b0_closed", "metadata: ");
        if (m.contains("b2_gf2"))
            md.b2_gf2 = detail::require_int(m, "b2_gf2", "metadata: ");
        auto number = [&](const char* key) -> std::optional<double> {
            if (!m.contains(key))
                return std::nullopt;
            if (!m[key].is_number())
                throw ManifestError(K::Syntax, std::string("metadata: '") + key + "' must be a number");
            return m[key].get<double>();
        };
        md.gromov_norm = number("gromov_norm");
        md.volume_hint = number("volume_hint");
        if (m.contains("expected_tv_description")) {
            if (!m["expected_tv_description"].is_string())
                throw ManifestError(K::Syntax, "metadata: 'expected_tv_description' must be a string");
            md.expected_tv_description = m["expected_tv_description"].get<std::string>();
        }
    }
    return Triangulation::build(std::move(name), tet_count, std::move(gluings), std::move(md), opts);
}

/// Manifest text for a triangulation; one gluing record per line.
inline std::string emit_manifest(const Triangulation& tri)
{
    std::ostringstream os;
    os << "{\n  \"name\": " << nlohmann::json(tri.name()).dump() << ",\n";
    os << "  \"tet_count\": " << tri.tet_count() << ",\n";
    const auto& md = tri.metadata();
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    if (md.b0_closed)
        m["b0_closed"] = *md.b0_closed;
    if (md.b2_gf2)
        m["b2_gf2"] = *md.b2_gf2;
    if (md.gromov_norm)
        m["gromov_norm"] = *md.gromov_norm;
    if (md.volume_hint)
        m["volume_hint"] = *md.volume_hint;
    if (md.expected_tv_description)
        m["expected_tv_description"] = *md.expected_tv_description;
    if (!m.empty())
        os << "  \"metadata\": " << m.dump() << ",\n";
    os << "  \"gluings\": [";
    for (std::size_t i = 0; i < tri.gluings().size(); ++i) {
        const Gluing& g = tri.gluings()[i];
        os << (i == 0 ? "\n" : ",\n") << "    {\"tet\": " << g.tet << ", \"face\": " << g.face
           << ", \"to_tet\": " << g.to_tet << ", \"to_face\": " << g.to_face << ", \"perm\": ["
           << g.perm[0] << ", " << g.perm[1] << ", " << g.perm[2] << "]}";
    }
    os << (tri.gluings().empty() ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

/// Reads and parses a manifest file.
inline Triangulation load_manifest(const std::string& path, ValidationOptions opts = {})
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DomainError("cannot open manifest '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_manifest(text.str(), opts);
}

} // namespace tvinv
