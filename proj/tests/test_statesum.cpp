#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>

#include "tvinv/census.hpp"
#include "tvinv/statesum.hpp"

#include "oracle.hpp"

using namespace tvinv;
using namespace oracle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

bool admissible(int a, int b, int c, int r)
{
    return a + b + c <= 2 * (r - 2) && a <= b + c && b <= a + c && c <= a + b;
}

struct BruteForce {
    std::vector<std::vector<int>> colorings;
    CLD sum{0, 0};
    std::uint64_t tried = 0;
};

// Every assignment of I_r to the edge classes, filtered face by face after
// the fact. No pruning, no shared code with the enumerator.
BruteForce brute_force(const Triangulation& tri, int r, bool evaluate)
{
    const int n = static_cast<int>(tri.edge_classes().size());
    const int faces[4][3] = {{0, 1, 2}, {0, 4, 5}, {1, 3, 5}, {2, 3, 4}};
    BruteForce out;
    std::vector<int> c(n, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            ++out.tried;
            for (int t = 0; t < tri.tet_count(); ++t) {
                const auto cls = tri.tet_edge_classes(t);
                for (const auto& f : faces)
                    if (!admissible(c[cls[f[0]]], c[cls[f[1]]], c[cls[f[2]]], r))
                        return;
            }
            out.colorings.push_back(c);
            if (evaluate) {
                CLD term = 1;
                for (int col : c)
                    term *= fact_ld(col + 1, r) / fact_ld(col, r) /
                            (2 * std::sin(2 * std::numbers::pi_v<LD> / r));
                for (int t = 0; t < tri.tet_count(); ++t) {
                    const auto cls = tri.tet_edge_classes(t);
                    std::array<int, 6> a{};
                    for (int k = 0; k < 6; ++k)
                        a[k] = c[cls[k]];
                    term *= six_j_ld(a, r);
                }
                out.sum += term;
            }
            return;
        }
        for (int col = 0; col <= r - 3; col += 2) {
            c[i] = col;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

double brute_force_tv(const Triangulation& tri, int r)
{
    CLD s = brute_force(tri, r, true).sum;
    for (int v = 0; v < interior_vertex_count(tri); ++v)
        s *= eta_squared_ld(r);
    CHECK(std::fabs(static_cast<double>(s.imag())) <=
          1e-12 * (1 + std::fabs(static_cast<double>(s.real()))));
    return static_cast<double>(s.real());
}

} // namespace

TEST_CASE("edge weights")
{
    const Level lvl(7);
    CHECK(edge_weight(0, lvl) == 1.0);
    CHECK_THAT(edge_weight(2, lvl),
               WithinRel(std::sin(6 * std::numbers::pi / 7) / std::sin(2 * std::numbers::pi / 7),
                         1e-14));
    CHECK_THROWS_AS(edge_weight(1, lvl), DomainError);
    CHECK_THROWS_AS(edge_weight(6, lvl), DomainError);
}

TEST_CASE("pruned enumeration equals unpruned brute force")
{
    auto same = [](const Triangulation& tri, int r) {
        const auto fast = enumerate_admissible(tri, Level(r));
        const auto slow = brute_force(tri, r, false).colorings;
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i)
            CHECK(fast[i].colors == slow[i]);
    };
    same(builtin("fig8"), 5);
    same(builtin("s3_2tet"), 7);
    for (const auto& name : builtin_names())
        for (int r = 5; r <= 9; r += 2)
            same(builtin(name), r);
}

TEST_CASE("empty triangulation has one coloring")
{
    const Triangulation empty = Triangulation::build("empty", 0, {});
    CHECK(enumerate_admissible(empty, Level(5)).size() == 1);
    const StateSumResult res = turaev_viro(empty, Level(5));
    CHECK(res.value == 1.0);
    CHECK(res.admissible_count == 1);
}

TEST_CASE("state sums against a brute-force long double evaluation")
{
    for (const auto& name : builtin_names())
        for (int r = 5; r <= 9; r += 2) {
            const double ref = brute_force_tv(builtin(name), r);
            const double got = turaev_viro(builtin(name), Level(r)).value;
            INFO(name << " r=" << r);
            CHECK_THAT(got, WithinAbs(ref, 1e-11 * (1 + std::fabs(ref))));
        }
}

TEST_CASE("closed forms")
{
    CHECK_THAT(turaev_viro(builtin("s3_2tet"), Level(5)).value,
               WithinRel(0.7236067977499789, 1e-12));
    CHECK_THAT(turaev_viro(builtin("s3_2tet"), Level(5)).value,
               WithinRel(static_cast<double>(eta_squared_ld(5)), 1e-13));
    for (int r : {5, 7, 11, 21}) {
        CHECK_THAT(turaev_viro(builtin("s2xs1"), Level(r)).value, WithinAbs(1.0, 1e-12));
        CHECK_THAT(turaev_viro(builtin("t2xi"), Level(r)).value, WithinRel((r - 1) / 2.0, 1e-12));
        CHECK_THAT(turaev_viro(builtin("s3_3tet"), Level(r)).value,
                   WithinRel(static_cast<double>(eta_squared_ld(r)), 1e-12));
    }
    CHECK_THAT(turaev_viro(builtin("t2xi"), Level(7)).value, WithinAbs(3.0, 1e-12));
}

TEST_CASE("oracle precision, signed-log and double-double paths agree")
{
    for (const auto& name : builtin_names())
        for (int r : {5, 7, 9, 11}) {
            const double dd = turaev_viro(builtin(name), Level(r)).value;
            TuraevViroOptions o;
            o.force_signed_log = true;
            const double lg = turaev_viro(builtin(name), Level(r), o).value;
            o.force_signed_log = false;
            o.precision = Precision::Oracle;
            const StateSumResult orc = turaev_viro(builtin(name), Level(r), o);
            INFO(name << " r=" << r);
            CHECK(orc.precision == Precision::Oracle);
            CHECK_THAT(dd, WithinAbs(orc.value, 1e-13 * (1 + std::fabs(orc.value))));
            CHECK_THAT(lg, WithinAbs(orc.value, 1e-11 * (1 + std::fabs(orc.value))));
        }
}

TEST_CASE("counters")
{
    const StateSumResult res = turaev_viro(builtin("fig8"), Level(9));
    CHECK(res.admissible_count == enumerate_admissible(builtin("fig8"), Level(9)).size());
    CHECK(res.colorings_visited >= res.admissible_count);
    CHECK(res.interior_vertices == 0);
    CHECK(std::isfinite(res.peak_term_log));
    CHECK(turaev_viro(builtin("s3_2tet"), Level(9)).interior_vertices == 4);
}

TEST_CASE("disjoint unions multiply")
{
    const Triangulation u = disjoint_union(builtin("s3_2tet"), builtin("s2xs1"));
    for (int r : {5, 9, 13}) {
        const Level lvl(r);
        const StateSumResult a = turaev_viro(builtin("s3_2tet"), lvl);
        const StateSumResult b = turaev_viro(builtin("s2xs1"), lvl);
        const StateSumResult p = tv_disjoint_union({a, b});
        CHECK_THAT(p.value, WithinRel(a.value * b.value, 1e-15));
        CHECK_THAT(turaev_viro(u, lvl).value, WithinRel(p.value, 1e-11));
        CHECK(p.admissible_count == a.admissible_count * b.admissible_count);
    }
    CHECK_THROWS_AS(tv_disjoint_union({}), DomainError);
    CHECK_THROWS_AS(tv_disjoint_union({turaev_viro(builtin("s2xs1"), Level(5)),
                                       turaev_viro(builtin("s2xs1"), Level(7))}),
                    DomainError);
}

TEST_CASE("results do not depend on thread count")
{
    for (const char* name : {"fig8", "s3_3tet", "t2xi"}) {
        TuraevViroOptions o;
        o.threads = 1;
        const StateSumResult one = turaev_viro(builtin(name), Level(15), o);
        for (unsigned t : {2u, 8u}) {
            o.threads = t;
            const StateSumResult many = turaev_viro(builtin(name), Level(15), o);
            CHECK(many.value == one.value);
            CHECK(many.log_value == one.log_value);
            CHECK(many.colorings_visited == one.colorings_visited);
            CHECK(many.admissible_count == one.admissible_count);
            CHECK(many.peak_term_log == one.peak_term_log);
        }
    }
}

TEST_CASE("Betti factor")
{
    TuraevViroOptions o;
    o.apply_betti_factor = true;
    // 2^{b2 - b0}: s2xs1 has b2 = b0 = 1, s3 has b0 = 1.
    const StateSumResult s2 = turaev_viro(builtin("s2xs1"), Level(7), o);
    CHECK(s2.factor_applied);
    CHECK_THAT(s2.value, WithinAbs(1.0, 1e-12));
    CHECK_THAT(turaev_viro(builtin("s3_2tet"), Level(7), o).value,
               WithinRel(0.5 * turaev_viro(builtin("s3_2tet"), Level(7)).value, 1e-15));
    CHECK_THAT(turaev_viro(builtin("t2xi"), Level(7), o).value, WithinRel(6.0, 1e-12));
}
