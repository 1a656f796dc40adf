#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "tvinv/asymptotics.hpp"
#include "tvinv/census.hpp"

#include "oracle.hpp"

using namespace tvinv;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

GrowthPoint synthetic(int r, double a)
{
    GrowthPoint p;
    p.r = r;
    p.a_r = a;
    p.log_tv = SignedLog{1, a * r / (2 * pi)};
    p.tv = std::exp(p.log_tv.log_mag);
    return p;
}

StateSumResult result_at(int r, double value)
{
    StateSumResult s;
    s.r = r;
    s.value = value;
    s.log_value = SignedLog::from_real(value);
    return s;
}

} // namespace

TEST_CASE("S2xS1 growth rate vanishes")
{
    const GrowthSeries s = growth_series(builtin("s2xs1"), 5, 21);
    REQUIRE(s.points.size() == 9);
    for (const auto& p : s.points)
        CHECK_THAT(p.a_r, WithinAbs(0.0, 1e-12));
    REQUIRE(s.ltv_estimate());
    CHECK_THAT(*s.ltv_estimate(), WithinAbs(0.0, 1e-11));
}

TEST_CASE("T2xI growth follows its closed form")
{
    const GrowthSeries s = growth_series(builtin("t2xi"), 5, 25);
    for (const auto& p : s.points)
        CHECK_THAT(p.a_r, WithinAbs(2 * pi / p.r * std::log((p.r - 1) / 2.0), 1e-12));
    REQUIRE(s.fit);
    // Normal equations in long double as the reference solve.
    using LD = long double;
    LD M[3][4] = {};
    for (const auto& p : s.points) {
        const LD row[3] = {1, std::log(static_cast<LD>(p.r)) / p.r, LD(1) / p.r};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j)
                M[i][j] += row[i] * row[j];
            M[i][3] += row[i] * p.a_r;
        }
    }
    for (int i = 0; i < 3; ++i)
        for (int k = i + 1; k < 3; ++k) {
            const LD f = M[k][i] / M[i][i];
            for (int j = i; j < 4; ++j)
                M[k][j] -= f * M[i][j];
        }
    LD beta[3];
    for (int i = 2; i >= 0; --i) {
        LD v = M[i][3];
        for (int j = i + 1; j < 3; ++j)
            v -= M[i][j] * beta[j];
        beta[i] = v / M[i][i];
    }
    CHECK_THAT(s.fit->A, WithinAbs(static_cast<double>(beta[0]), 1e-7));
    CHECK_THAT(s.fit->B, WithinAbs(static_cast<double>(beta[1]), 1e-5));
    CHECK_THAT(s.fit->C, WithinAbs(static_cast<double>(beta[2]), 1e-5));
    // a_r = (2pi/r) log((r-1)/2) tends to zero; the three-term fit only
    // sees a small remnant of the 1/r^2 terms.
    CHECK(std::fabs(s.fit->A) < 0.1);
}

TEST_CASE("figure-eight growth is monotone and bounded")
{
    const GrowthSeries s = growth_series(builtin("fig8"), 5, 31);
    for (std::size_t i = 1; i < s.points.size(); ++i)
        if (s.points[i].r > 7)
            CHECK(s.points[i].a_r > s.points[i - 1].a_r);
    const double a31 = s.points.back().a_r;
    CHECK(a31 >= 1.5);
    CHECK(a31 <= 2.6);
    REQUIRE(s.ltv_estimate());
    const double target = 2 * constants().v3;
    CHECK(std::fabs(*s.ltv_estimate() - target) / target <= 0.15);

    const BoundReport b = bound_report(builtin("fig8"), s);
    CHECK(b.all_satisfied());
    const BoundEntry* tet = b.find("tetrahedra bound");
    REQUIRE(tet);
    CHECK_THAT(tet->rhs, WithinAbs(15.241, 1e-3));
    CHECK(tet->lhs <= tet->rhs);
    const BoundEntry* gap = b.find("volume conjecture gap");
    REQUIRE(gap);
    CHECK(gap->status == BoundStatus::Informational);
    CHECK(b.find("gromov bound")->status == BoundStatus::Satisfied);
}

TEST_CASE("Gromov entry is skipped without metadata")
{
    std::string text(builtin_manifest("s3_2tet"));
    const auto pos = text.find(",\"gromov_norm\":0.0");
    REQUIRE(pos != std::string::npos);
    text.erase(pos, std::string(",\"gromov_norm\":0.0").size());
    const Triangulation tri = parse_manifest(text);
    const GrowthSeries s = growth_series(tri, 5, 15);
    const BoundReport b = bound_report(tri, s);
    const BoundEntry* g = b.find("gromov bound");
    REQUIRE(g);
    CHECK(g->status == BoundStatus::Skipped);
    CHECK(g->satisfied());
    CHECK(b.find("volume conjecture gap") == nullptr);
}

TEST_CASE("level ranges")
{
    CHECK_THROWS_AS(validate_level_range(4, 9), DomainError);
    CHECK_THROWS_AS(validate_level_range(5, 10), DomainError);
    CHECK_THROWS_AS(validate_level_range(3, 9), DomainError);
    CHECK_THROWS_AS(validate_level_range(11, 9), DomainError);
    CHECK_NOTHROW(validate_level_range(9, 9));
    CHECK_THROWS_AS(bound_report(builtin("fig8"), GrowthSeries{}), DomainError);
}

TEST_CASE("fit recovers synthetic coefficients")
{
    const double A = 1.7, B = -0.4, C = 2.5;
    std::vector<GrowthPoint> pts;
    for (int r = 5; r <= 41; r += 2)
        pts.push_back(synthetic(r, A + B * std::log(r) / r + C / r));
    const auto f = fit_growth(pts);
    REQUIRE(f);
    CHECK_THAT(f->A, WithinAbs(A, 1e-10));
    CHECK_THAT(f->B, WithinAbs(B, 1e-9));
    CHECK_THAT(f->C, WithinAbs(C, 1e-9));
    CHECK(f->residual_norm < 1e-10);
}

TEST_CASE("fit shifts with the data")
{
    std::vector<GrowthPoint> pts, shifted;
    for (int r = 5; r <= 31; r += 2) {
        const double a = std::sin(0.3 * r) + 2.0 / r;
        pts.push_back(synthetic(r, a));
        shifted.push_back(synthetic(r, a + 0.75));
    }
    const auto f = fit_growth(pts), g = fit_growth(shifted);
    REQUIRE(f);
    REQUIRE(g);
    CHECK_THAT(g->A - f->A, WithinAbs(0.75, 1e-10));
    CHECK_THAT(g->B, WithinAbs(f->B, 1e-8));
    CHECK_THAT(g->C, WithinAbs(f->C, 1e-8));
    CHECK_THAT(g->residual_norm, WithinAbs(f->residual_norm, 1e-10));
}

TEST_CASE("fit needs four nonzero points")
{
    std::vector<GrowthPoint> pts{synthetic(5, 1), synthetic(7, 1), synthetic(9, 1)};
    CHECK_FALSE(fit_growth(pts));
    GrowthPoint z;
    z.r = 11;
    z.zero = true;
    pts.push_back(z);
    CHECK_FALSE(fit_growth(pts));
    pts.push_back(synthetic(13, 1));
    CHECK(fit_growth(pts));
}

TEST_CASE("quantum factorial deviation ratios")
{
    auto reference = [](int r) {
        oracle::LD log_fact = 0, worst = 0;
        for (int n = 1; n < r; ++n) {
            log_fact += std::log(std::fabs(2 * std::sin(2 * std::numbers::pi_v<oracle::LD> * n / r)));
            worst = std::max(worst, std::fabs(log_fact + static_cast<oracle::LD>(r) / (2 * pi) *
                                                             lobachevsky(2 * pi * n / r)));
        }
        return static_cast<double>(worst / std::log(static_cast<oracle::LD>(r)));
    };
    double prev = 0;
    for (int r : {101, 501, 1001}) {
        const double got = factorial_deviation_ratio(Level(r));
        CHECK_THAT(got, WithinRel(reference(r), 1e-9));
        CHECK(got <= kFactorialDeviationConstant);
        if (prev > 0)
            CHECK(got <= 1.5 * prev);
        prev = got;
    }
    CHECK(check_factorial_asymptotics(Level(101)).all_satisfied());
    CHECK(factorial_deviation_ratio(Level(1001)) <= 1.5 * factorial_deviation_ratio(Level(101)));
}

TEST_CASE("pruned 6j scan equals the unpruned maximum")
{
    for (int r : {7, 9}) {
        const Level lvl(r);
        double best = -1e300;
        std::uint64_t count = 0, nonzero = 0;
        SixTuple s;
        auto& a = s.a;
        const int m = lvl.max_color();
        for (a[0] = 0; a[0] <= m; a[0] += 2)
            for (a[1] = 0; a[1] <= m; a[1] += 2)
                for (a[2] = 0; a[2] <= m; a[2] += 2)
                    for (a[3] = 0; a[3] <= m; a[3] += 2)
                        for (a[4] = 0; a[4] <= m; a[4] += 2)
                            for (a[5] = 0; a[5] <= m; a[5] += 2) {
                                if (!is_admissible_six_tuple(s, lvl))
                                    continue;
                                ++count;
                                const auto v = oracle::six_j_ld(a, r);
                                if (std::abs(v) < 1e-12L)
                                    continue;
                                ++nonzero;
                                best = std::max(best, 2 * pi / r *
                                                          static_cast<double>(std::log(std::abs(v))));
                            }
        const SixJGrowthScan scan = scan_sixj_growth(lvl);
        CHECK(scan.tuples == count);
        CHECK(scan.nonzero <= count);
        CHECK(nonzero > 0);
        CHECK_THAT(scan.max_value, WithinAbs(best, 1e-11));
    }
}

TEST_CASE("6j growth stays below the bound")
{
    const BoundReport b = max_sixj_growth(Level(15));
    REQUIRE(b.entries.size() == 2);
    CHECK(b.entries[0].satisfied());
    CHECK_THAT(b.entries[0].rhs, WithinAbs(8.0915, 1e-3));
    CHECK(b.entries[1].status == BoundStatus::Informational);
    CHECK_THAT(b.entries[1].rhs, WithinAbs(3.6638, 1e-3));
}

TEST_CASE("6j scan refuses levels above the cap")
{
    CHECK_THROWS_AS(scan_sixj_growth(Level(33)), DomainError);
    CHECK_THROWS_AS(max_sixj_growth(Level(17), 15), DomainError);
}

TEST_CASE("cutting inequality")
{
    const StateSumResult t2 = result_at(7, 3.0), s2 = result_at(7, 1.0);
    CHECK(check_cutting_inequality(s2, t2, 0));
    CHECK_FALSE(check_cutting_inequality(t2, s2, 0));
    CHECK(check_cutting_inequality(t2, s2, 1));
    // Crafted violation: 10 > 3 * 3 = 9.
    CHECK_FALSE(check_cutting_inequality(result_at(7, 10.0), result_at(7, 3.0), 1));
    CHECK(check_cutting_inequality(result_at(7, 9.0 + 1e-12), result_at(7, 3.0), 1));
    CHECK_THROWS_AS(check_cutting_inequality(result_at(7, 1), result_at(9, 1), 0), DomainError);
    CHECK_THROWS_AS(check_cutting_inequality(t2, s2, -1), DomainError);

    for (int r = 5; r <= 21; r += 2) {
        const StateSumResult s3 = turaev_viro(builtin("s3_2tet"), Level(r));
        const StateSumResult f8 = turaev_viro(builtin("fig8"), Level(r));
        CHECK(check_cutting_inequality(s3, f8, 0));
    }
}

TEST_CASE("bound entries")
{
    const BoundEntry ok = make_bound("x", 1.0, 2.0, 0.0);
    CHECK(ok.status == BoundStatus::Satisfied);
    CHECK(ok.slack() == 1.0);
    const BoundEntry tight = make_bound("y", 2.0 + 1e-10, 2.0, 1e-9);
    CHECK(tight.satisfied());
    const BoundEntry bad = make_bound("z", 3.0, 2.0, 1e-9);
    CHECK_FALSE(bad.satisfied());
    BoundReport rep{{ok, bad}};
    CHECK_FALSE(rep.all_satisfied());
    CHECK(rep.find("z") != nullptr);
    CHECK(rep.find("w") == nullptr);
    CHECK(std::string(to_string(BoundStatus::Skipped)) == "skipped");
}
