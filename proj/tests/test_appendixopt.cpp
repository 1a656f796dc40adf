#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "tvinv/appendixopt.hpp"
#include "tvinv/sixj.hpp"

using namespace tvinv;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

std::array<double, 6> all(double x) { return {x, x, x, x, x, x}; }

} // namespace

TEST_CASE("v at special points")
{
    const double quarter = constants().v8 / 4;
    CHECK_THAT(v_func(3 * pi / 4, 3 * pi / 4, 3 * pi / 4), WithinAbs(quarter, 1e-12));
    CHECK_THAT(v_func(pi / 4, pi / 4, 3 * pi / 4), WithinAbs(quarter, 1e-12));
    CHECK_THAT(v_func(0, 0, 0), WithinAbs(0.0, 1e-15));
    // v(a, b, c) with a = b + c: L(2a) - L(0) - L(2c) - L(2b), halved.
    const double b = 0.3, c = 0.5;
    CHECK_THAT(v_func(b + c, b, c),
               WithinAbs(0.5 * (lobachevsky(2 * (b + c)) - lobachevsky(2 * c) - lobachevsky(2 * b)),
                         1e-14));
    CHECK(v_critical_residual(3 * pi / 4, 3 * pi / 4, 3 * pi / 4) < 1e-12);
}

TEST_CASE("v is periodic and symmetric")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, pi);
    for (int i = 0; i < 300; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const double v = v_func(a, b, c);
        CHECK_THAT(v_func(a + pi, b, c), WithinAbs(v, 1e-11));
        CHECK_THAT(v_func(a, b - pi, c), WithinAbs(v, 1e-11));
        CHECK_THAT(v_func(b, a, c), WithinAbs(v, 1e-13));
        CHECK_THAT(v_func(c, b, a), WithinAbs(v, 1e-13));
        CHECK_THAT(v_func(b, c, a), WithinAbs(v, 1e-13));
    }
}

TEST_CASE("g at the claimed maximizer")
{
    const double target = 8 * lobachevsky(pi / 8);
    CHECK_THAT(target, WithinAbs(3.927488, 1e-6));
    CHECK_THAT(g_func(7 * pi / 8, all(pi / 2)), WithinAbs(target, 1e-12));
    CHECK(g_critical_residual(7 * pi / 8, all(pi / 2)) < 1e-12);
    CHECK_THAT(g_func(7 * pi / 8, all(pi / 4)), WithinAbs(-0.294898, 1e-6));
}

TEST_CASE("g symmetries")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 2 * pi);
    for (int i = 0; i < 200; ++i) {
        const double Z = u(rng);
        std::array<double, 6> A{};
        for (double& x : A)
            x = u(rng);
        const double g = g_func(Z, A);
        CHECK_THAT(g_func(Z + pi, A), WithinAbs(g, 1e-11));
        auto B = A;
        B[i % 6] += 2 * pi;
        CHECK_THAT(g_func(Z, B), WithinAbs(g, 1e-11));
        // Vertex relabelings permute faces and quadrilaterals among themselves.
        for (const auto& p : tetrahedral_relabelings()) {
            std::array<double, 6> R{};
            for (int k = 0; k < 6; ++k)
                R[p[k]] = A[k];
            CHECK_THAT(g_func(Z, R), WithinAbs(g, 1e-12));
        }
    }
}

TEST_CASE("half sums")
{
    const std::array<double, 6> A{1, 2, 3, 4, 5, 6};
    const auto f = face_half_sums(A);
    CHECK(f[0] == 3.0);     // slots 0,1,2
    CHECK(f[1] == 6.0);     // slots 0,4,5
    CHECK(f[2] == 6.0);     // slots 1,3,5
    CHECK(f[3] == 6.0);     // slots 2,3,4
    const auto q = quad_half_sums(A);
    CHECK(q[0] == 6.0);
    CHECK(q[1] == 7.0);
    CHECK(q[2] == 8.0);
}

TEST_CASE("maximize_v finds v8/4")
{
    const OptimizationReport rep = maximize_v();
    CHECK_THAT(rep.best_value, WithinAbs(0.915965, 1e-5));
    CHECK_THAT(rep.best_value, WithinAbs(constants().v8 / 4, 1e-9));
    CHECK(rep.matches_target);
    CHECK(rep.critical_residual < 1e-6);
    REQUIRE(rep.best_point.size() == 3);
    CHECK_THAT(v_func(rep.best_point[0], rep.best_point[1], rep.best_point[2]),
               WithinAbs(rep.best_value, 1e-15));
}

TEST_CASE("maximize_v on the quarter box misses the maximum")
{
    MaximizeVOptions o;
    o.upper = pi / 2;
    const OptimizationReport rep = maximize_v(o);
    CHECK(rep.best_value < constants().v8 / 4 - 0.1);
    CHECK_FALSE(rep.matches_target);
}

TEST_CASE("maximize_g finds 8 Lambda(pi/8)")
{
    const GSearch s = search_g();
    const OptimizationReport& rep = s.report;
    CHECK_THAT(rep.best_value, WithinAbs(3.927488, 1e-3));
    CHECK(rep.matches_target);
    CHECK(rep.critical_residual <= 1e-6);
    CHECK(rep.starts == 10000);
    CHECK(rep.seed == kDefaultAppendixSeed);
    CHECK_THAT(g_func(7 * pi / 8, all(pi / 2)), WithinAbs(rep.best_value, 1e-6));
    for (const auto& lm : s.refined)
        CHECK(lm.value <= rep.best_value);
}

TEST_CASE("maximize_g is reproducible across thread counts")
{
    MaximizeGOptions o;
    o.starts = 400;
    o.refine_top = 6;
    const OptimizationReport one = maximize_g(o);
    o.threads = 4;
    const OptimizationReport four = maximize_g(o);
    CHECK(one.best_value == four.best_value);
    CHECK(one.best_point == four.best_point);
    o.seed = 99;
    o.threads = 1;
    const OptimizationReport other = maximize_g(o);
    CHECK(other.seed == 99);
}
