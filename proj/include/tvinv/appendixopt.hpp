#pragma once

// The volume-type functions v(alpha, beta, gamma) and g(Z, A_1..A_6) that
// bound 6j-symbols, and numeric searches for their global maxima.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "tvinv/lobachevsky.hpp"
#include "tvinv/statesum.hpp" // detail::run_parallel

namespace tvinv {

/// 1/2 (L(a+b+c) - L(b+c-a) - L(a+c-b) - L(a+b-c)), L = Lambda.
inline double v_func(double alpha, double beta, double gamma)
{
    return 0.5 * (lobachevsky(alpha + beta + gamma) - lobachevsky(beta + gamma - alpha) -
                  lobachevsky(alpha + gamma - beta) - lobachevsky(alpha + beta - gamma));
}

/// Half sums of the edge angles around each face (same slots as the 6j
/// face sums T_j).
inline std::array<double, 4> face_half_sums(const std::array<double, 6>& A)
{
    return {(A[0] + A[1] + A[2]) / 2, (A[0] + A[4] + A[5]) / 2, (A[1] + A[3] + A[5]) / 2,
            (A[2] + A[3] + A[4]) / 2};
}

/// Half sums over the three quadrilaterals (complements of opposite pairs).
inline std::array<double, 3> quad_half_sums(const std::array<double, 6>& A)
{
    return {(A[0] + A[1] + A[3] + A[4]) / 2, (A[0] + A[2] + A[3] + A[5]) / 2,
            (A[1] + A[2] + A[4] + A[5]) / 2};
}

/// sum_j L(Z - U_j) + sum_k L(V_k - Z) - L(Z).
inline double g_func(double Z, const std::array<double, 6>& A)
{
    double s = -lobachevsky(Z);
    for (double u : face_half_sums(A))
        s += lobachevsky(Z - u);
    for (double v : quad_half_sums(A))
        s += lobachevsky(v - Z);
    return s;
}

/// Largest deviation among |sin| of the four arguments of v; zero exactly at
/// critical points.
inline double v_critical_residual(double a, double b, double c)
{
    const std::array<double, 4> s{std::fabs(std::sin(a + b + c)), std::fabs(std::sin(b + c - a)),
                                  std::fabs(std::sin(a + c - b)), std::fabs(std::sin(a + b - c))};
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return *hi - *lo;
}

/// Same for the eight arguments of g.
inline double g_critical_residual(double Z, const std::array<double, 6>& A)
{
    std::vector<double> s{std::fabs(std::sin(Z))};
    for (double u : face_half_sums(A))
        s.push_back(std::fabs(std::sin(Z - u)));
    for (double v : quad_half_sums(A))
        s.push_back(std::fabs(std::sin(v - Z)));
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    return *hi - *lo;
}

struct OptimizationReport {
    double best_value = -std::numeric_limits<double>::infinity();
    std::vector<double> best_point;
    std::uint64_t starts = 0;
    double refinement_tolerance = 0.0;
    double target = 0.0;
    bool matches_target = false;
    /// |sin| spread at best_point (see *_critical_residual).
    double critical_residual = 0.0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Golden-section search for a maximum of f on [lo, hi]; returns the best
/// abscissa seen, including `x0` itself.
template <typename F>
double golden_max(F&& f, double lo, double hi, double x0, double f0, double tol)
{
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    double best_x = x0, best_f = f0;
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        }
        else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}})
        if (v > best_f) {
            best_f = v;
            best_x = x;
        }
    return best_x;
}

/// Coordinate ascent with golden-section line searches on shrinking
/// windows. Stops once a sweep moves no coordinate by more than `tol`.
template <typename F, std::size_t N>
double coordinate_ascent(F&& f, std::array<double, N>& x, double window, double tol,
                         int max_sweeps)
{
    double fx = f(x);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double moved = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double xi = x[i];
            auto line = [&](double t) {
                auto y = x;
                y[i] = t;
                return f(y);
            };
            const double t = golden_max(line, xi - window, xi + window, xi, fx, tol);
            if (t != xi) {
                x[i] = t;
                fx = f(x);
                moved = std::max(moved, std::fabs(t - xi));
            }
        }
        if (moved <= tol)
            break;
        window = std::max(std::min(window, 4.0 * moved), 8.0 * tol);
    }
    return fx;
}

} // namespace detail

struct MaximizeVOptions {
    /// Grid step in each variable; pi / grid_divisions.
    int grid_divisions = 200;
    /// Scan [0, upper)^3; pi covers a full period.
    double upper = std::numbers::pi;
    double tolerance = 1e-8;
    /// Grid maxima refined by coordinate ascent.
    int refine_top = 16;
};

/// Grid scan over [0, upper)^3 followed by local refinement.
inline OptimizationReport maximize_v(const MaximizeVOptions& opts = {})
{
    const double pi = std::numbers::pi;
    const int n = opts.grid_divisions;
    const double h = pi / n;
    // Every argument is a multiple of h, so Lambda is tabulated over one period.
    std::vector<double> lam(n);
    for (int k = 0; k < n; ++k)
        lam[k] = lobachevsky(k * h);
    auto L = [&](int k) { return lam[((k % n) + n) % n]; };
    const int m = static_cast<int>(std::ceil(opts.upper / h - 1e-9));

    struct Cand {
        double value;
        std::array<int, 3> idx;
    };
    std::vector<Cand> best;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double val = 0.5 * (L(i + j + k) - L(j + k - i) - L(i + k - j) - L(i + j - k));
                if (static_cast<int>(best.size()) < opts.refine_top ||
                    val > best.back().value) {
                    Cand c{val, {i, j, k}};
                    auto it = std::upper_bound(best.begin(), best.end(), c,
                                               [](const Cand& a, const Cand& b) {
                                                   return a.value > b.value;
                                               });
                    best.insert(it, c);
                    if (static_cast<int>(best.size()) > opts.refine_top)
                        best.pop_back();
                }
            }

    OptimizationReport rep;
    rep.starts = static_cast<std::uint64_t>(m) * m * m;
    rep.refinement_tolerance = opts.tolerance;
    rep.target = constants().v8 / 4;
    auto f = [](const std::array<double, 3>& x) { return v_func(x[0], x[1], x[2]); };
    for (const auto& c : best) {
        std::array<double, 3> x{c.idx[0] * h, c.idx[1] * h, c.idx[2] * h};
        double val = detail::coordinate_ascent(f, x, h, opts.tolerance, 500);
        // Stay inside the scanned box.
        for (double& xi : x)
            xi = std::clamp(xi, 0.0, opts.upper);
        val = f(x);
        if (val > rep.best_value) {
            rep.best_value = val;
            rep.best_point.assign(x.begin(), x.end());
        }
    }
    rep.matches_target = std::fabs(rep.best_value - rep.target) <= 1e-5;
    rep.critical_residual =
        v_critical_residual(rep.best_point[0], rep.best_point[1], rep.best_point[2]);
    return rep;
}

inline constexpr std::uint64_t kDefaultAppendixSeed = 20180601;

struct MaximizeGOptions {
    int starts = 10000;
    std::uint64_t seed = kDefaultAppendixSeed;
    double tolerance = 1e-8;
    /// Coarse-phase line-search tolerance and sweep cap.
    double coarse_tolerance = 1e-4;
    int coarse_sweeps = 12;
    /// Distinct coarse maxima refined to `tolerance`.
    int refine_top = 24;
    unsigned threads = 1;
};

/// A refined local maximum of g.
struct GLocalMax {
    double value = 0.0;
    std::array<double, 7> point{};
    double critical_residual = 0.0;
};

struct GSearch {
    OptimizationReport report;
    std::vector<GLocalMax> refined;
};

/// Multi-start coordinate ascent over [0, 2 pi)^7 from seeded uniform starts.
inline GSearch search_g(const MaximizeGOptions& opts = {})
{
    const double two_pi = 2.0 * std::numbers::pi;
    auto f = [](const std::array<double, 7>& x) {
        return g_func(x[0], {x[1], x[2], x[3], x[4], x[5], x[6]});
    };
    std::vector<std::array<double, 7>> pts(opts.starts);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.0, two_pi);
    for (auto& p : pts)
        for (double& c : p)
            c = uni(rng);

    std::vector<double> vals(opts.starts);
    constexpr int kBatch = 250;
    const int batches = (opts.starts + kBatch - 1) / kBatch;
    detail::run_parallel(batches, opts.threads, [&](int b) {
        const int end = std::min(opts.starts, (b + 1) * kBatch);
        for (int i = b * kBatch; i < end; ++i)
            vals[i] = detail::coordinate_ascent(f, pts[i], 0.5, opts.coarse_tolerance,
                                                opts.coarse_sweeps);
    });

    // Best coarse results first (index breaks ties), skipping near-duplicates.
    std::vector<int> order(opts.starts);
    for (int i = 0; i < opts.starts; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return vals[a] != vals[b] ? vals[a] > vals[b] : a < b;
    });
    std::vector<int> chosen;
    for (int i : order) {
        if (static_cast<int>(chosen.size()) >= opts.refine_top)
            break;
        bool dup = false;
        for (int j : chosen) {
            double d = 0.0;
            for (int k = 0; k < 7; ++k)
                d = std::max(d, std::fabs(std::remainder(pts[i][k] - pts[j][k], two_pi)));
            dup = dup || d < 1e-3;
        }
        if (!dup)
            chosen.push_back(i);
    }

    GSearch out;
    out.refined.resize(chosen.size());
    detail::run_parallel(static_cast<int>(chosen.size()), opts.threads, [&](int k) {
        GLocalMax lm;
        lm.point = pts[chosen[k]];
        lm.value = detail::coordinate_ascent(f, lm.point, 1e-2, opts.tolerance, 20000);
        lm.critical_residual =
            g_critical_residual(lm.point[0], {lm.point[1], lm.point[2], lm.point[3], lm.point[4],
                                              lm.point[5], lm.point[6]});
        out.refined[k] = lm;
    });

    OptimizationReport& rep = out.report;
    rep.starts = static_cast<std::uint64_t>(opts.starts);
    rep.refinement_tolerance = opts.tolerance;
    rep.seed = opts.seed;
    rep.target = 8.0 * lobachevsky(std::numbers::pi / 8);
    for (const auto& lm : out.refined)
        if (lm.value > rep.best_value) {
            rep.best_value = lm.value;
            rep.best_point.assign(lm.point.begin(), lm.point.end());
            rep.critical_residual = lm.critical_residual;
        }
    rep.matches_target = std::fabs(rep.best_value - rep.target) <= 1e-3;
    return out;
}

inline OptimizationReport maximize_g(const MaximizeGOptions& opts = {})
{
    return search_g(opts).report;
}

} // namespace tvinv
