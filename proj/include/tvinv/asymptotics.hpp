#pragma once

// Growth rates (2 pi / r) log|TV_r|, their least-squares extrapolation, and
// numeric checks of the analytic bounds on quantum factorials, 6j-symbols
// and the invariants themselves.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tvinv/complexes.hpp"
#include "tvinv/errors.hpp"
#include "tvinv/lobachevsky.hpp"
#include "tvinv/qarith.hpp"
#include "tvinv/sixj.hpp"
#include "tvinv/statesum.hpp"

namespace tvinv {

/// Universal constant of the Gromov-norm bound LTV(M) <= C ||M||.
inline constexpr double kGromovBoundConstant = 8.3581e9;
/// Per-tetrahedron constant of LTV(M) <= 2.08 v8 t.
inline constexpr double kTetrahedronBoundFactor = 2.08;

struct GrowthPoint {
    int r = 0;
    double tv = 0.0;
    SignedLog log_tv;
    /// (2 pi / r) log|TV_r|; NaN when TV_r = 0.
    double a_r = std::numeric_limits<double>::quiet_NaN();
    bool zero = false;
};

/// a_r ~ A + B log(r)/r + C/r.
struct GrowthFit {
    double A = 0.0, B = 0.0, C = 0.0;
    double residual_norm = 0.0;
};

struct GrowthSeries {
    std::string name;
    std::vector<GrowthPoint> points;
    std::optional<GrowthFit> fit;

    /// The fitted A; absent without a fit.
    std::optional<double> ltv_estimate() const
    {
        if (!fit)
            return std::nullopt;
        return fit->A;
    }
};

/// Least squares over the nonzero points; needs at least four of them.
inline std::optional<GrowthFit> fit_growth(const std::vector<GrowthPoint>& points)
{
    std::vector<const GrowthPoint*> used;
    for (const auto& p : points)
        if (!p.zero)
            used.push_back(&p);
    if (used.size() < 4)
        return std::nullopt;
    const auto n = static_cast<Eigen::Index>(used.size());
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = used[i]->r;
        X(i, 0) = 1.0;
        X(i, 1) = std::log(r) / r;
        X(i, 2) = 1.0 / r;
        y(i) = used[i]->a_r;
    }
    const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(y);
    GrowthFit f;
    f.A = beta(0);
    f.B = beta(1);
    f.C = beta(2);
    f.residual_norm = (X * beta - y).norm();
    return f;
}

inline void validate_level_range(int r_min, int r_max)
{
    for (int r : {r_min, r_max})
        if (r < 5 || r % 2 == 0)
            throw DomainError("level must be odd >= 5, got " + std::to_string(r));
    if (r_min > r_max)
        throw DomainError("empty level range " + std::to_string(r_min) + ":" +
                          std::to_string(r_max));
}

inline GrowthPoint growth_point(const StateSumResult& res)
{
    GrowthPoint p;
    p.r = res.r;
    p.tv = res.value;
    p.log_tv = res.log_value;
    p.zero = res.log_value.is_zero();
    if (!p.zero)
        p.a_r = 2.0 * std::numbers::pi / res.r * res.log_value.log_mag;
    return p;
}

/// TV_r at every odd r in [r_min, r_max], ordered by r, with the fit.
inline GrowthSeries growth_series(const Triangulation& tri, int r_min, int r_max,
                                  const TuraevViroOptions& opts = {})
{
    validate_level_range(r_min, r_max);
    GrowthSeries s;
    s.name = tri.name();
    for (int r = r_min; r <= r_max; r += 2)
        s.points.push_back(growth_point(turaev_viro(tri, Level(r), opts)));
    s.fit = fit_growth(s.points);
    return s;
}

enum class BoundStatus { Satisfied, Violated, Skipped, Informational };

inline const char* to_string(BoundStatus s)
{
    switch (s) {
    case BoundStatus::Satisfied: return "satisfied";
    case BoundStatus::Violated: return "violated";
    case BoundStatus::Skipped: return "skipped";
    case BoundStatus::Informational: return "informational";
    }
    return "?";
}

struct BoundEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    BoundStatus status = BoundStatus::Satisfied;
    std::string note;

    /// rhs - lhs.
    double slack() const noexcept { return rhs - lhs; }
    bool satisfied() const noexcept { return status != BoundStatus::Violated; }
};

/// Entry that is satisfied iff lhs <= rhs + tolerance.
inline BoundEntry make_bound(std::string name, double lhs, double rhs, double tolerance,
                             std::string note = {})
{
    BoundEntry e{std::move(name), lhs, rhs, tolerance, BoundStatus::Satisfied, std::move(note)};
    e.status = lhs <= rhs + tolerance ? BoundStatus::Satisfied : BoundStatus::Violated;
    return e;
}

struct BoundReport {
    std::vector<BoundEntry> entries;

    bool all_satisfied() const
    {
        return std::all_of(entries.begin(), entries.end(),
                           [](const BoundEntry& e) { return e.satisfied(); });
    }

    const BoundEntry* find(const std::string& name) const
    {
        for (const auto& e : entries)
            if (e.name == name)
                return &e;
        return nullptr;
    }
};

/// Empirical constant for the factorial deviation ratio.
inline constexpr double kFactorialDeviationConstant = 1.0;

/// max over 0 < n < r of |log|{n}!| + (r / 2 pi) Lambda(2 pi n / r)| / log r.
inline double factorial_deviation_ratio(const Level& lvl)
{
    const int r = lvl.r();
    const double pi = std::numbers::pi;
    double log_fact = 0.0;
    double worst = 0.0;
    for (int n = 1; n < r; ++n) {
        log_fact += std::log(std::fabs(bracket(n, lvl)));
        const double dev = std::fabs(log_fact + r / (2.0 * pi) * lobachevsky(2.0 * pi * n / r));
        worst = std::max(worst, dev);
    }
    return worst / std::log(static_cast<double>(r));
}

inline BoundReport check_factorial_asymptotics(const Level& lvl,
                                               double constant = kFactorialDeviationConstant)
{
    if (lvl.r() < 5)
        throw DomainError("level must be odd >= 5, got " + std::to_string(lvl.r()));
    BoundReport rep;
    rep.entries.push_back(make_bound("factorial asymptotics r=" + std::to_string(lvl.r()),
                                     factorial_deviation_ratio(lvl), constant, 0.0,
                                     "max_n |log|{n}!| + (r/2pi)Lambda(2pi n/r)| / log r"));
    return rep;
}

/// Exhaustive maximum of (2 pi / r) log|6j| over admissible tuples.
struct SixJGrowthScan {
    int r = 0;
    double max_value = -std::numeric_limits<double>::infinity();
    SixTuple argmax;
    std::uint64_t tuples = 0;
    std::uint64_t nonzero = 0;
};

inline constexpr int kSixJScanCap = 31;
inline constexpr double kSixJGrowthSlack = 0.5;

/// Tuples are generated slot by slot; each face is checked as soon as its
/// three slots are set, so inadmissible branches are cut early.
inline SixJGrowthScan scan_sixj_growth(const Level& lvl, int cap = kSixJScanCap)
{
    const int r = lvl.r();
    if (r > cap) {
        const double n = lvl.color_count();
        throw DomainError("6j growth scan refused at r=" + std::to_string(r) + " (cap " +
                          std::to_string(cap) + "): about " +
                          std::to_string(static_cast<long long>(std::pow(n, 6))) +
                          " candidate tuples");
    }
    const SixJEvaluator eval(lvl);
    SixJGrowthScan out;
    out.r = r;
    const double scale = 2.0 * std::numbers::pi / r;
    auto ok = [&](int a, int b, int c) { return admissible_unchecked(a, b, c, r); };
    SixTuple s;
    auto& a = s.a;
    const int m = lvl.max_color();
    for (a[0] = 0; a[0] <= m; a[0] += 2)
        for (a[1] = 0; a[1] <= m; a[1] += 2)
            for (a[2] = 0; a[2] <= m; a[2] += 2) {
                if (!ok(a[0], a[1], a[2]))
                    continue;
                for (a[3] = 0; a[3] <= m; a[3] += 2)
                    for (a[4] = 0; a[4] <= m; a[4] += 2) {
                        if (!ok(a[2], a[3], a[4]))
                            continue;
                        for (a[5] = 0; a[5] <= m; a[5] += 2) {
                            if (!ok(a[1], a[3], a[5]) || !ok(a[0], a[4], a[5]))
                                continue;
                            ++out.tuples;
                            const SixJDetail v = eval.evaluate_unchecked(s);
                            if (v.value.is_zero())
                                continue;
                            ++out.nonzero;
                            const double g = scale * v.value.log_mag;
                            if (g > out.max_value) {
                                out.max_value = g;
                                out.argmax = s;
                            }
                        }
                    }
            }
    return out;
}

inline BoundReport max_sixj_growth(const Level& lvl, int cap = kSixJScanCap,
                                   double slack = kSixJGrowthSlack)
{
    const SixJGrowthScan scan = scan_sixj_growth(lvl, cap);
    const GeometricConstants k = constants();
    const double c1 = k.v8 + 8.0 * lobachevsky(std::numbers::pi / 8);
    std::string arg;
    for (int c : scan.argmax.a)
        arg += (arg.empty() ? "" : ",") + std::to_string(c);
    const std::string rs = " r=" + std::to_string(lvl.r());
    BoundReport rep;
    rep.entries.push_back(make_bound("6j growth" + rs, scan.max_value, c1 + slack, 0.0,
                                     "max over " + std::to_string(scan.tuples) +
                                         " admissible tuples at (" + arg +
                                         "); rhs = v8 + 8 Lambda(pi/8) + slack"));
    BoundEntry sharp = make_bound("6j growth vs v8" + rs, scan.max_value, k.v8, 0.0,
                                  "comparison with the sharp constant v8");
    sharp.status = BoundStatus::Informational;
    rep.entries.push_back(sharp);
    return rep;
}

struct BoundOptions {
    /// Allowance for the finite-sample LTV estimate in the Gromov-norm bound.
    double ltv_tolerance = 0.1;
    double tolerance = 1e-9;
};

/// Checks a series against the tetrahedron-count and Gromov-norm bounds and
/// reports the volume-conjecture gap.
inline BoundReport bound_report(const Triangulation& tri, const GrowthSeries& series,
                                const BoundOptions& opts = {})
{
    if (series.points.empty())
        throw DomainError("bound report needs a nonempty series");
    const GeometricConstants k = constants();
    BoundReport rep;

    double max_a = -std::numeric_limits<double>::infinity();
    int at = 0;
    for (const auto& p : series.points)
        if (!p.zero && p.a_r > max_a) {
            max_a = p.a_r;
            at = p.r;
        }
    const int t = tri.tet_count();
    if (std::isfinite(max_a))
        rep.entries.push_back(make_bound("tetrahedra bound", max_a,
                                         kTetrahedronBoundFactor * k.v8 * t, opts.tolerance,
                                         "max a_r (at r=" + std::to_string(at) +
                                             ") <= 2.08 v8 t, t=" + std::to_string(t)));
    else {
        BoundEntry e{"tetrahedra bound", 0.0, kTetrahedronBoundFactor * k.v8 * t,
                     opts.tolerance, BoundStatus::Skipped, "all TV_r vanish"};
        rep.entries.push_back(e);
    }

    const auto norm = tri.metadata().gromov_norm;
    const auto ltv = series.ltv_estimate();
    if (!norm || !ltv) {
        BoundEntry e{"gromov bound", ltv.value_or(0.0), 0.0, opts.ltv_tolerance,
                     BoundStatus::Skipped, !norm ? "no gromov_norm metadata" : "fit unavailable"};
        rep.entries.push_back(e);
    }
    else
        rep.entries.push_back(make_bound("gromov bound", *ltv, kGromovBoundConstant * *norm,
                                         opts.ltv_tolerance, "ltv_estimate <= C ||M||"));

    if (norm && ltv) {
        BoundEntry e{"volume conjecture gap", std::fabs(*ltv - k.v3 * *norm), 0.0, 0.0,
                     BoundStatus::Informational, "|ltv_estimate - v3 ||M|||"};
        rep.entries.push_back(e);
    }
    return rep;
}

/// TV_r(M) <= ((r-1)/2)^tori * TV_r(M') + tolerance.
inline bool check_cutting_inequality(const StateSumResult& m, const StateSumResult& m_prime,
                                     int tori_cut, double tolerance = 1e-9)
{
    if (m.r != m_prime.r)
        throw DomainError("cutting inequality mixes levels r=" + std::to_string(m.r) +
                          " and r=" + std::to_string(m_prime.r));
    if (tori_cut < 0)
        throw DomainError("negative number of cut tori");
    const double factor = std::pow((m.r - 1) / 2.0, tori_cut);
    return m.value <= factor * m_prime.value + tolerance;
}

} // namespace tvinv
