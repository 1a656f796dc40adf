#pragma once

// Aggregated numeric checks: closed-form oracles for the state sum, the 6j
// oracle and growth bound, factorial asymptotics, Lobachevsky values and the
// appendix maxima. Every check carries a tolerance that can be overridden.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tvinv/appendixopt.hpp"
#include "tvinv/asymptotics.hpp"
#include "tvinv/census.hpp"
#include "tvinv/lobachevsky.hpp"
#include "tvinv/sixj.hpp"
#include "tvinv/sixj_oracle.hpp"
#include "tvinv/statesum.hpp"

namespace tvinv {

struct VerifyCheck {
    std::string group;
    std::string name;
    bool passed = false;
    /// Worst observed deviation (or the measured quantity).
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    /// Run only checks whose group or name starts with this.
    std::string only;
    /// Replaces every check's tolerance.
    std::optional<double> tolerance;
    unsigned threads = 1;
    std::uint64_t seed = kDefaultAppendixSeed;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;

    bool passed() const
    {
        for (const auto& c : checks)
            if (!c.passed)
                return false;
        return true;
    }
};

inline double relative_error(double x, double expected)
{
    const double d = std::fabs(x - expected);
    return expected == 0.0 ? d : d / std::fabs(expected);
}

namespace detail {

inline std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

/// State-sum results shared between checks, computed on first use.
class TvCache {
public:
    explicit TvCache(unsigned threads) : threads_(threads) {}

    const StateSumResult& get(const std::string& name, int r)
    {
        auto key = std::make_pair(name, r);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        TuraevViroOptions o;
        o.threads = threads_;
        return cache_.emplace(key, turaev_viro(manifold(name), Level(r), o)).first->second;
    }

    /// Builtins plus "s3_2tet+s2xs1", their disjoint union.
    const Triangulation& manifold(const std::string& name)
    {
        if (name == "s3_2tet+s2xs1") {
            if (!union_)
                union_ = disjoint_union(builtin("s3_2tet"), builtin("s2xs1"));
            return *union_;
        }
        return builtin(name);
    }

private:
    unsigned threads_;
    std::map<std::pair<std::string, int>, StateSumResult> cache_;
    std::optional<Triangulation> union_;
};

/// Largest deviation over odd r in [lo, hi] and where it occurred.
template <typename Dev>
std::pair<double, int> worst_over(int lo, int hi, Dev&& dev)
{
    double worst = 0.0;
    int at = lo;
    for (int r = lo; r <= hi; r += 2) {
        const double d = dev(r);
        if (!(d <= worst)) {
            worst = d;
            at = r;
        }
    }
    return {worst, at};
}

inline VerifyCheck deviation_check(std::string group, std::string name, double worst, int at,
                                   double tol, const std::string& what)
{
    VerifyCheck c{std::move(group), std::move(name), worst <= tol, worst, tol, {}};
    c.detail = what + ": worst " + fmt(worst) + " at r=" + std::to_string(at);
    return c;
}

/// Worst relative difference between the 6j evaluator and the 256-bit
/// literal formula over all admissible tuples at r. Symbols whose literal
/// value vanishes are compared against the size of their terms instead.
inline std::pair<double, std::uint64_t> sixj_oracle_deviation(int r)
{
    const Level lvl(r);
    const SixJEvaluator eval(lvl);
    const LiteralLevel<OracleReal> L(r);
    double worst = 0.0;
    std::uint64_t n = 0;
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
                            ++n;
                            const SixJDetail d = eval.evaluate_unchecked(s);
                            const double v = d.value.to_real();
                            const double re = d.imaginary ? 0.0 : v;
                            const double im = d.imaginary ? v : 0.0;
                            const auto lit = six_j_literal(s, L);
                            const double lre = static_cast<double>(lit.re);
                            const double lim = static_cast<double>(lit.im);
                            const double mag = std::hypot(lre, lim);
                            const double err = std::hypot(re - lre, im - lim);
                            const double ref =
                                mag > 1e-30 * std::exp(d.scale_log) ? mag : std::exp(d.scale_log);
                            worst = std::max(worst, err / ref);
                        }
    return {worst, n};
}

/// Number of (tuple, relabeling) pairs at r whose value differs in any bit.
inline std::uint64_t sixj_symmetry_failures(int r)
{
    const Level lvl(r);
    const SixJEvaluator eval(lvl);
    std::uint64_t bad = 0;
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
                            const SixJDetail d = eval.evaluate_unchecked(s);
                            for (const auto& p : tetrahedral_relabelings()) {
                                const SixJDetail e = eval.evaluate_unchecked(relabel(s, p));
                                if (e.imaginary != d.imaginary || e.value.sign != d.value.sign ||
                                    (!d.value.is_zero() && e.value.log_mag != d.value.log_mag))
                                    ++bad;
                            }
                        }
    return bad;
}

} // namespace detail

/// Runs the selected checks in a fixed order.
inline VerifyReport run_verify(const VerifyOptions& opts = {})
{
    using detail::deviation_check;
    using detail::worst_over;
    detail::TvCache tv(opts.threads);
    const double pi = std::numbers::pi;
    VerifyReport rep;

    auto selected = [&](const std::string& group, const std::string& name) {
        return opts.only.empty() || group.rfind(opts.only, 0) == 0 || name.rfind(opts.only, 0) == 0;
    };
    auto tol = [&](double dflt) { return opts.tolerance.value_or(dflt); };
    auto add = [&](const std::string& group, const std::string& name,
                   const std::function<VerifyCheck()>& run) {
        if (selected(group, name))
            rep.checks.push_back(run());
    };
    auto eta2 = [](int r) {
        const double e = eta(Level(r));
        return e * e;
    };

    // State sums against closed forms.
    add("statesum", "s3 oracle", [&] {
        auto [w, at] = worst_over(5, 51, [&](int r) {
            return relative_error(tv.get("s3_2tet", r).value, eta2(r));
        });
        return deviation_check("statesum", "s3 oracle", w, at, tol(1e-10),
                               "relative error of TV(s3_2tet) against eta^2, r=5..51");
    });
    add("statesum", "s2xs1 oracle", [&] {
        auto [w, at] = worst_over(5, 31, [&](int r) {
            return std::fabs(tv.get("s2xs1", r).value - 1.0);
        });
        return deviation_check("statesum", "s2xs1 oracle", w, at, tol(1e-10),
                               "absolute error of TV(s2xs1) against 1, r=5..31");
    });
    add("statesum", "t2xi oracle", [&] {
        auto [w, at] = worst_over(5, 31, [&](int r) {
            return relative_error(tv.get("t2xi", r).value, (r - 1) / 2.0);
        });
        return deviation_check("statesum", "t2xi oracle", w, at, tol(1e-9),
                               "relative error of TV(t2xi) against (r-1)/2, r=5..31");
    });
    add("statesum", "triangulation independence", [&] {
        auto [w, at] = worst_over(5, 31, [&](int r) {
            return relative_error(tv.get("s3_3tet", r).value, tv.get("s3_2tet", r).value);
        });
        return deviation_check("statesum", "triangulation independence", w, at, tol(1e-9),
                               "relative difference s3_3tet vs s3_2tet, r=5..31");
    });
    add("statesum", "multiplicativity", [&] {
        auto [w, at] = worst_over(5, 21, [&](int r) {
            const double prod =
                tv_disjoint_union({tv.get("s3_2tet", r), tv.get("s2xs1", r)}).value;
            return relative_error(tv.get("s3_2tet+s2xs1", r).value, prod);
        });
        return deviation_check("statesum", "multiplicativity", w, at, tol(1e-10),
                               "relative difference TV(s3_2tet+s2xs1) vs product, r=5..21");
    });
    add("statesum", "positivity", [&] {
        double worst = 0.0;
        std::string where = "none";
        for (const auto& name : builtin_names())
            for (int r = 5; r <= 31; r += 2) {
                const double v = tv.get(name, r).value;
                if (-v > worst) {
                    worst = -v;
                    where = name + " r=" + std::to_string(r);
                }
            }
        const double t = tol(1e-9);
        return VerifyCheck{"statesum", "positivity", worst <= t, worst, t,
                           "most negative TV over builtins r=5..31: " + detail::fmt(-worst) +
                               " (" + where + ")"};
    });
    add("statesum", "dehn filling", [&] {
        const double t = tol(1e-9);
        bool ok = true;
        double worst = -std::numeric_limits<double>::infinity();
        for (int r = 5; r <= 31; r += 2) {
            const auto& m = tv.get("s3_2tet", r);
            const auto& mp = tv.get("fig8", r);
            ok = ok && check_cutting_inequality(m, mp, 0, t);
            worst = std::max(worst, m.value - mp.value);
        }
        return VerifyCheck{"statesum", "dehn filling", ok, worst, t,
                           "max TV(s3_2tet) - TV(fig8) over r=5..31: " + detail::fmt(worst)};
    });

    // 6j-symbols.
    add("sixj", "sixj oracle", [&] {
        double worst = 0.0;
        int at = 5;
        std::uint64_t total = 0;
        for (int r : {5, 7, 9}) {
            auto [w, n] = detail::sixj_oracle_deviation(r);
            total += n;
            if (w > worst || r == 5) {
                worst = std::max(worst, w);
                at = r;
            }
        }
        auto c = deviation_check("sixj", "sixj oracle", worst, at, tol(1e-10),
                                 "relative error against 256-bit literal formula, r=5,7,9");
        c.detail += " (" + std::to_string(total) + " tuples)";
        return c;
    });
    add("sixj", "sixj symmetry", [&] {
        const double bad =
            static_cast<double>(detail::sixj_symmetry_failures(5) + detail::sixj_symmetry_failures(7));
        return VerifyCheck{"sixj", "sixj symmetry", bad == 0.0, bad, 0.0,
                           "relabelings with differing bits at r=5,7"};
    });
    add("sixj", "sixj growth", [&] {
        const double slack = opts.tolerance.value_or(kSixJGrowthSlack);
        bool ok = true;
        double worst = -1e300;
        std::string d;
        for (int r : {15, 21, 31}) {
            const BoundReport b = max_sixj_growth(Level(r), kSixJScanCap, slack);
            ok = ok && b.all_satisfied();
            worst = std::max(worst, b.entries[0].lhs);
            d += (d.empty() ? "" : "; ") + std::string("r=") + std::to_string(r) + " max " +
                 detail::fmt(b.entries[0].lhs);
        }
        const double c1 = constants().v8 + 8 * lobachevsky(pi / 8);
        return VerifyCheck{"sixj", "sixj growth", ok, worst, slack,
                           d + " (bound " + detail::fmt(c1) + " + slack, v8 " +
                               detail::fmt(constants().v8) + ")"};
    });

    // Asymptotics.
    add("asymptotics", "factorial asymptotics", [&] {
        const double r101 = factorial_deviation_ratio(Level(101));
        const double r501 = factorial_deviation_ratio(Level(501));
        const double r1001 = factorial_deviation_ratio(Level(1001));
        const double c = kFactorialDeviationConstant;
        const double growth = r1001 / r101;
        const bool ok = std::max({r101, r501, r1001}) <= c && growth <= 1.5;
        return VerifyCheck{"asymptotics", "factorial asymptotics", ok, growth, 1.5,
                           "ratios r=101,501,1001: " + detail::fmt(r101) + ", " +
                               detail::fmt(r501) + ", " + detail::fmt(r1001) + " (constant " +
                               detail::fmt(c) + ")"};
    });
    add("asymptotics", "fig8 growth", [&] {
        GrowthSeries s;
        s.name = "fig8";
        for (int r = 5; r <= 31; r += 2)
            s.points.push_back(growth_point(tv.get("fig8", r)));
        s.fit = fit_growth(s.points);
        bool mono = true;
        for (std::size_t i = 1; i < s.points.size(); ++i)
            if (s.points[i].r > 7 && !(s.points[i].a_r > s.points[i - 1].a_r))
                mono = false;
        const double a31 = s.points.back().a_r;
        const double target = 2 * constants().v3;
        const double ltv = s.ltv_estimate().value_or(0.0);
        const double dev = std::fabs(ltv - target) / target;
        const double t = tol(0.15);
        const BoundReport b = bound_report(builtin("fig8"), s);
        const bool ok = mono && a31 >= 1.5 && a31 <= 2.6 && dev <= t && b.all_satisfied();
        return VerifyCheck{"asymptotics", "fig8 growth", ok, dev, t,
                           std::string(mono ? "monotone" : "NOT monotone") + " for 7<=r<=31, a_31=" +
                               detail::fmt(a31) + ", ltv_estimate=" + detail::fmt(ltv) +
                               " vs 2v3=" + detail::fmt(target) + ", max a_r " +
                               detail::fmt(b.entries[0].lhs) + " <= " + detail::fmt(b.entries[0].rhs)};
    });
    add("asymptotics", "bound reports", [&] {
        std::string failed;
        for (const auto& name : builtin_names()) {
            GrowthSeries s;
            s.name = name;
            for (int r = 5; r <= 31; r += 2)
                s.points.push_back(growth_point(tv.get(name, r)));
            s.fit = fit_growth(s.points);
            for (const auto& e : bound_report(builtin(name), s).entries)
                if (!e.satisfied())
                    failed += (failed.empty() ? "" : ", ") + name + ":" + e.name;
        }
        return VerifyCheck{"asymptotics", "bound reports", failed.empty(),
                           failed.empty() ? 0.0 : 1.0, 0.0,
                           failed.empty() ? "all builtin bound entries satisfied"
                                          : "violated: " + failed};
    });

    // Lobachevsky function.
    add("lobachevsky", "lobachevsky values", [&] {
        const GeometricConstants k = constants();
        const double d1 = std::max(std::fabs(lobachevsky(pi / 8) - 0.490936),
                                   std::fabs(lobachevsky(pi / 4) - 0.457982));
        const double d2 = std::max(std::fabs(k.v3 - 1.0149), std::fabs(k.v8 - 3.6638));
        const double t1 = tol(1e-5), t2 = tol(1e-3);
        return VerifyCheck{"lobachevsky", "lobachevsky values", d1 <= t1 && d2 <= t2,
                           std::max(d1, d2), t2,
                           "Lambda(pi/8)=" + detail::fmt(lobachevsky(pi / 8)) +
                               " Lambda(pi/4)=" + detail::fmt(lobachevsky(pi / 4)) +
                               " v3=" + detail::fmt(k.v3) + " v8=" + detail::fmt(k.v8)};
    });

    // Appendix maxima.
    add("appendix", "maximize v", [&] {
        const OptimizationReport v = maximize_v();
        const double d = std::fabs(v.best_value - v.target);
        const double t = tol(1e-5);
        return VerifyCheck{"appendix", "maximize v", d <= t, d, t,
                           "max v=" + detail::fmt(v.best_value) + " vs v8/4=" +
                               detail::fmt(v.target)};
    });
    add("appendix", "maximize g", [&] {
        MaximizeGOptions o;
        o.seed = opts.seed;
        o.threads = opts.threads;
        const OptimizationReport g = maximize_g(o);
        const double d = std::fabs(g.best_value - g.target);
        const double at = g_func(7 * pi / 8, {pi / 2, pi / 2, pi / 2, pi / 2, pi / 2, pi / 2});
        const double d_at = std::fabs(at - g.best_value);
        const double t = tol(1e-3), t_at = tol(1e-6);
        return VerifyCheck{"appendix", "maximize g", d <= t && d_at <= t_at, d, t,
                           "max g=" + detail::fmt(g.best_value) + " vs 8 Lambda(pi/8)=" +
                               detail::fmt(g.target) + "; g(7pi/8, pi/2...)=" + detail::fmt(at) +
                               " (" + std::to_string(g.starts) + " starts, seed " +
                               std::to_string(g.seed) + ")"};
    });
    return rep;
}

} // namespace tvinv
