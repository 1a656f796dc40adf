#pragma once

// JSON and CSV forms of results. Doubles go to CSV with 17 significant
// digits; JSON uses the shortest text that parses back to the same double.
// Non-finite numbers become JSON null / empty CSV fields. Wall-clock times
// are never serialized, so identical runs give identical bytes.

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"

#include "tvinv/appendixopt.hpp"
#include "tvinv/asymptotics.hpp"
#include "tvinv/sixj.hpp"
#include "tvinv/statesum.hpp"

namespace tvinv {

using Json = nlohmann::ordered_json;

inline std::string format_double(double x)
{
    if (!std::isfinite(x))
        return std::isnan(x) ? "" : (x > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline Json json_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline double number_from_json(const Json& j)
{
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline Json to_json(const SignedLog& v)
{
    return Json{{"sign", v.sign}, {"log_mag", v.is_zero() ? Json(nullptr) : Json(v.log_mag)}};
}

inline Json to_json(const StateSumResult& res, const std::string& name = {})
{
    Json j;
    if (!name.empty())
        j["manifold"] = name;
    j["r"] = res.r;
    j["value"] = json_number(res.value);
    j["log_value"] = to_json(res.log_value);
    j["colorings_visited"] = res.colorings_visited;
    j["admissible_count"] = res.admissible_count;
    j["peak_term_log"] = json_number(res.peak_term_log);
    j["factor_applied"] = res.factor_applied;
    j["interior_vertices"] = res.interior_vertices;
    j["precision"] = to_string(res.precision);
    return j;
}

inline const std::vector<std::string>& tv_csv_columns()
{
    static const std::vector<std::string> cols{
        "manifold",          "r",           "value",     "log_sign",
        "log_mag",           "colorings_visited", "admissible_count", "peak_term_log",
        "factor_applied",    "interior_vertices", "precision"};
    return cols;
}

inline std::string join_csv(const std::vector<std::string>& fields)
{
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i)
        out += (i ? "," : "") + fields[i];
    return out;
}

inline std::string to_csv_row(const StateSumResult& res, const std::string& name)
{
    return join_csv({name, std::to_string(res.r), format_double(res.value),
                     std::to_string(res.log_value.sign),
                     res.log_value.is_zero() ? "" : format_double(res.log_value.log_mag),
                     std::to_string(res.colorings_visited), std::to_string(res.admissible_count),
                     format_double(res.peak_term_log), res.factor_applied ? "true" : "false",
                     std::to_string(res.interior_vertices), to_string(res.precision)});
}

inline Json to_json(const SixTuple& s, const Level& lvl, const SixJDetail& d)
{
    const double v = d.value.to_real();
    Json j;
    j["r"] = lvl.r();
    j["tuple"] = s.a;
    j["value"] = d.imaginary && !d.value.is_zero() ? Json(nullptr) : Json(v);
    j["re"] = d.imaginary ? 0.0 : v;
    j["im"] = d.imaginary ? v : 0.0;
    j["imaginary"] = d.imaginary && !d.value.is_zero();
    j["sign"] = d.value.sign;
    j["log_mag"] = d.value.is_zero() ? Json(nullptr) : Json(d.value.log_mag);
    return j;
}

inline Json to_json(const BoundEntry& e)
{
    return Json{{"name", e.name},         {"lhs", json_number(e.lhs)},
                {"rhs", json_number(e.rhs)}, {"slack", json_number(e.slack())},
                {"tolerance", e.tolerance}, {"status", to_string(e.status)},
                {"satisfied", e.satisfied()}, {"note", e.note}};
}

inline Json to_json(const BoundReport& rep)
{
    Json arr = Json::array();
    for (const auto& e : rep.entries)
        arr.push_back(to_json(e));
    return arr;
}

inline Json to_json(const GrowthSeries& s)
{
    Json j;
    j["manifold"] = s.name;
    Json pts = Json::array();
    for (const auto& p : s.points)
        pts.push_back(Json{{"r", p.r},
                           {"tv", json_number(p.tv)},
                           {"log_tv", to_json(p.log_tv)},
                           {"a_r", json_number(p.a_r)},
                           {"zero", p.zero}});
    j["points"] = pts;
    if (s.fit)
        j["fit"] = Json{{"A", s.fit->A},
                        {"B", s.fit->B},
                        {"C", s.fit->C},
                        {"residual_norm", s.fit->residual_norm}};
    else
        j["fit"] = nullptr;
    j["ltv_estimate"] = s.fit ? Json(s.fit->A) : Json(nullptr);
    return j;
}

/// Columns r, tv, a_r.
inline std::string growth_csv(const GrowthSeries& s)
{
    std::string out = "r,tv,a_r\n";
    for (const auto& p : s.points)
        out += join_csv({std::to_string(p.r), format_double(p.tv), format_double(p.a_r)}) + "\n";
    return out;
}

inline Json to_json(const OptimizationReport& rep)
{
    Json pt = Json::array();
    for (double x : rep.best_point)
        pt.push_back(x);
    return Json{{"best_value", rep.best_value},
                {"best_point", pt},
                {"starts", rep.starts},
                {"refinement_tolerance", rep.refinement_tolerance},
                {"target", rep.target},
                {"matches_target", rep.matches_target},
                {"critical_residual", rep.critical_residual},
                {"seed", rep.seed}};
}

} // namespace tvinv
