#pragma once

// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 input error, 3 internal-consistency error.

#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tvinv/appendixopt.hpp"
#include "tvinv/asymptotics.hpp"
#include "tvinv/census.hpp"
#include "tvinv/complexes.hpp"
#include "tvinv/errors.hpp"
#include "tvinv/lobachevsky.hpp"
#include "tvinv/report_io.hpp"
#include "tvinv/sixj.hpp"
#include "tvinv/statesum.hpp"
#include "tvinv/verify.hpp"

namespace tvinv {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInput = 2, kExitConsistency = 3 };

/// Parsed command line.
struct RunConfig {
    std::string command;
    std::string builtin;
    std::string manifest;
    std::optional<int> r;
    std::string r_range;
    std::string format = "json";
    unsigned threads = 1;
    std::string precision = "standard";
    bool betti_factor = false;
    std::uint64_t seed = kDefaultAppendixSeed;
    std::string only;
    std::optional<double> tolerance;
    std::vector<int> colors;
    std::vector<double> xs;
};

namespace detail {

inline void check_level(int r)
{
    if (r < 5 || r % 2 == 0)
        throw DomainError("level must be odd ≥ 5 (got " + std::to_string(r) + ")");
}

/// Levels from --r or --r-range A:B (odd r between A and B).
inline std::vector<int> config_levels(const RunConfig& cfg)
{
    if (cfg.r && !cfg.r_range.empty())
        throw DomainError("give either --r or --r-range, not both");
    if (cfg.r) {
        check_level(*cfg.r);
        return {*cfg.r};
    }
    if (cfg.r_range.empty())
        throw DomainError("missing --r or --r-range");
    const auto colon = cfg.r_range.find(':');
    int a = 0, b = 0;
    try {
        if (colon == std::string::npos)
            throw std::invalid_argument("no colon");
        std::size_t used = 0;
        a = std::stoi(cfg.r_range.substr(0, colon), &used);
        if (used != colon)
            throw std::invalid_argument("trailing characters");
        const std::string rest = cfg.r_range.substr(colon + 1);
        b = std::stoi(rest, &used);
        if (used != rest.size())
            throw std::invalid_argument("trailing characters");
    }
    catch (const std::logic_error&) {
        throw DomainError("--r-range must look like A:B, got '" + cfg.r_range + "'");
    }
    check_level(a);
    check_level(b);
    if (a > b)
        throw DomainError("empty level range " + cfg.r_range);
    std::vector<int> out;
    for (int r = a; r <= b; r += 2)
        out.push_back(r);
    return out;
}

inline Triangulation config_manifold(const RunConfig& cfg)
{
    if (!cfg.manifest.empty())
        return load_manifest(cfg.manifest);
    if (cfg.builtin.empty())
        throw DomainError("missing --builtin or --manifest");
    return builtin(cfg.builtin);
}

inline TuraevViroOptions config_tv_options(const RunConfig& cfg)
{
    TuraevViroOptions o;
    o.threads = cfg.threads;
    o.apply_betti_factor = cfg.betti_factor;
    o.precision = cfg.precision == "oracle" ? Precision::Oracle : Precision::Standard;
    return o;
}

inline int cmd_tv(const RunConfig& cfg, std::ostream& out)
{
    const Triangulation tri = config_manifold(cfg);
    const auto levels = config_levels(cfg);
    const auto opts = config_tv_options(cfg);
    if (cfg.format == "csv")
        out << join_csv(tv_csv_columns()) << "\n";
    for (int r : levels) {
        const StateSumResult res = turaev_viro(tri, Level(r), opts);
        if (cfg.format == "csv")
            out << to_csv_row(res, tri.name()) << "\n";
        else
            out << to_json(res, tri.name()).dump() << "\n";
    }
    return kExitOk;
}

inline int cmd_sixj(const RunConfig& cfg, std::ostream& out)
{
    if (!cfg.r)
        throw DomainError("sixj needs --r");
    check_level(*cfg.r);
    const Level lvl(*cfg.r);
    SixTuple s;
    for (int k = 0; k < 6; ++k)
        s.a[k] = cfg.colors[k];
    const SixJDetail d = SixJEvaluator(lvl).evaluate(s);
    const Json j = to_json(s, lvl, d);
    if (cfg.format == "csv") {
        out << "r,a0,a1,a2,a3,a4,a5,re,im,sign,log_mag,imaginary\n" << lvl.r();
        for (int c : s.a)
            out << "," << c;
        const double v = d.value.to_real();
        out << "," << format_double(d.imaginary ? 0.0 : v) << ","
            << format_double(d.imaginary ? v : 0.0) << "," << d.value.sign << ","
            << (d.value.is_zero() ? "" : format_double(d.value.log_mag)) << ","
            << (j["imaginary"].get<bool>() ? "true" : "false") << "\n";
    }
    else
        out << j.dump(2) << "\n";
    return kExitOk;
}

inline int cmd_lob(const RunConfig& cfg, std::ostream& out)
{
    const double pi = std::numbers::pi;
    std::vector<std::pair<std::string, double>> rows;
    if (cfg.xs.empty()) {
        const GeometricConstants k = constants();
        rows = {{"Lambda(pi/8)", lobachevsky(pi / 8)},
                {"Lambda(pi/6)", lobachevsky(pi / 6)},
                {"Lambda(pi/4)", lobachevsky(pi / 4)},
                {"8 Lambda(pi/8)", 8 * lobachevsky(pi / 8)},
                {"v3", k.v3},
                {"v8", k.v8}};
    }
    else
        for (double x : cfg.xs)
            rows.emplace_back(format_double(x), lobachevsky(x));
    if (cfg.format == "csv") {
        out << "name,value\n";
        for (const auto& [n, v] : rows)
            out << n << "," << format_double(v) << "\n";
    }
    else {
        Json j = Json::array();
        for (const auto& [n, v] : rows)
            j.push_back(Json{{"name", n}, {"value", v}});
        out << j.dump(2) << "\n";
    }
    return kExitOk;
}

inline int cmd_growth(const RunConfig& cfg, std::ostream& out)
{
    const Triangulation tri = config_manifold(cfg);
    const auto levels = config_levels(cfg);
    const GrowthSeries s =
        growth_series(tri, levels.front(), levels.back(), config_tv_options(cfg));
    const BoundReport b = bound_report(tri, s);
    if (cfg.format == "csv")
        out << growth_csv(s);
    else {
        Json j = to_json(s);
        j["bounds"] = to_json(b);
        out << j.dump(2) << "\n";
    }
    return b.all_satisfied() ? kExitOk : kExitVerifyFailed;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    VerifyOptions o;
    o.only = cfg.only;
    o.tolerance = cfg.tolerance;
    o.threads = cfg.threads;
    o.seed = cfg.seed;
    const VerifyReport rep = run_verify(o);
    if (rep.checks.empty())
        throw DomainError("--only '" + cfg.only + "' selects no checks");
    if (cfg.format == "csv") {
        out << "group,name,passed,measured,tolerance,detail\n";
        for (const auto& c : rep.checks)
            out << c.group << "," << c.name << "," << (c.passed ? "true" : "false") << ","
                << format_double(c.measured) << "," << format_double(c.tolerance) << ","
                << Json(c.detail).dump() << "\n";
    }
    else {
        Json checks = Json::array();
        for (const auto& c : rep.checks)
            checks.push_back(Json{{"group", c.group},
                                  {"name", c.name},
                                  {"passed", c.passed},
                                  {"measured", json_number(c.measured)},
                                  {"tolerance", json_number(c.tolerance)},
                                  {"detail", c.detail}});
        out << Json{{"passed", rep.passed()}, {"checks", checks}}.dump(2) << "\n";
    }
    return rep.passed() ? kExitOk : kExitVerifyFailed;
}

inline int cmd_builtins(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.format == "csv") {
        out << "name,tets,description\n";
        for (const auto& e : census_entries())
            out << e.name << "," << e.criteria.tets << "," << Json(std::string(e.description)).dump()
                << "\n";
        return kExitOk;
    }
    Json j = Json::array();
    for (const auto& e : census_entries())
        j.push_back(Json{{"name", std::string(e.name)},
                         {"tets", e.criteria.tets},
                         {"description", std::string(e.description)}});
    out << j.dump(2) << "\n";
    return kExitOk;
}

} // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Turaev-Viro invariants, 6j-symbols and growth-rate checks", "tvinv"};
    app.require_subcommand(1);

    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    };
    auto add_input = [&](CLI::App* sub) {
        auto* b = sub->add_option("--builtin", cfg.builtin, "Builtin triangulation name");
        auto* m = sub->add_option("--manifest", cfg.manifest, "Manifest file (JSON)");
        b->excludes(m);
        m->excludes(b);
    };
    auto add_levels = [&](CLI::App* sub) {
        sub->add_option("--r", cfg.r, "Odd level r >= 5");
        sub->add_option("--r-range", cfg.r_range, "Odd levels A:B");
    };

    auto* tv = app.add_subcommand("tv", "Turaev-Viro invariant");
    add_input(tv);
    add_levels(tv);
    add_format(tv);
    add_threads(tv);
    tv->add_option("--precision", cfg.precision, "standard or oracle (256-bit)")
        ->check(CLI::IsMember({"standard", "oracle"}));
    tv->add_flag("--betti-factor", cfg.betti_factor, "Multiply by 2^(b2-b0)");

    auto* sixj = app.add_subcommand("sixj", "Quantum 6j-symbol of six colors");
    sixj->add_option("colors", cfg.colors, "Six even colors")->required()->expected(6);
    sixj->add_option("--r", cfg.r, "Odd level r >= 5")->required();
    add_format(sixj);

    auto* lob = app.add_subcommand("lob", "Lobachevsky function and volume constants");
    lob->add_option("x", cfg.xs, "Arguments in radians (default: the standard constants)");
    add_format(lob);

    auto* growth = app.add_subcommand("growth", "Growth rates (2pi/r) log|TV_r| and bounds");
    add_input(growth);
    add_levels(growth);
    add_format(growth);
    add_threads(growth);

    auto* verify = app.add_subcommand("verify", "Run the aggregated numeric checks");
    verify->add_option("--only", cfg.only, "Group or check name prefix");
    verify->add_option("--tolerance", cfg.tolerance, "Override every check tolerance");
    verify->add_option("--seed", cfg.seed, "Seed for the appendix multi-start search");
    add_format(verify);
    add_threads(verify);

    auto* builtins = app.add_subcommand("builtins", "List builtin triangulations");
    add_format(builtins);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (tv->parsed())
            return detail::cmd_tv(cfg, out);
        if (sixj->parsed())
            return detail::cmd_sixj(cfg, out);
        if (lob->parsed())
            return detail::cmd_lob(cfg, out);
        if (growth->parsed())
            return detail::cmd_growth(cfg, out);
        if (verify->parsed())
            return detail::cmd_verify(cfg, out);
        if (builtins->parsed())
            return detail::cmd_builtins(cfg, out);
    }
    catch (const ManifestError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    catch (const ConsistencyError& e) {
        err << "internal consistency error: " << e.what() << "\n";
        return kExitConsistency;
    }
    catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitConsistency;
    }
    return kExitInput;
}

} // namespace tvinv
