#pragma once

// Admissible colorings of edge classes and the Turaev-Viro state sum.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "tvinv/complexes.hpp"
#include "tvinv/double_double.hpp"
#include "tvinv/errors.hpp"
#include "tvinv/qarith.hpp"
#include "tvinv/sixj.hpp"
#include "tvinv/sixj_oracle.hpp"

namespace tvinv {

/// Colors indexed by edge class id.
struct Coloring {
    std::vector<int> colors;
    friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// |e|_c = (-1)^c [c+1]; for even colors simply [c+1], which may be negative.
inline double edge_weight(int c, const Level& lvl)
{
    validate_color(c, lvl);
    return quantum_integer(c + 1, lvl);
}

enum class Precision { Standard, Oracle };

inline const char* to_string(Precision p) { return p == Precision::Standard ? "standard" : "oracle"; }

struct TuraevViroOptions {
    /// Multiply by 2^{b2-b0}. Off by default: the plain sum already carries
    /// the TQFT normalization at these roots.
    bool apply_betti_factor = false;
    /// Worker count; 0 picks the hardware concurrency.
    unsigned threads = 1;
    Precision precision = Precision::Standard;
    /// Use the signed-log path even where double-double would apply.
    bool force_signed_log = false;
};

struct StateSumResult {
    int r = 0;
    double value = 0.0;
    SignedLog log_value;
    std::uint64_t colorings_visited = 0;
    std::uint64_t admissible_count = 0;
    /// log of the largest |term| of the sum (-inf when there are none).
    double peak_term_log = -std::numeric_limits<double>::infinity();
    bool factor_applied = false;
    int interior_vertices = 0;
    Precision precision = Precision::Standard;
    /// Wall time; the only field that varies between identical runs.
    double seconds = 0.0;
};

namespace detail {

/// Static schedule for the backtracking: classes are colored in id order and
/// each face/tetrahedron is handled at the depth of its largest class id.
/// The faces completed at a depth turn into an interval of allowed colors
/// for that class, so no rejected assignment is ever visited.
struct ColoringPlan {
    /// A face completed at some depth d: `copies` of its three classes are d,
    /// the rest are `x` (and `y`).
    struct Rule {
        int copies = 1;
        int x = 0;
        int y = 0;
    };

    int classes = 0;
    std::vector<std::array<int, 6>> tet_classes;
    /// Sorted class triple of every face class, by depth (repeats kept).
    std::vector<std::vector<std::array<int, 3>>> face_classes_at;
    std::vector<std::vector<Rule>> rules_at;
    std::vector<std::vector<int>> tets_at;
    /// Tetrahedra at each depth grouped up to tetrahedral relabeling of their
    /// class arrays (equal groups give equal 6j-symbols), with counts.
    std::vector<std::vector<std::pair<std::array<int, 6>, int>>> tet_groups_at;

    explicit ColoringPlan(const Triangulation& tri)
    {
        classes = static_cast<int>(tri.edge_classes().size());
        face_classes_at.resize(classes);
        rules_at.resize(classes);
        tets_at.resize(classes);
        std::vector<bool> face_done(tri.face_class_count(), false);
        for (int t = 0; t < tri.tet_count(); ++t)
            for (int f = 0; f < 4; ++f) {
                const int fc = tri.face_class_of(t, f);
                if (face_done[fc])
                    continue;
                face_done[fc] = true;
                std::array<int, 3> tr{};
                int n = 0;
                for (int x = 0; x < 4; ++x)
                    for (int y = x + 1; y < 4; ++y)
                        if (x != f && y != f)
                            tr[n++] = tri.edge_class_of(t, edge_slot(x, y));
                std::sort(tr.begin(), tr.end());
                const int d = tr[2];
                const bool repeat = std::find(face_classes_at[d].begin(), face_classes_at[d].end(),
                                              tr) != face_classes_at[d].end();
                face_classes_at[d].push_back(tr);
                if (repeat)
                    continue;
                Rule rule;
                rule.copies = static_cast<int>(std::count(tr.begin(), tr.end(), d));
                rule.x = tr[0];
                rule.y = rule.copies == 1 ? tr[1] : tr[0];
                rules_at[d].push_back(rule);
            }
        for (int t = 0; t < tri.tet_count(); ++t) {
            const auto tc = tri.tet_edge_classes(t);
            tet_classes.push_back(tc);
            tets_at[*std::max_element(tc.begin(), tc.end())].push_back(t);
        }
        tet_groups_at.resize(classes);
        for (int d = 0; d < classes; ++d)
            for (int t : tets_at[d]) {
                const auto& tc = tet_classes[t];
                auto same = [&](const std::array<int, 6>& other) {
                    for (const auto& p : tetrahedral_relabelings()) {
                        bool eq = true;
                        for (int k = 0; k < 6 && eq; ++k)
                            eq = other[p[k]] == tc[k];
                        if (eq)
                            return true;
                    }
                    return false;
                };
                auto& groups = tet_groups_at[d];
                auto it = std::find_if(groups.begin(), groups.end(),
                                       [&](const auto& g) { return same(g.first); });
                if (it == groups.end())
                    groups.emplace_back(tc, 1);
                else
                    ++it->second;
            }
    }

    /// Allowed colors [lo, hi] (even, lo > hi when empty) for class `depth`
    /// given the colors of classes below it.
    std::pair<int, int> range(int depth, const std::vector<int>& colors, int r) const noexcept
    {
        const int cap = 2 * (r - 2);
        int lo = 0, hi = r - 3;
        for (const Rule& rule : rules_at[depth]) {
            if (rule.copies == 1) {
                const int X = colors[rule.x], Y = colors[rule.y];
                lo = std::max(lo, X > Y ? X - Y : Y - X);
                hi = std::min(hi, std::min(X + Y, cap - X - Y));
            }
            else if (rule.copies == 2) {
                const int Y = colors[rule.y];
                lo = std::max(lo, (Y / 2 + 1) & ~1);
                hi = std::min(hi, ((cap - Y) / 2) & ~1);
            }
            else {
                hi = std::min(hi, (cap / 3) & ~1);
            }
        }
        return {lo, hi};
    }
};

/// Depth-first enumeration over the allowed color intervals.
/// `enter(depth, colors)` runs when a class gets a color and may veto;
/// `leaf(colors)` runs per admissible coloring.
template <typename Enter, typename Leaf>
class Backtracker {
public:
    Backtracker(const ColoringPlan& plan, int r, Enter& enter, Leaf& leaf)
        : plan_(plan), r_(r), enter_(enter), leaf_(leaf), colors_(plan.classes, 0)
    {
    }

    /// Runs the subtree where class 0 has color `first` (ignored when there
    /// are no classes).
    void run_from(int first)
    {
        if (plan_.classes == 0) {
            leaf_(colors_);
            return;
        }
        const auto [lo, hi] = plan_.range(0, colors_, r_);
        if (first >= lo && first <= hi)
            assign(0, first);
    }

    std::uint64_t visited() const noexcept { return visited_; }

private:
    void assign(int depth, int c)
    {
        colors_[depth] = c;
        ++visited_;
        if (!enter_(depth, colors_))
            return;
        const int next = depth + 1;
        if (next == plan_.classes) {
            leaf_(colors_);
            return;
        }
        const auto [lo, hi] = plan_.range(next, colors_, r_);
        for (int x = lo; x <= hi; x += 2)
            assign(next, x);
    }

    const ColoringPlan& plan_;
    int r_;
    Enter& enter_;
    Leaf& leaf_;
    std::vector<int> colors_;
    std::uint64_t visited_ = 0;
};

inline SixTuple tuple_of(const std::array<int, 6>& classes, const std::vector<int>& colors)
{
    SixTuple s;
    for (int k = 0; k < 6; ++k)
        s.a[k] = colors[classes[k]];
    return s;
}

/// Direct-mapped memo of 6j values; entries are overwritten on collision,
/// so lookups never change results. Switches itself off after a probe
/// window with almost no hits.
template <typename Value>
class SixJMemo {
public:
    explicit SixJMemo(unsigned log2_size = 14)
        : mask_((std::size_t{1} << log2_size) - 1), keys_(mask_ + 1, 0), vals_(mask_ + 1)
    {
    }

    template <typename Compute>
    Value get(const SixTuple& s, Compute&& compute)
    {
        // Stop looking up once the hit rate has proven negligible.
        if (!enabled_)
            return compute(s);
        if (++lookups_ == kProbe && hits_ * 32 < lookups_)
            enabled_ = false;
        std::uint64_t key = 1;
        for (int c : s.a)
            key = (key << 10) | static_cast<std::uint64_t>(c / 2);
        const std::size_t slot = (key * 0x9E3779B97F4A7C15ull >> 20) & mask_;
        if (keys_[slot] == key) {
            ++hits_;
            return vals_[slot];
        }
        const Value v = compute(s);
        keys_[slot] = key;
        vals_[slot] = v;
        return v;
    }

private:
    static constexpr std::uint64_t kProbe = 1 << 16;
    bool enabled_ = true;
    std::uint64_t lookups_ = 0;
    std::uint64_t hits_ = 0;
    std::size_t mask_;
    std::vector<std::uint64_t> keys_;
    std::vector<Value> vals_;
};

/// Neumaier-compensated double sum.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) noexcept
    {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }

    double value() const noexcept { return sum + carry; }
};

struct PartitionTotals {
    std::uint64_t visited = 0;
    std::uint64_t admissible = 0;
    double peak_log = -std::numeric_limits<double>::infinity();
    // Double-double mode.
    DoubleDouble extended;
    // Log mode.
    SignedLogAccumulator logsum;
};

[[noreturn]] inline void throw_imaginary_term(const std::vector<int>& colors)
{
    std::string c;
    for (int x : colors)
        c += (c.empty() ? "" : ",") + std::to_string(x);
    throw ConsistencyError("state-sum term for coloring (" + c +
                           ") has phase +-i; the sum would not be real");
}

/// Level data in double-double, rounded from 256-bit values.
struct ExtendedTables {
    int r = 0;
    std::vector<DoubleDouble> fact, inv_fact, weight;
    DoubleDouble zeta, eta_squared;

    explicit ExtendedTables(const Level& lvl) : r(lvl.r())
    {
        using R = OracleReal;
        const LiteralLevel<R> L(r);
        fact.resize(r + 1);
        inv_fact.resize(r + 1);
        R p(1);
        for (int n = 0; n < r; ++n) {
            if (n > 0)
                p *= L.bracket(n);
            fact[n] = DoubleDouble::from(p);
            inv_fact[n] = DoubleDouble::from(R(R(1) / p));
        }
        fact[r] = inv_fact[r] = DoubleDouble(0.0);
        for (int c = 0; c <= r - 3; c += 2)
            weight.push_back(DoubleDouble::from(L.quantum_integer(c + 1)));
        zeta = DoubleDouble::from(L.bracket(1));
        colors = lvl.color_count();
        if (r <= 257) {
            inv_pair.resize(static_cast<std::size_t>(r) * r);
            ratio.resize(static_cast<std::size_t>(r + 1) * r);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    inv_pair[static_cast<std::size_t>(i) * r + j] = inv_fact[i] * inv_fact[j];
            for (int i = 0; i <= r; ++i)
                for (int j = 0; j < r; ++j)
                    ratio[static_cast<std::size_t>(i) * r + j] = fact[i] * inv_fact[j];
        }
        if (colors <= 64) {
            delta_table.assign(static_cast<std::size_t>(colors) * colors * colors, DoubleDouble());
            for (int a = 0; a <= r - 3; a += 2)
                for (int b = 0; b <= r - 3; b += 2)
                    for (int c = 0; c <= r - 3; c += 2)
                        if (admissible_unchecked(a, b, c, r))
                            delta_table[(static_cast<std::size_t>(a / 2) * colors + b / 2) * colors +
                                        c / 2] = delta_squared(a, b, c);
        }
        const R e = L.eta();
        eta_squared = DoubleDouble::from(R(e * e));
    }

    /// Delta^2 / zeta, computed.
    DoubleDouble delta_squared(int a, int b, int c) const noexcept
    {
        return fact[(a + b - c) / 2] * fact[(b + c - a) / 2] * fact[(a + c - b) / 2] *
               inv_fact[(a + b + c) / 2 + 1];
    }

    /// Delta^2 / zeta of an admissible triple, from the table when present.
    DoubleDouble delta(int a, int b, int c) const noexcept
    {
        if (delta_table.empty())
            return delta_squared(a, b, c);
        const auto h = [](int x) { return static_cast<std::size_t>(static_cast<unsigned>(x) >> 1); };
        return delta_table[(h(a) * colors + h(b)) * colors + h(c)];
    }

    int colors = 0;
    std::vector<DoubleDouble> delta_table;
    /// inv_fact[i] * inv_fact[j] at index i * r + j.
    std::vector<DoubleDouble> inv_pair;
    /// fact[i] * inv_fact[j] at index i * r + j, i <= r.
    std::vector<DoubleDouble> ratio;

    /// (-1)^{lambda/2} times the alternating z-sum of a tuple.
    DoubleDouble z_sum(const SixTuple& s) const noexcept
    {
        const auto& a = s.a;
        // Colors are even and non-negative, so halving is a shift.
        const int T1 = (a[0] + a[1] + a[2]) >> 1, T2 = (a[0] + a[4] + a[5]) >> 1;
        const int T3 = (a[1] + a[3] + a[5]) >> 1, T4 = (a[2] + a[3] + a[4]) >> 1;
        const int Q1 = (a[0] + a[1] + a[3] + a[4]) >> 1, Q2 = (a[0] + a[2] + a[3] + a[5]) >> 1;
        const int Q3 = (a[1] + a[2] + a[4] + a[5]) >> 1;
        const int z_lo = std::max(std::max(T1, T2), std::max(T3, T4));
        const int z_hi = std::min(std::min(std::min(Q1, Q2), Q3), r - 2);
        DoubleDouble sum;
        if (!inv_pair.empty()) {
            // Few terms, each already carrying ~4u^2 relative error from its
            // products: error-free sums of the high parts plus a plain sum of
            // everything else loses nothing measurable.
            const std::size_t w = static_cast<std::size_t>(r);
            double hi = 0.0, lo = 0.0;
            for (int z = z_lo; z <= z_hi; ++z) {
                DoubleDouble t = ratio[(z + 1) * w + (z - T1)] *
                                 inv_pair[(z - T2) * w + (z - T3)] *
                                 (inv_pair[(z - T4) * w + (Q1 - z)] *
                                  inv_pair[(Q2 - z) * w + (Q3 - z)]);
                if (z & 1)
                    t = -t;
                const DoubleDouble s = detail::two_sum(hi, t.hi);
                hi = s.hi;
                lo += s.lo + t.lo;
            }
            sum = detail::two_sum(hi, lo);
        }
        else {
            for (int z = z_lo; z <= z_hi; ++z) {
                const DoubleDouble t = ((fact[z + 1] * inv_fact[z - T1]) *
                                        (inv_fact[z - T2] * inv_fact[z - T3])) *
                                       ((inv_fact[z - T4] * inv_fact[Q1 - z]) *
                                        (inv_fact[Q2 - z] * inv_fact[Q3 - z]));
                sum += (z & 1) ? -t : t;
            }
        }
        return (s.lambda() & 2) == 0 ? sum : -sum;
    }
};

class DirectPartition {
public:
    DirectPartition(const ColoringPlan& plan, const ExtendedTables& tab)
        : plan_(plan), tab_(tab), colors_(plan.classes, 0)
    {
    }

    PartitionTotals run(int first)
    {
        PartitionTotals out;
        if (plan_.classes == 0) {
            out.visited = out.admissible = 1;
            out.extended = DoubleDouble(1.0);
            out.peak_log = 0.0;
            return out;
        }
        const auto [lo, hi] = plan_.range(0, colors_, tab_.r);
        if (first >= lo && first <= hi)
            descend(0, DoubleDouble(1.0), first, first);
        out.visited = visited_;
        out.admissible = admissible_;
        out.extended = sum_;
        if (peak_ > 0)
            out.peak_log = std::log(peak_);
        return out;
    }

private:
    /// Colors class `depth` with every even value in [lo, hi].
    void descend(int depth, const DoubleDouble& parent, int lo, int hi)
    {
        if (lo > hi)
            return;
        visited_ += static_cast<std::uint64_t>((hi - lo) / 2 + 1);
        const auto& faces = plan_.face_classes_at[depth];
        const auto& groups = plan_.tet_groups_at[depth];
        const bool last = depth + 1 == plan_.classes;
        DoubleDouble local;
        for (int x = lo; x <= hi; x += 2) {
            colors_[depth] = x;
            DoubleDouble p = parent * tab_.weight[x / 2];
            for (const auto& f : faces)
                p *= tab_.delta(colors_[f[0]], colors_[f[1]], colors_[f[2]]);
            for (const auto& [classes, count] : groups) {
                const DoubleDouble v = tab_.z_sum(tuple_of(classes, colors_));
                const DoubleDouble v2 = count >= 2 ? v * v : v;
                for (int k = count; k >= 2; k -= 2)
                    p *= v2;
                if (count & 1)
                    p *= v;
            }
            if (last) {
                local += p;
                peak_ = std::max(peak_, std::fabs(p.hi));
                ++admissible_;
            }
            else if (!is_zero(p)) {
                const auto [nlo, nhi] = plan_.range(depth + 1, colors_, tab_.r);
                descend(depth + 1, p, nlo, nhi);
            }
            else {
                count_zero_subtree(depth + 1);
            }
        }
        if (last)
            sum_ += local;
    }

    /// Counts a subtree whose terms all vanish without multiplying.
    void count_zero_subtree(int depth)
    {
        const auto [lo, hi] = plan_.range(depth, colors_, tab_.r);
        if (lo > hi)
            return;
        visited_ += static_cast<std::uint64_t>((hi - lo) / 2 + 1);
        for (int x = lo; x <= hi; x += 2) {
            colors_[depth] = x;
            if (depth + 1 == plan_.classes)
                ++admissible_;
            else
                count_zero_subtree(depth + 1);
        }
    }

    const ColoringPlan& plan_;
    const ExtendedTables& tab_;
    std::vector<int> colors_;
    DoubleDouble sum_;
    double peak_ = 0.0;
    std::uint64_t visited_ = 0;
    std::uint64_t admissible_ = 0;
};

/// Sum over the colorings with class 0 colored `first`, in double-double.
///
/// Each tetrahedron contributes zeta^{-1} (-1)^{lambda/2} (z-sum) times the
/// square roots of its four Delta^2. Every face class borders exactly two
/// tetrahedra, so the square roots pair up to one Delta^2 per face class and
/// the term is real with no square roots taken. Since #face classes equals
/// 2 #tets, the zeta in each Delta^2 cancels the zeta^{-1} of the
/// tetrahedra up to zeta^{#tets}, which is applied by the caller.
inline PartitionTotals run_partition_direct(const ColoringPlan& plan, const ExtendedTables& tab,
                                            int first)
{
    return DirectPartition(plan, tab).run(first);
}

/// Same sum with every product kept in signed-log form.
inline PartitionTotals run_partition_log(const ColoringPlan& plan, const SixJEvaluator& eval,
                                         const std::vector<SignedLog>& weights, int first)
{
    PartitionTotals out;
    SixJMemo<SixJDetail> memo;
    std::vector<SignedLog> prod(plan.classes + 1, SignedLog::one());
    std::vector<int> imag(plan.classes + 1, 0);
    auto compute = [&](const SixTuple& s) { return eval.evaluate_unchecked(s); };
    auto enter = [&](int depth, const std::vector<int>& colors) {
        SignedLog p = prod[depth] * weights[colors[depth] / 2];
        int im = imag[depth];
        for (int t : plan.tets_at[depth]) {
            const SixJDetail v = memo.get(tuple_of(plan.tet_classes[t], colors), compute);
            p *= v.value;
            if (v.imaginary && ++im == 2) {
                im = 0;
                p.sign = -p.sign;
            }
        }
        prod[depth + 1] = p;
        imag[depth + 1] = im;
        return true;
    };
    auto leaf = [&](const std::vector<int>& colors) {
        if (imag[plan.classes] != 0 && !prod[plan.classes].is_zero())
            throw_imaginary_term(colors);
        ++out.admissible;
        out.logsum.add(prod[plan.classes]);
    };
    Backtracker<decltype(enter), decltype(leaf)> bt(plan, eval.level().r(), enter, leaf);
    bt.run_from(first);
    out.visited = bt.visited();
    out.peak_log = out.logsum.peak_log();
    return out;
}

/// Runs `job(k)` for k in [0, n) on up to `threads` workers.
template <typename Job>
void run_parallel(int n, unsigned threads, Job&& job)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));
    if (threads <= 1) {
        for (int k = 0; k < n; ++k)
            job(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int k = next++; k < n; k = next++)
                    job(k);
            }
            catch (...) {
                errors[w] = std::current_exception();
                next = n;
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace detail

/// Calls `visit(const Coloring&)` once per admissible coloring, in
/// lexicographic order of the class colors; returns the number of partial
/// assignments tried.
template <typename Visit>
std::uint64_t for_each_admissible(const Triangulation& tri, const Level& lvl, Visit&& visit)
{
    const detail::ColoringPlan plan(tri);
    Coloring col;
    auto enter = [](int, const std::vector<int>&) { return true; };
    auto leaf = [&](const std::vector<int>& colors) {
        col.colors = colors;
        visit(static_cast<const Coloring&>(col));
    };
    detail::Backtracker<decltype(enter), decltype(leaf)> bt(plan, lvl.r(), enter, leaf);
    if (plan.classes == 0)
        bt.run_from(0);
    else
        for (int c = 0; c <= lvl.max_color(); c += 2)
            bt.run_from(c);
    return bt.visited();
}

inline std::vector<Coloring> enumerate_admissible(const Triangulation& tri, const Level& lvl)
{
    std::vector<Coloring> out;
    for_each_admissible(tri, lvl, [&](const Coloring& c) { out.push_back(c); });
    return out;
}

namespace detail {

inline double betti_factor(const Triangulation& tri)
{
    const BettiNumbers b = betti_gf2(tri);
    return std::ldexp(1.0, b.b2 - b.b0_closed);
}

inline StateSumResult turaev_viro_oracle(const Triangulation& tri, const Level& lvl,
                                         int interior, double factor)
{
    using R = OracleReal;
    const LiteralLevel<R> L(lvl.r());
    const ColoringPlan plan(tri);
    ComplexValue<R> total;
    StateSumResult res;
    R peak(0);
    for_each_admissible(tri, lvl, [&](const Coloring& c) {
        ComplexValue<R> term{R(1), R(0)};
        for (int col : c.colors)
            term *= ComplexValue<R>{L.quantum_integer(col + 1), R(0)};
        for (const auto& tc : plan.tet_classes)
            term *= six_j_literal<R>(tuple_of(tc, c.colors), L);
        total.re += term.re;
        total.im += term.im;
        using boost::multiprecision::abs;
        peak = std::max(peak, R(abs(term.re)));
        ++res.admissible_count;
    });
    R eta_pow(1);
    for (int i = 0; i < 2 * interior; ++i)
        eta_pow *= L.eta();
    const R value = total.re * eta_pow * R(factor);
    using boost::multiprecision::abs;
    if (abs(total.im) > R(1e-30) * (abs(total.re) + R(1)))
        throw ConsistencyError("oracle state sum has a nonzero imaginary part");
    res.value = static_cast<double>(value);
    res.log_value = SignedLog::from_real(res.value);
    if (peak > 0)
        res.peak_term_log = static_cast<double>(log(peak));
    return res;
}

} // namespace detail

/// TV_r(tri) = eta_r^{2|V|} sum_c prod_e |e|_c prod_tet 6j, with |V| the
/// number of interior vertex classes. Partial sums per color of edge class 0
/// are combined in color order, so the value does not depend on `threads`.
inline StateSumResult turaev_viro(const Triangulation& tri, const Level& lvl,
                                  const TuraevViroOptions& opts = {})
{
    const auto start = std::chrono::steady_clock::now();
    const int interior = interior_vertex_count(tri);
    const double factor = opts.apply_betti_factor ? detail::betti_factor(tri) : 1.0;

    StateSumResult res;
    if (opts.precision == Precision::Oracle) {
        res = detail::turaev_viro_oracle(tri, lvl, interior, factor);
        // Visited count from the same enumeration order.
        res.colorings_visited = for_each_admissible(tri, lvl, [](const Coloring&) {});
    }
    else {
        const detail::ColoringPlan plan(tri);
        const SixJEvaluator eval(lvl);
        const int ncolors = lvl.color_count();
        double max_log_w = 0.0;
        for (int i = 0; i < ncolors; ++i)
            max_log_w = std::max(max_log_w, std::log(std::fabs(quantum_integer(2 * i + 1, lvl))));
        // Bound on log|partial product|: per tetrahedron a z-sum of at most r
        // terms of eight factorials plus two faces' Delta^2 / zeta.
        const double M = eval.max_abs_log_factorial();
        const double term_bound = plan.classes * max_log_w +
                                  tri.tet_count() * (std::log(lvl.r()) + 16.0 * M);
        const bool extended = !opts.force_signed_log && term_bound < 600.0;

        const int parts = plan.classes == 0 ? 1 : ncolors;
        std::vector<detail::PartitionTotals> totals(parts);
        SignedLog sum;
        if (extended) {
            const detail::ExtendedTables tab(lvl);
            detail::run_parallel(parts, opts.threads, [&](int k) {
                totals[k] = detail::run_partition_direct(plan, tab, 2 * k);
            });
            DoubleDouble acc;
            for (const auto& t : totals)
                acc += t.extended;
            DoubleDouble scale(factor);
            for (int t = 0; t < tri.tet_count(); ++t)
                scale *= tab.zeta;
            for (int v = 0; v < interior; ++v)
                scale *= tab.eta_squared;
            sum = SignedLog::from_real((acc * scale).to_double());
            for (auto& t : totals)
                t.peak_log += tri.tet_count() * std::log(tab.zeta.hi);
        }
        else {
            std::vector<SignedLog> wl(ncolors);
            for (int i = 0; i < ncolors; ++i)
                wl[i] = SignedLog::from_real(quantum_integer(2 * i + 1, lvl));
            detail::run_parallel(parts, opts.threads, [&](int k) {
                totals[k] = detail::run_partition_log(plan, eval, wl, 2 * k);
            });
            SignedLogAccumulator acc;
            for (const auto& t : totals)
                acc.add(t.logsum);
            sum = acc.result();
            if (!sum.is_zero())
                sum.log_mag += 2.0 * interior * std::log(eta(lvl)) + std::log(factor);
        }
        for (const auto& t : totals) {
            res.colorings_visited += t.visited;
            res.admissible_count += t.admissible;
            res.peak_term_log = std::max(res.peak_term_log, t.peak_log);
        }
        res.log_value = sum;
        res.value = sum.to_real();
    }
    res.r = lvl.r();
    res.factor_applied = opts.apply_betti_factor;
    res.interior_vertices = interior;
    res.precision = opts.precision;
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

/// TV of a disjoint union from its components' results.
inline StateSumResult tv_disjoint_union(const std::vector<StateSumResult>& parts)
{
    if (parts.empty())
        throw DomainError("disjoint union of no results");
    StateSumResult out;
    out.r = parts.front().r;
    out.value = 1.0;
    out.log_value = SignedLog::one();
    out.admissible_count = 1;
    out.peak_term_log = 0.0;
    out.factor_applied = parts.front().factor_applied;
    out.precision = parts.front().precision;
    for (const auto& p : parts) {
        if (p.r != out.r)
            throw DomainError("disjoint union mixes levels r=" + std::to_string(out.r) +
                              " and r=" + std::to_string(p.r));
        out.value *= p.value;
        out.log_value *= p.log_value;
        out.colorings_visited += p.colorings_visited;
        out.admissible_count *= p.admissible_count;
        out.peak_term_log += p.peak_term_log;
        out.factor_applied = out.factor_applied && p.factor_applied;
        out.interior_vertices += p.interior_vertices;
        out.seconds += p.seconds;
    }
    return out;
}

} // namespace tvinv
