#pragma once

// Admissibility, Delta^2 and the quantum 6j-symbol in signed log domain.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tvinv/errors.hpp"
#include "tvinv/qarith.hpp"

namespace tvinv {

/// Edge slot k (0-based) of a tetrahedron joins these two vertices. Faces
/// F1..F4 are then the faces opposite vertices 3, 1, 2, 0 and the opposite
/// edge pairs are (0,3), (1,4), (2,5).
inline constexpr std::array<std::pair<int, int>, 6> kEdgeSlots{{
    {0, 1}, {0, 2}, {1, 2}, {2, 3}, {1, 3}, {0, 3}}};

/// Slot indices of the four faces F1..F4, in the order (a_i, a_j, a_k) used
/// for Delta.
inline constexpr std::array<std::array<int, 3>, 4> kFaceSlots{{
    {0, 1, 2}, {1, 3, 5}, {0, 4, 5}, {2, 3, 4}}};

/// Slot of the edge joining vertices x != y.
constexpr int edge_slot(int x, int y) noexcept
{
    if (x > y)
        std::swap(x, y);
    for (int k = 0; k < 6; ++k)
        if (kEdgeSlots[k].first == x && kEdgeSlots[k].second == y)
            return k;
    return -1;
}

struct Triple {
    int a = 0, b = 0, c = 0;
    friend bool operator==(const Triple&, const Triple&) = default;
};

struct SixTuple {
    std::array<int, 6> a{};

    int operator[](int i) const noexcept { return a[i]; }
    int& operator[](int i) noexcept { return a[i]; }

    Triple face(int i) const noexcept
    {
        const auto& s = kFaceSlots[i];
        return {a[s[0]], a[s[1]], a[s[2]]};
    }

    int lambda() const noexcept { return a[0] + a[1] + a[2] + a[3] + a[4] + a[5]; }

    friend bool operator==(const SixTuple&, const SixTuple&) = default;
};

/// Throws unless c is an even color in I_r.
inline void validate_color(int c, const Level& lvl)
{
    if (c < 0 || c > lvl.max_color() || c % 2 != 0)
        throw DomainError("color " + std::to_string(c) + " is not in I_" +
                          std::to_string(lvl.r()) + " = {0, 2, ..., " +
                          std::to_string(lvl.max_color()) + "}");
}

/// Admissibility without color validation, for inner loops.
constexpr bool admissible_unchecked(int a, int b, int c, int r) noexcept
{
    return a + b + c <= 2 * (r - 2) && a <= b + c && b <= a + c && c <= a + b;
}

inline bool is_admissible_triple(const Triple& t, const Level& lvl)
{
    validate_color(t.a, lvl);
    validate_color(t.b, lvl);
    validate_color(t.c, lvl);
    return admissible_unchecked(t.a, t.b, t.c, lvl.r());
}

/// Index (0-based) of the first face F1..F4 that fails, if any.
inline std::optional<int> first_inadmissible_face(const SixTuple& s, const Level& lvl)
{
    for (int c : s.a)
        validate_color(c, lvl);
    for (int i = 0; i < 4; ++i) {
        const Triple t = s.face(i);
        if (!admissible_unchecked(t.a, t.b, t.c, lvl.r()))
            return i;
    }
    return std::nullopt;
}

inline bool is_admissible_six_tuple(const SixTuple& s, const Level& lvl)
{
    return !first_inadmissible_face(s, lvl).has_value();
}

/// The 24 relabelings of a 6-tuple induced by vertex permutations of the
/// tetrahedron; entry p maps slot k to slot p[k].
inline const std::array<std::array<int, 6>, 24>& tetrahedral_relabelings()
{
    static const auto table = [] {
        std::array<std::array<int, 6>, 24> out{};
        std::array<int, 4> sigma{0, 1, 2, 3};
        int n = 0;
        do {
            for (int k = 0; k < 6; ++k)
                out[n][k] = edge_slot(sigma[kEdgeSlots[k].first], sigma[kEdgeSlots[k].second]);
            ++n;
        } while (std::next_permutation(sigma.begin(), sigma.end()));
        return out;
    }();
    return table;
}

inline SixTuple relabel(const SixTuple& s, const std::array<int, 6>& p) noexcept
{
    SixTuple out;
    for (int k = 0; k < 6; ++k)
        out.a[p[k]] = s.a[k];
    return out;
}

/// Result of one 6j evaluation. With principal square roots of negative
/// Delta^2 a single symbol can be purely imaginary: the value is
/// `value` times i when `imaginary` is set. `scale_log` is the log magnitude
/// the value would have if only the largest z-term were kept, the natural
/// reference for absolute error.
struct SixJDetail {
    SignedLog value;
    bool imaginary = false;
    double scale_log = 0.0;
};

/// Plain double counterpart of SixJDetail.
struct SixJDirect {
    double value = 0.0;
    bool imaginary = false;
};

namespace detail {

/// Splits i^k into a real sign and an imaginary flag.
constexpr std::pair<int, bool> quarter_phase(int k) noexcept
{
    const int m = ((k % 4) + 4) % 4;
    return {m < 2 ? 1 : -1, (m & 1) != 0};
}

} // namespace detail

/// Evaluates Delta^2 and 6j-symbols at one level from a shared factorial
/// table. Immutable after construction and safe to share across threads.
class SixJEvaluator {
public:
    explicit SixJEvaluator(const Level& lvl)
        : fact_(lvl), log_zeta_(std::log(bracket(1, lvl))), zeta_(bracket(1, lvl))
    {
        const int r = lvl.r();
        double worst = 0.0;
        for (int n = 0; n < r; ++n)
            worst = std::max(worst, std::fabs(fact_.log_mag(n)));
        max_abs_log_fact_ = worst;
        // A z-term is a product of eight factorials or their inverses.
        direct_ok_ = 9.0 * worst < 600.0;
        if (direct_ok_) {
            fact_val_.resize(r + 1);
            inv_fact_val_.resize(r + 1);
            for (int n = 0; n < r; ++n) {
                fact_val_[n] = fact_.sign(n) * std::exp(fact_.log_mag(n));
                inv_fact_val_[n] = fact_.sign(n) * std::exp(-fact_.log_mag(n));
            }
            fact_val_[r] = 0.0;
            inv_fact_val_[r] = 0.0;
        }
    }

    /// max_n |log|{n}!||, a crude scale for magnitude bounds.
    double max_abs_log_factorial() const noexcept { return max_abs_log_fact_; }

    /// Whether evaluate_direct can be used at this level without overflow.
    bool direct_available() const noexcept { return direct_ok_; }

    /// Plain double evaluation for admissible tuples when direct_available():
    /// no logarithms or exponentials, only table products.
    SixJDirect evaluate_direct(const SixTuple& s) const
    {
        const auto& a = s.a;
        const int r = level().r();
        const int T1 = (a[0] + a[1] + a[2]) / 2, T2 = (a[0] + a[4] + a[5]) / 2;
        const int T3 = (a[1] + a[3] + a[5]) / 2, T4 = (a[2] + a[3] + a[4]) / 2;
        const int Q1 = (a[0] + a[1] + a[3] + a[4]) / 2, Q2 = (a[0] + a[2] + a[3] + a[5]) / 2;
        const int Q3 = (a[1] + a[2] + a[4] + a[5]) / 2;
        const int z_lo = std::max(std::max(T1, T2), std::max(T3, T4));
        const int z_hi = std::min(std::min(std::min(Q1, Q2), Q3), r - 2);
        const double* f = fact_val_.data();
        const double* g = inv_fact_val_.data();
        double sum = 0.0;
        for (int z = z_lo; z <= z_hi; ++z) {
            const double t = f[z + 1] * g[z - T1] * g[z - T2] * g[z - T3] * g[z - T4] *
                             g[Q1 - z] * g[Q2 - z] * g[Q3 - z];
            sum += (z & 1) ? -t : t;
        }
        int negative_deltas = 0;
        double delta_prod = 1.0 / zeta_;
        for (int i = 0; i < 4; ++i) {
            const auto& fs = kFaceSlots[i];
            const int x = a[fs[0]], y = a[fs[1]], w = a[fs[2]];
            const double d2 = zeta_ * f[(x + y - w) / 2] * f[(y + w - x) / 2] *
                              f[(x + w - y) / 2] * g[(x + y + w) / 2 + 1];
            if (d2 < 0)
                ++negative_deltas;
            delta_prod *= std::sqrt(std::fabs(d2));
        }
        const auto [sign, imaginary] = detail::quarter_phase(s.lambda() + negative_deltas);
        return {sign * delta_prod * sum, imaginary};
    }

    const Level& level() const noexcept { return fact_.level(); }
    const FactorialTable& factorials() const noexcept { return fact_; }

    /// Delta^2 = zeta * {(a+b-c)/2}! {(b+c-a)/2}! {(a+c-b)/2}! / {(a+b+c)/2 + 1}!
    /// for an admissible triple. Can be negative.
    SignedLog delta_squared_unchecked(int a, int b, int c) const noexcept
    {
        SignedLog d{1, log_zeta_};
        d *= fact_((a + b - c) / 2);
        d *= fact_((b + c - a) / 2);
        d *= fact_((a + c - b) / 2);
        const SignedLog den = fact_((a + b + c) / 2 + 1);
        d.sign *= den.sign;
        d.log_mag -= den.log_mag;
        return d;
    }

    SignedLog delta_squared(const Triple& t) const
    {
        if (!is_admissible_triple(t, level()))
            throw DomainError("triple (" + std::to_string(t.a) + "," + std::to_string(t.b) +
                              "," + std::to_string(t.c) + ") is not admissible");
        return delta_squared_unchecked(t.a, t.b, t.c);
    }

    /// 6j-symbol of an admissible tuple; no admissibility check.
    SixJDetail evaluate_unchecked(const SixTuple& s) const
    {
        const auto& a = s.a;
        const int r = level().r();
        // Faces, T and Q are put in sorted order so that every accumulation
        // below runs in an order fixed by the symmetry class of the tuple:
        // relabeled tuples give identical bits.
        std::array<int, 4> T{(a[0] + a[1] + a[2]) / 2, (a[0] + a[4] + a[5]) / 2,
                             (a[1] + a[3] + a[5]) / 2, (a[2] + a[3] + a[4]) / 2};
        std::array<int, 3> Q{(a[0] + a[1] + a[3] + a[4]) / 2, (a[0] + a[2] + a[3] + a[5]) / 2,
                             (a[1] + a[2] + a[4] + a[5]) / 2};
        std::sort(T.begin(), T.end());
        std::sort(Q.begin(), Q.end());
        const int z_lo = *std::max_element(T.begin(), T.end());
        const int z_hi = *std::min_element(Q.begin(), Q.end());

        // Alternating z-sum: gather signed logs, then sum relative to the peak.
        std::array<SignedLog, 64> small{};
        std::vector<SignedLog> big;
        SignedLog* terms = small.data();
        const int count = std::max(0, z_hi - z_lo + 1);
        if (count > static_cast<int>(small.size())) {
            big.resize(count);
            terms = big.data();
        }
        int n = 0;
        double peak = -std::numeric_limits<double>::infinity();
        for (int z = z_lo; z <= z_hi; ++z) {
            if (z + 1 >= r)
                break; // {z+1}! contains {r} = 0 from here on
            SignedLog t = fact_(z + 1);
            if (z % 2 != 0)
                t.sign = -t.sign;
            for (int j = 0; j < 4; ++j) {
                const SignedLog f = fact_(z - T[j]);
                t.sign *= f.sign;
                t.log_mag -= f.log_mag;
            }
            for (int k = 0; k < 3; ++k) {
                const SignedLog f = fact_(Q[k] - z);
                t.sign *= f.sign;
                t.log_mag -= f.log_mag;
            }
            terms[n++] = t;
            peak = std::max(peak, t.log_mag);
        }

        // Prefactor zeta^{-1} (sqrt(-1))^lambda prod Delta(F_i).
        double pre_log = -log_zeta_;
        int negative_deltas = 0;
        std::array<std::array<int, 3>, 4> faces{};
        for (int i = 0; i < 4; ++i) {
            const Triple f = s.face(i);
            faces[i] = {f.a, f.b, f.c};
            std::sort(faces[i].begin(), faces[i].end());
        }
        std::sort(faces.begin(), faces.end());
        for (const auto& f : faces) {
            const SignedLog d2 = delta_squared_unchecked(f[0], f[1], f[2]);
            if (d2.sign < 0)
                ++negative_deltas;
            pre_log += 0.5 * d2.log_mag;
        }
        const auto [phase, imaginary] = detail::quarter_phase(s.lambda() + negative_deltas);

        SixJDetail out;
        out.imaginary = imaginary;
        out.scale_log = pre_log + (n > 0 ? peak : 0.0);
        if (n == 0) {
            out.value = SignedLog::zero();
            return out;
        }
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
            sum += terms[i].sign * std::exp(terms[i].log_mag - peak);
        if (sum == 0.0) {
            out.value = SignedLog::zero();
            return out;
        }
        out.value.sign = phase * (sum > 0 ? 1 : -1);
        out.value.log_mag = pre_log + peak + std::log(std::fabs(sum));
        return out;
    }

    SixJDetail evaluate(const SixTuple& s) const
    {
        if (auto bad = first_inadmissible_face(s, level()))
            throw DomainError("face F" + std::to_string(*bad + 1) + " inadmissible");
        return evaluate_unchecked(s);
    }

private:
    FactorialTable fact_;
    double log_zeta_;
    double zeta_;
    double max_abs_log_fact_ = 0.0;
    bool direct_ok_ = false;
    std::vector<double> fact_val_;
    std::vector<double> inv_fact_val_;
};

inline SignedLog delta_squared(const Triple& t, const Level& lvl)
{
    return SixJEvaluator(lvl).delta_squared(t);
}

/// Checked evaluation with phase.
inline SixJDetail six_j_detail(const SixTuple& s, const Level& lvl)
{
    return SixJEvaluator(lvl).evaluate(s);
}

/// The 6j-symbol as a real number; a purely imaginary symbol is reported
/// as a ConsistencyError naming the phase.
inline SignedLog six_j_log(const SixTuple& s, const Level& lvl)
{
    const SixJDetail d = six_j_detail(s, lvl);
    if (d.imaginary && !d.value.is_zero())
        throw ConsistencyError("6j phase residue i^" + std::string(d.value.sign > 0 ? "1" : "3") +
                               " at r=" + std::to_string(lvl.r()) +
                               ": an odd number of faces have negative Delta^2");
    return d.value;
}

inline double six_j(const SixTuple& s, const Level& lvl) { return six_j_log(s, lvl).to_real(); }

inline std::complex<double> six_j_complex(const SixTuple& s, const Level& lvl)
{
    const SixJDetail d = six_j_detail(s, lvl);
    const double v = d.value.to_real();
    return d.imaginary ? std::complex<double>(0.0, v) : std::complex<double>(v, 0.0);
}

/// Memo of 6j values keyed by tuple. Not synchronized: give each worker its
/// own cache. Cached and uncached results are the same bits.
class SixJCache {
public:
    explicit SixJCache(const SixJEvaluator& eval) : eval_(&eval) {}

    SixJDetail get(const SixTuple& s)
    {
        const std::uint64_t key = pack(s);
        auto it = memo_.find(key);
        if (it != memo_.end())
            return it->second;
        const SixJDetail v = eval_->evaluate_unchecked(s);
        memo_.emplace(key, v);
        return v;
    }

    std::size_t size() const noexcept { return memo_.size(); }

private:
    static std::uint64_t pack(const SixTuple& s) noexcept
    {
        std::uint64_t k = 0;
        for (int c : s.a)
            k = (k << 10) | static_cast<std::uint64_t>(c / 2);
        return k;
    }

    const SixJEvaluator* eval_;
    std::unordered_map<std::uint64_t, SixJDetail> memo_;
};

} // namespace tvinv
