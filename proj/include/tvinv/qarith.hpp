#pragma once

// Quantum arithmetic at q = exp(2 pi i / r), r odd.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "tvinv/errors.hpp"

namespace tvinv {

/// Odd level r >= 3.
class Level {
public:
    explicit Level(int r) : r_(r)
    {
        if (r < 3 || r % 2 == 0)
            throw DomainError("level must be an odd integer >= 3, got " + std::to_string(r));
    }

    int r() const noexcept { return r_; }

    /// Largest color in I_r = {0, 2, ..., r-3}.
    int max_color() const noexcept { return r_ - 3; }

    /// Number of colors in I_r, (r-1)/2.
    int color_count() const noexcept { return (r_ - 1) / 2; }

    friend bool operator==(const Level&, const Level&) = default;

private:
    int r_;
};

/// Nonzero real stored as sign and natural log of the magnitude; sign 0 is
/// the exact zero and its log_mag is ignored.
struct SignedLog {
    int sign = 0;
    double log_mag = 0.0;

    static constexpr SignedLog zero() noexcept { return {0, 0.0}; }
    static constexpr SignedLog one() noexcept { return {1, 0.0}; }

    static SignedLog from_real(double x) noexcept
    {
        if (x == 0.0)
            return zero();
        return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
    }

    bool is_zero() const noexcept { return sign == 0; }

    double to_real() const noexcept { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }

    SignedLog& operator*=(const SignedLog& o) noexcept
    {
        sign *= o.sign;
        log_mag = sign == 0 ? 0.0 : log_mag + o.log_mag;
        return *this;
    }

    SignedLog& operator/=(const SignedLog& o)
    {
        if (o.sign == 0)
            throw DomainError("division by signed-log zero");
        sign *= o.sign;
        log_mag = sign == 0 ? 0.0 : log_mag - o.log_mag;
        return *this;
    }

    friend SignedLog operator*(SignedLog a, const SignedLog& b) noexcept { return a *= b; }
    friend SignedLog operator/(SignedLog a, const SignedLog& b) { return a /= b; }

    friend bool operator==(const SignedLog& a, const SignedLog& b) noexcept
    {
        return a.sign == b.sign && (a.sign == 0 || a.log_mag == b.log_mag);
    }
};

/// Streaming signed sum in log domain. Keeps a running reference magnitude
/// (the largest value folded in so far) and a plain partial sum scaled by it,
/// so alternating terms spanning hundreds of orders of magnitude never
/// overflow. The result depends only on the order of `add` calls.
class SignedLogAccumulator {
public:
    void add(const SignedLog& term) noexcept
    {
        if (term.sign == 0)
            return;
        ++terms_;
        if (term.log_mag > peak_)
            peak_ = term.log_mag;
        fold(term);
    }

    /// Adds another accumulator's total; term count and peak are merged.
    void add(const SignedLogAccumulator& other) noexcept
    {
        if (other.terms_ == 0)
            return;
        terms_ += other.terms_;
        if (other.peak_ > peak_)
            peak_ = other.peak_;
        fold(other.result());
    }

    SignedLog result() const noexcept
    {
        if (!started_ || partial_ == 0.0)
            return SignedLog::zero();
        return {partial_ > 0 ? 1 : -1, ref_log_ + std::log(std::fabs(partial_))};
    }

    /// Log magnitude of the largest single term added (-inf when empty).
    double peak_log() const noexcept { return peak_; }

    std::uint64_t term_count() const noexcept { return terms_; }

private:
    void fold(const SignedLog& v) noexcept
    {
        if (v.sign == 0)
            return;
        if (!started_ || v.log_mag > ref_log_) {
            if (started_)
                partial_ *= std::exp(ref_log_ - v.log_mag);
            partial_ += v.sign;
            ref_log_ = v.log_mag;
            started_ = true;
        }
        else {
            partial_ += v.sign * std::exp(v.log_mag - ref_log_);
        }
    }

    double ref_log_ = 0.0;
    double partial_ = 0.0;
    bool started_ = false;
    std::uint64_t terms_ = 0;
    double peak_ = -std::numeric_limits<double>::infinity();
};

namespace detail {

/// n mod r in [0, r).
inline int reduce_mod(long long n, int r) noexcept
{
    long long m = n % r;
    if (m < 0)
        m += r;
    return static_cast<int>(m);
}

} // namespace detail

/// {n} = 2 sin(2 pi n / r) in any floating type. The residue k = n mod r is
/// folded to k or r-k so that {r-n} = -{n} holds bit-exactly.
template <typename Real>
Real bracket_as(long long n, int r)
{
    int k = detail::reduce_mod(n, r);
    if (k == 0)
        return Real(0);
    int sign = 1;
    if (2 * k > r) {
        k = r - k;
        sign = -1;
    }
    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    using std::sin;
    Real s = 2 * sin(two_pi * Real(k) / Real(r));
    return sign > 0 ? s : Real(-s);
}

inline double bracket(long long n, const Level& lvl) { return bracket_as<double>(n, lvl.r()); }

/// [n] = {n} / {1}.
inline double quantum_integer(long long n, const Level& lvl)
{
    return bracket(n, lvl) / bracket(1, lvl);
}

/// {n}! = {1}{2}...{n} for 0 <= n < r, in signed log form.
inline SignedLog quantum_factorial(int n, const Level& lvl)
{
    const int r = lvl.r();
    if (n < 0 || n >= r)
        throw DomainError("quantum factorial needs 0 <= n < r (n=" + std::to_string(n) +
                          ", r=" + std::to_string(r) + ")");
    if (n == 0)
        return SignedLog::one();
    // Plain product cannot leave the double range while n*log(r) is small:
    // every factor lies in [2 sin(pi/r), 2].
    if (static_cast<double>(n) * std::log(static_cast<double>(r)) < 500.0) {
        double p = 1.0;
        for (int i = 1; i <= n; ++i)
            p *= bracket(i, lvl);
        return SignedLog::from_real(p);
    }
    SignedLog acc = SignedLog::one();
    for (int i = 1; i <= n; ++i)
        acc *= SignedLog::from_real(bracket(i, lvl));
    return acc;
}

/// eta_r = 2 sin(2 pi / r) / sqrt(r).
inline double eta(const Level& lvl)
{
    return bracket(1, lvl) / std::sqrt(static_cast<double>(lvl.r()));
}

/// Log-domain table of {n}! for 0 <= n < r, built by cumulative sums so every
/// entry is reproducible regardless of who builds it.
class FactorialTable {
public:
    explicit FactorialTable(const Level& lvl) : level_(lvl)
    {
        const int r = lvl.r();
        sign_.resize(r);
        log_.resize(r);
        sign_[0] = 1;
        log_[0] = 0.0;
        for (int i = 1; i < r; ++i) {
            const double b = bracket(i, lvl);
            sign_[i] = sign_[i - 1] * (b > 0 ? 1 : -1);
            log_[i] = log_[i - 1] + std::log(std::fabs(b));
        }
    }

    const Level& level() const noexcept { return level_; }

    /// {n}!; zero for n >= r (the product contains {r} = 0).
    SignedLog operator()(int n) const noexcept
    {
        if (n >= level_.r())
            return SignedLog::zero();
        return {sign_[n], log_[n]};
    }

    int sign(int n) const noexcept { return n >= level_.r() ? 0 : sign_[n]; }
    double log_mag(int n) const noexcept { return log_[n]; }

private:
    Level level_;
    std::vector<int> sign_;
    std::vector<double> log_;
};

} // namespace tvinv
