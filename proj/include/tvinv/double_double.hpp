#pragma once

// Unevaluated sum of two doubles (about 106 significant bits). Used where the
// state sum cancels many orders of magnitude; relies on correctly rounded
// IEEE arithmetic and std::fma.

#include <cmath>

namespace tvinv {

struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DoubleDouble() = default;
    constexpr DoubleDouble(double h) : hi(h) {} // NOLINT: implicit by design
    constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

    double to_double() const noexcept { return hi + lo; }

    /// Rounds any wider real type (hi = nearest double, lo = remainder).
    template <typename Real>
    static DoubleDouble from(const Real& x)
    {
        const double h = static_cast<double>(x);
        const double l = static_cast<double>(Real(x - Real(h)));
        return {h, l};
    }
};

namespace detail {

inline DoubleDouble two_sum(double a, double b) noexcept
{
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline DoubleDouble quick_two_sum(double a, double b) noexcept
{
    const double s = a + b;
    return {s, b - (s - a)};
}

} // namespace detail

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) noexcept
{
    DoubleDouble s = detail::two_sum(a.hi, b.hi);
    const DoubleDouble t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a) noexcept { return {-a.hi, -a.lo}; }

inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) noexcept
{
    return a + (-b);
}

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) noexcept
{
    const double p = a.hi * b.hi;
    double e = std::fma(a.hi, b.hi, -p);
    e += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p, e);
}

inline DoubleDouble& operator+=(DoubleDouble& a, const DoubleDouble& b) noexcept
{
    return a = a + b;
}

inline DoubleDouble& operator*=(DoubleDouble& a, const DoubleDouble& b) noexcept
{
    return a = a * b;
}

inline bool is_zero(const DoubleDouble& a) noexcept { return a.hi == 0.0; }

inline DoubleDouble abs(const DoubleDouble& a) noexcept { return a.hi < 0 ? -a : a; }

} // namespace tvinv
