#pragma once

// Lobachevsky function Lambda(x) = -int_0^x log|2 sin t| dt and the volumes
// of the regular ideal tetrahedron and octahedron.

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

namespace tvinv {

namespace detail {

inline constexpr int kClausenTerms = 40;

/// |B_{2k}| / (2k (2k+1)!) for k = 1..kClausenTerms.
inline const std::array<double, kClausenTerms>& clausen_coefficients()
{
    static const auto table = [] {
        std::array<double, kClausenTerms> c{};
        for (int k = 1; k <= kClausenTerms; ++k)
            c[k - 1] = std::fabs(boost::math::bernoulli_b2n<double>(k)) /
                       (2.0 * k * boost::math::factorial<double>(2 * k + 1));
        return c;
    }();
    return table;
}

/// Clausen function Cl2(t) for |t| <= pi:
/// t - t log|t| + sum_k |B_2k| t^{2k+1} / (2k (2k+1)!).
/// The series ratio is at most (t / 2pi)^2 <= 1/4.
inline double clausen2_reduced(double t)
{
    if (t == 0.0)
        return 0.0;
    const double t2 = t * t;
    double sum = 0.0;
    double power = t * t2;
    for (double c : clausen_coefficients()) {
        const double term = c * power;
        sum += term;
        if (std::fabs(term) < 1e-18 * std::fabs(sum))
            break;
        power *= t2;
    }
    return t - t * std::log(std::fabs(t)) + sum;
}

} // namespace detail

/// Lambda(x), pi-periodic and odd.
inline double lobachevsky(double x)
{
    constexpr double pi = std::numbers::pi;
    // Reduce to (-pi/2, pi/2]; then 2x lies in the series range.
    double y = std::remainder(x, pi);
    if (y == -pi / 2)
        y = pi / 2;
    return 0.5 * detail::clausen2_reduced(2.0 * y);
}

/// Lambda'(x) = -log|2 sin x|; infinite at multiples of pi.
inline double lobachevsky_derivative(double x)
{
    return -std::log(std::fabs(2.0 * std::sin(x)));
}

struct GeometricConstants {
    double v3 = 0.0; ///< regular ideal tetrahedron, 2 Lambda(pi/6)
    double v8 = 0.0; ///< regular ideal octahedron, 8 Lambda(pi/4)
};

inline GeometricConstants constants()
{
    constexpr double pi = std::numbers::pi;
    return {2.0 * lobachevsky(pi / 6), 8.0 * lobachevsky(pi / 4)};
}

} // namespace tvinv
