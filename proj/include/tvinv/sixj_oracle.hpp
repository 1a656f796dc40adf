#pragma once

// Literal extended-precision evaluation of the 6j formula: naive products of
// brackets, principal complex square roots for Delta, no logarithms. This is
// the independent path the log-domain evaluator is checked against.

#include <algorithm>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "tvinv/qarith.hpp"
#include "tvinv/sixj.hpp"

namespace tvinv {

/// 256-bit binary significand.
using OracleReal = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

template <typename Real>
struct ComplexValue {
    Real re{0};
    Real im{0};

    ComplexValue& operator*=(const ComplexValue& o)
    {
        const Real nr = re * o.re - im * o.im;
        const Real ni = re * o.im + im * o.re;
        re = nr;
        im = ni;
        return *this;
    }
};

/// Brackets {0..r-1} at one level, in Real.
template <typename Real>
class LiteralLevel {
public:
    explicit LiteralLevel(int r) : r_(r), brackets_(r)
    {
        for (int n = 0; n < r; ++n)
            brackets_[n] = bracket_as<Real>(n, r);
    }

    int r() const noexcept { return r_; }

    Real bracket(long long n) const { return brackets_[detail::reduce_mod(n, r_)]; }

    /// {n}! as a straight product; no range restriction.
    Real factorial(int n) const
    {
        Real p(1);
        for (int i = 1; i <= n; ++i)
            p *= bracket(i);
        return p;
    }

    Real quantum_integer(long long n) const { return bracket(n) / bracket(1); }

    Real eta() const
    {
        using std::sqrt;
        return bracket(1) / sqrt(Real(r_));
    }

private:
    int r_;
    std::vector<Real> brackets_;
};

/// Complex value of the 6j formula for an admissible tuple, evaluated
/// term by term in Real.
template <typename Real>
ComplexValue<Real> six_j_literal(const SixTuple& s, const LiteralLevel<Real>& lvl)
{
    using std::sqrt;
    const auto& a = s.a;
    const Real zeta = lvl.bracket(1);

    ComplexValue<Real> pre{Real(1) / zeta, Real(0)};
    // (sqrt(-1))^lambda
    switch (s.lambda() % 4) {
    case 1: pre *= ComplexValue<Real>{Real(0), Real(1)}; break;
    case 2: pre *= ComplexValue<Real>{Real(-1), Real(0)}; break;
    case 3: pre *= ComplexValue<Real>{Real(0), Real(-1)}; break;
    default: break;
    }
    for (int i = 0; i < 4; ++i) {
        const Triple f = s.face(i);
        const Real ratio = lvl.factorial((f.a + f.b - f.c) / 2) *
                           lvl.factorial((f.b + f.c - f.a) / 2) *
                           lvl.factorial((f.a + f.c - f.b) / 2) /
                           lvl.factorial((f.a + f.b + f.c) / 2 + 1);
        ComplexValue<Real> delta{sqrt(zeta), Real(0)};
        if (ratio >= 0)
            delta *= ComplexValue<Real>{sqrt(ratio), Real(0)};
        else
            delta *= ComplexValue<Real>{Real(0), sqrt(Real(-ratio))};
        pre *= delta;
    }

    const int T1 = (a[0] + a[1] + a[2]) / 2, T2 = (a[0] + a[4] + a[5]) / 2;
    const int T3 = (a[1] + a[3] + a[5]) / 2, T4 = (a[2] + a[3] + a[4]) / 2;
    const int Q1 = (a[0] + a[1] + a[3] + a[4]) / 2, Q2 = (a[0] + a[2] + a[3] + a[5]) / 2;
    const int Q3 = (a[1] + a[2] + a[4] + a[5]) / 2;
    const int lo = std::max(std::max(T1, T2), std::max(T3, T4));
    const int hi = std::min(std::min(Q1, Q2), Q3);
    Real sum(0);
    for (int z = lo; z <= hi; ++z) {
        Real den = lvl.factorial(z - T1) * lvl.factorial(z - T2) * lvl.factorial(z - T3) *
                   lvl.factorial(z - T4) * lvl.factorial(Q1 - z) * lvl.factorial(Q2 - z) *
                   lvl.factorial(Q3 - z);
        Real term = lvl.factorial(z + 1) / den;
        if (z % 2 != 0)
            term = -term;
        sum += term;
    }
    pre *= ComplexValue<Real>{sum, Real(0)};
    return pre;
}

template <typename Real = OracleReal>
ComplexValue<Real> six_j_literal(const SixTuple& s, int r)
{
    return six_j_literal<Real>(s, LiteralLevel<Real>(r));
}

} // namespace tvinv
