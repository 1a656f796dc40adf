// Growth of TV_r for the figure-eight knot complement against 2 v3.

#include <cmath>
#include <cstdio>

#include "tvinv/asymptotics.hpp"
#include "tvinv/census.hpp"

int main()
{
    using namespace tvinv;
    const Triangulation& fig8 = builtin("fig8");
    const GrowthSeries s = growth_series(fig8, 5, 31);
    std::printf("%4s %24s %12s\n", "r", "TV_r", "a_r");
    for (const auto& p : s.points)
        std::printf("%4d %24.17g %12.6f\n", p.r, p.tv, p.a_r);
    const double target = 2 * constants().v3;
    std::printf("\nfit a_r ~ A + B log(r)/r + C/r: A=%.6f B=%.6f C=%.6f (residual %.2e)\n",
                s.fit->A, s.fit->B, s.fit->C, s.fit->residual_norm);
    std::printf("2 v3 = %.6f, relative gap %.2f%%\n", target,
                100 * std::fabs(s.fit->A - target) / target);
    for (const auto& e : bound_report(fig8, s).entries)
        std::printf("%-24s lhs=%-12.6g rhs=%-12.6g %s\n", e.name.c_str(), e.lhs, e.rhs,
                    to_string(e.status));
}
