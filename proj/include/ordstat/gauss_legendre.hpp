#ifndef ORDSTAT_GAUSS_LEGENDRE_HPP
#define ORDSTAT_GAUSS_LEGENDRE_HPP

#include <vector>

namespace ordstat {

// Gauss-Legendre rule on (0,1).
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};

// Nodes and weights by Newton iteration on the Legendre recurrence.
GaussLegendre gauss_legendre_01(int m);

// The same rule pushed through the quintic endpoint map
// s(t) = t^3 (10 - 15 t + 6 t^2), which has double-order zeros of s' at both
// endpoints.  This restores fast convergence for integrands whose quantile
// factor is singular at 0 or 1.  `cx[i]` is 1 - x[i] evaluated via the map's
// symmetry s(1-t) = 1-s(t), so it stays accurate when x[i] is within an ulp
// of 1.
struct MappedRule {
    std::vector<double> x;
    std::vector<double> cx;
    std::vector<double> w;
};

MappedRule mapped_rule_01(int m);

} // namespace ordstat

#endif
