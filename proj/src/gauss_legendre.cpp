#include "ordstat/gauss_legendre.hpp"

#include <cmath>

namespace ordstat {

GaussLegendre gauss_legendre_01(int m) {
    GaussLegendre rule;
    rule.x.resize(m);
    rule.w.resize(m);
    const double eps = 1e-15;
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // initial guess for the i-th root of P_m on (-1,1)
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double z1, pp;
        do {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < m; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0);
            z1 = z;
            z = z1 - p1 / pp;
        } while (std::abs(z - z1) > eps);
        // map (-1,1) -> (0,1)
        rule.x[i] = 0.5 * (1.0 - z);
        rule.x[m - 1 - i] = 0.5 * (1.0 + z);
        rule.w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
        rule.w[m - 1 - i] = rule.w[i];
    }
    return rule;
}

namespace {
inline double smap(double t) { return t * t * t * (10.0 + t * (-15.0 + 6.0 * t)); }
inline double sjac(double t) { return 30.0 * t * t * (1.0 - t) * (1.0 - t); }
} // namespace

MappedRule mapped_rule_01(int m) {
    GaussLegendre base = gauss_legendre_01(m);
    MappedRule rule;
    rule.x.resize(m);
    rule.cx.resize(m);
    rule.w.resize(m);
    for (int i = 0; i < m; ++i) {
        rule.x[i] = smap(base.x[i]);
        rule.cx[i] = smap(1.0 - base.x[i]);
        rule.w[i] = base.w[i] * sjac(base.x[i]);
    }
    return rule;
}

} // namespace ordstat
