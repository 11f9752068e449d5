#ifndef ORDSTAT_DISTRIBUTIONS_HPP
#define ORDSTAT_DISTRIBUTIONS_HPP

#include <functional>
#include <string>

namespace ordstat {

enum class Family { StandardNormal, StandardExponential, StandardUniform, CustomQuantile };

std::string family_name(Family f);
Family family_from_name(const std::string& name); // throws DomainError

// Standardized family plus the quadrature controls used to build moment
// tables from it.  quad_tol is the absolute tolerance on covariance entries;
// means are converged to quad_tol/10.
struct DistributionSpec {
    Family family = Family::StandardNormal;
    std::function<double(double)> quantile; // required iff CustomQuantile
    int quad_points = 64;                   // initial nodes per dimension
    double quad_tol = 1e-8;

    // Throws DomainError on bad controls, a missing custom quantile, or a
    // custom quantile that decreases on a 1024-point probe grid of (0,1).
    void validate() const;
};

// Inverse standard normal CDF, Wichura's AS 241 (PPND16), |error| ~ 1e-16.
double normal_quantile(double p);

// Quantile evaluated from whichever of (u, 1-u) is known accurately; cu must
// equal 1-u up to rounding.  Arguments are clipped to [delta, 1-delta],
// delta = 1e-12, which bounds unbounded quantiles near the endpoints.
double quantile(const DistributionSpec& spec, double u, double cu);

inline double quantile(const DistributionSpec& spec, double u) {
    return quantile(spec, u, 1.0 - u);
}

inline constexpr double kQuantileClip = 1e-12;

} // namespace ordstat

#endif
