#include "ordstat/distributions.hpp"

#include <cmath>

#include "ordstat/errors.hpp"

namespace ordstat {

std::string family_name(Family f) {
    switch (f) {
        case Family::StandardNormal: return "standard-normal";
        case Family::StandardExponential: return "standard-exponential";
        case Family::StandardUniform: return "standard-uniform";
        case Family::CustomQuantile: return "custom-quantile";
    }
    throw DomainError("unknown family");
}

Family family_from_name(const std::string& name) {
    if (name == "standard-normal" || name == "normal") return Family::StandardNormal;
    if (name == "standard-exponential" || name == "exponential") return Family::StandardExponential;
    if (name == "standard-uniform" || name == "uniform") return Family::StandardUniform;
    if (name == "custom-quantile" || name == "custom") return Family::CustomQuantile;
    throw DomainError("unknown family name: " + name);
}

void DistributionSpec::validate() const {
    if (quad_points < 16) throw DomainError("quad_points must be >= 16");
    if (!(quad_tol > 0.0)) throw DomainError("quad_tol must be > 0");
    if (family == Family::CustomQuantile) {
        if (!quantile) throw DomainError("custom-quantile family requires a quantile function");
        const int probes = 1024;
        double prev = quantile(1.0 / (probes + 1));
        if (!std::isfinite(prev))
            throw DomainError("custom quantile is not finite on the probe grid");
        for (int k = 2; k <= probes; ++k) {
            double u = static_cast<double>(k) / (probes + 1);
            double q = quantile(u);
            if (!std::isfinite(q))
                throw DomainError("custom quantile is not finite on the probe grid");
            if (q < prev)
                throw DomainError("custom quantile decreases on the probe grid");
            prev = q;
        }
    }
}

// AS 241 algorithm PPND16 (Wichura 1988).
double normal_quantile(double p) {
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

double quantile(const DistributionSpec& spec, double u, double cu) {
    if (u < kQuantileClip) { u = kQuantileClip; cu = 1.0 - kQuantileClip; }
    if (cu < kQuantileClip) { cu = kQuantileClip; u = 1.0 - kQuantileClip; }
    switch (spec.family) {
        case Family::StandardNormal:
            // evaluate on the smaller tail to keep full precision near 1
            return (u <= cu) ? normal_quantile(u) : -normal_quantile(cu);
        case Family::StandardExponential:
            return -std::log(cu);
        case Family::StandardUniform:
            return u;
        case Family::CustomQuantile:
            return spec.quantile(u);
    }
    throw DomainError("unknown family");
}

} // namespace ordstat
