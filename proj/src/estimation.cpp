#include "ordstat/estimation.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "ordstat/errors.hpp"
#include "ordstat/linalg.hpp"

namespace ordstat {

void CensoredSample::validate() const {
    if (r() < 2) throw DomainError("censored sample needs r >= 2 (two parameters)");
    if (r() > n) throw DomainError("censored sample has more values than n");
    for (int i = 1; i < r(); ++i) {
        if (values(i) == values(i - 1))
            throw DomainError("tied observations at position " + std::to_string(i + 1) +
                              " (continuous model)");
        if (values(i) < values(i - 1))
            throw DomainError("observations not ascending at position " + std::to_string(i + 1));
    }
}

AuxQuantities aux_quantities(const MomentSlice& slice) {
    Cholesky chol(slice.sigma_obs);
    AuxQuantities aux;
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(slice.r);
    aux.p = chol.solve(one);
    aux.q = chol.solve(slice.alpha_obs);
    aux.v1 = one.dot(aux.p);
    aux.v2 = slice.alpha_obs.dot(aux.q);
    aux.v3 = one.dot(aux.q);
    aux.delta = aux.v1 * aux.v2 - aux.v3 * aux.v3;
    if (!(aux.delta > 1e-12 * aux.v1 * aux.v2))
        throw DegenerateDesignError("delta = " + std::to_string(aux.delta) +
                                    " is not safely positive");
    const int l = static_cast<int>(slice.targets.size());
    aux.R = chol.solve(slice.omega);
    aux.A.resize(l);
    aux.B.resize(l);
    for (int k = 0; k < l; ++k) {
        aux.A(k) = 1.0 - one.dot(aux.R.col(k));
        aux.B(k) = slice.alpha_targets(k) - slice.alpha_obs.dot(aux.R.col(k));
    }
    return aux;
}

BlueCoefficients blue_coefficients(const AuxQuantities& aux) {
    BlueCoefficients c;
    c.mu = (aux.v2 * aux.p - aux.v3 * aux.q) / aux.delta;
    c.sigma = (aux.v1 * aux.q - aux.v3 * aux.p) / aux.delta;
    return c;
}

BlueResult blue(const CensoredSample& sample, const MomentSlice& slice,
                const AuxQuantities& aux) {
    sample.validate();
    if (sample.r() != slice.r) throw DomainError("sample r does not match slice r");
    if (sample.n != slice.n) throw DomainError("sample n does not match slice n");

    const BlueCoefficients c = blue_coefficients(aux);
    assert(std::abs(c.mu.sum() - 1.0) < 1e-9);
    assert(std::abs(c.sigma.sum()) < 1e-9);

    BlueResult res;
    res.mu_hat = c.mu.dot(sample.values);
    res.sigma_hat = c.sigma.dot(sample.values);
    res.var_mu_unit = aux.v2 / aux.delta;
    res.var_sigma_unit = aux.v1 / aux.delta;
    res.cov_unit = -aux.v3 / aux.delta;
    res.delta = aux.delta;
    return res;
}

BlueResult blue(const CensoredSample& sample, const MomentSlice& slice) {
    return blue(sample, slice, aux_quantities(slice));
}

} // namespace ordstat
