#include "ordstat/verification.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <vector>

#ifdef ORDSTAT_HAVE_OPENMP
#include <omp.h>
#endif

#include "ordstat/errors.hpp"
#include "ordstat/linalg.hpp"
#include "ordstat/prediction.hpp"
#include "ordstat/rng.hpp"

namespace ordstat {

namespace {

// det W(a,b) on the affine constraint set, reduced to z = (u, v) with
// a = ap + N u, b = bp + N v.
struct DetWProblem {
    Eigen::MatrixXd S;
    Eigen::VectorXd om_s, om_t;
    double w_ss, w_tt, w_st;
    Eigen::MatrixXd N;       // r x (r-2), orthonormal
    Eigen::VectorXd ap, bp;  // particular solutions
    int rdim;                // r - 2

    DetWProblem(const MomentSlice& slice, int pos_s, int pos_t) {
        S = slice.sigma_obs;
        om_s = slice.omega.col(pos_s);
        om_t = slice.omega.col(pos_t);
        w_ss = slice.omega_tt(pos_s, pos_s);
        w_tt = slice.omega_tt(pos_t, pos_t);
        w_st = slice.omega_tt(pos_s, pos_t);
        N = constraint_nullspace(slice.alpha_obs);
        rdim = static_cast<int>(N.cols());
        ap = constraint_particular(slice.alpha_obs, 1.0, slice.alpha_targets(pos_s));
        bp = constraint_particular(slice.alpha_obs, 1.0, slice.alpha_targets(pos_t));
    }

    Eigen::VectorXd pack(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
        Eigen::VectorXd z(2 * rdim);
        z.head(rdim) = N.transpose() * (a - ap);
        z.tail(rdim) = N.transpose() * (b - bp);
        return z;
    }

    void unpack(const Eigen::VectorXd& z, Eigen::VectorXd& a, Eigen::VectorXd& b) const {
        a = ap + N * z.head(rdim);
        b = bp + N * z.tail(rdim);
    }

    double eval(const Eigen::VectorXd& z, Eigen::VectorXd* grad) const {
        Eigen::VectorXd a, b;
        unpack(z, a, b);
        const Eigen::VectorXd Sa = S * a;
        const Eigen::VectorXd Sb = S * b;
        const double W1 = a.dot(Sa) - 2.0 * a.dot(om_s) + w_ss;
        const double W2 = b.dot(Sb) - 2.0 * b.dot(om_t) + w_tt;
        const double W3 = a.dot(Sb) - a.dot(om_t) - b.dot(om_s) + w_st;
        const double f = W1 * W2 - W3 * W3;
        if (grad) {
            const Eigen::VectorXd ga = W2 * 2.0 * (Sa - om_s) - 2.0 * W3 * (Sb - om_t);
            const Eigen::VectorXd gb = W1 * 2.0 * (Sb - om_t) - 2.0 * W3 * (Sa - om_s);
            grad->resize(2 * rdim);
            grad->head(rdim) = N.transpose() * ga;
            grad->tail(rdim) = N.transpose() * gb;
        }
        return f;
    }
};

int require_target_position(const MomentSlice& slice, int s) {
    auto it = std::find(slice.targets.begin(), slice.targets.end(), s);
    if (it == slice.targets.end())
        throw DomainError("index " + std::to_string(s) + " is not a slice target");
    return static_cast<int>(it - slice.targets.begin());
}

MinimizerResult run_descent(const DetWProblem& prob, const OptimizerConfig& cfg,
                            Eigen::VectorXd z) {
    MinimizerResult res;
    Eigen::VectorXd g, g_prev, z_prev;
    double f = prob.eval(z, &g);
    std::deque<double> hist{f};
    double step = 1.0;
    int it = 0;
    while (g.norm() > cfg.grad_tol && it < cfg.max_iters) {
        ++it;
        if (it > 1) {
            const Eigen::VectorXd sv = z - z_prev;
            const Eigen::VectorXd yv = g - g_prev;
            const double sy = sv.dot(yv);
            step = (sy > 0.0) ? sv.squaredNorm() / sy : 1.0;
            step = std::clamp(step, 1e-12, 1e8);
        }
        const double fref = *std::max_element(hist.begin(), hist.end());
        const double slope = -g.squaredNorm();
        double t = step;
        Eigen::VectorXd z_new;
        double f_new = f;
        for (int bt = 0; bt < 100; ++bt) {
            z_new = z - t * g;
            f_new = prob.eval(z_new, nullptr);
            if (f_new <= fref + 1e-4 * t * slope) break;
            t *= 0.5;
        }
        z_prev = z;
        g_prev = g;
        z = z_new;
        f = prob.eval(z, &g);
        hist.push_back(f);
        if (hist.size() > 10) hist.pop_front();
    }
    prob.unpack(z, res.a, res.b);
    res.objective = f;
    res.grad_norm = g.norm();
    res.iterations = it;
    res.converged = res.grad_norm <= cfg.grad_tol;
    return res;
}

} // namespace

MinimizerResult numeric_det_minimizer_from(const MomentSlice& slice, int s, int t,
                                           const OptimizerConfig& cfg,
                                           const Eigen::VectorXd& a0,
                                           const Eigen::VectorXd& b0) {
    if (cfg.max_iters < 100) throw DomainError("max_iters must be >= 100");
    if (!(cfg.grad_tol > 0.0)) throw DomainError("grad_tol must be > 0");
    const int pos_s = require_target_position(slice, s);
    const int pos_t = require_target_position(slice, t);
    const DetWProblem prob(slice, pos_s, pos_t);
    return run_descent(prob, cfg, prob.pack(a0, b0));
}

MinimizerResult numeric_det_minimizer(const MomentSlice& slice, int s, int t,
                                      const OptimizerConfig& cfg) {
    if (cfg.max_iters < 100) throw DomainError("max_iters must be >= 100");
    if (!(cfg.grad_tol > 0.0)) throw DomainError("grad_tol must be > 0");
    const int pos_s = require_target_position(slice, s);
    const int pos_t = require_target_position(slice, t);
    const DetWProblem prob(slice, pos_s, pos_t);

    // warm start from the closed form, for the perturbed start only; the
    // other two starts share no information with it
    const AuxQuantities aux = aux_quantities(slice);
    const PredictorCoefficients pc = simultaneous_coefficients(slice, aux);
    const Eigen::VectorXd z_warm =
        prob.pack(pc.coeffs.row(pos_s).transpose(), pc.coeffs.row(pos_t).transpose());

    std::vector<Eigen::VectorXd> starts;
    StreamRng rng(cfg.seed);
    Eigen::VectorXd z0 = z_warm;
    for (int i = 0; i < z0.size(); ++i) z0(i) += 0.05 * normal_quantile(rng.uniform01());
    starts.push_back(z0);
    Eigen::VectorXd z1(2 * prob.rdim);
    for (int i = 0; i < z1.size(); ++i) z1(i) = normal_quantile(rng.uniform01());
    starts.push_back(z1);
    starts.push_back(Eigen::VectorXd::Zero(2 * prob.rdim));

    MinimizerResult best;
    bool have_best = false;
    double best_grad = std::numeric_limits<double>::infinity();
    std::vector<double> converged_objectives;
    for (size_t k = 0; k < starts.size(); ++k) {
        MinimizerResult r = run_descent(prob, cfg, starts[k]);
        r.start_index = static_cast<int>(k);
        if (r.converged) converged_objectives.push_back(r.objective);
        const bool better = !have_best ||
                            (r.converged && !best.converged) ||
                            (r.converged == best.converged && r.objective < best.objective);
        if (better) { best = r; have_best = true; }
        best_grad = std::min(best_grad, r.grad_norm);
    }
    if (!best.converged)
        throw ConvergenceError("determinant minimizer did not converge at any start "
                               "(best gradient norm " + std::to_string(best_grad) + ")",
                               best_grad);
    if (converged_objectives.size() > 1) {
        const double lo = *std::min_element(converged_objectives.begin(), converged_objectives.end());
        const double hi = *std::max_element(converged_objectives.begin(), converged_objectives.end());
        best.multistart_spread = (hi - lo) / std::max(std::abs(lo), 1e-300);
    }
    return best;
}

MonteCarloReport monte_carlo(const DistributionSpec& spec, double mu, double sigma,
                             int n, int r, const std::vector<int>& targets,
                             long long replications, std::uint64_t seed, Exec exec,
                             const MomentTable* table) {
    if (!(sigma > 0.0)) throw DomainError("monte_carlo: sigma must be > 0");
    if (replications < 1) throw DomainError("monte_carlo: replications must be >= 1");
    if (targets.empty()) throw DomainError("monte_carlo: no targets");

    MomentTable built;
    if (!table) {
        switch (spec.family) {
            case Family::StandardExponential: built = exponential_moments(n); break;
            case Family::StandardUniform: built = uniform_moments(n); break;
            default: built = quadrature_moments(spec, n, exec); break;
        }
        table = &built;
    }
    const MomentSlice sl = slice(*table, r, targets);
    const AuxQuantities aux = aux_quantities(sl);
    const PredictorCoefficients pc = simultaneous_coefficients(sl, aux);
    const MspeMatrix w = mspe_matrix(sl, aux);
    const int l = static_cast<int>(targets.size());

    Eigen::VectorXd sum_e = Eigen::VectorXd::Zero(l);
    Eigen::VectorXd sum_e2 = Eigen::VectorXd::Zero(l);
    Eigen::MatrixXd sum_outer = Eigen::MatrixXd::Zero(l, l);

    // fixed-size blocks: parallel fill, then accumulate in replication order
    const long long block = 1 << 14;
    std::vector<double> errs(static_cast<size_t>(block) * l);
    for (long long lo = 0; lo < replications; lo += block) {
        const long long hi = std::min(replications, lo + block);
        const int count = static_cast<int>(hi - lo);

        auto simulate = [&](int k) {
            StreamRng rng = StreamRng::stream(seed, static_cast<std::uint64_t>(lo + k));
            std::vector<double> x(n);
            for (int i = 0; i < n; ++i) {
                const double u = rng.uniform01();
                x[i] = mu + sigma * quantile(spec, u, 1.0 - u);
            }
            std::sort(x.begin(), x.end());
            for (int j = 0; j < l; ++j) {
                double pred = 0.0;
                for (int i = 0; i < r; ++i) pred += pc.coeffs(j, i) * x[i];
                errs[static_cast<size_t>(k) * l + j] = pred - x[targets[j] - 1];
            }
        };

#ifdef ORDSTAT_HAVE_OPENMP
        if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
            for (int k = 0; k < count; ++k) simulate(k);
        } else {
            for (int k = 0; k < count; ++k) simulate(k);
        }
#else
        for (int k = 0; k < count; ++k) simulate(k);
#endif
        for (int k = 0; k < count; ++k) {
            const Eigen::Map<Eigen::VectorXd> e(errs.data() + static_cast<size_t>(k) * l, l);
            sum_e += e;
            sum_e2 += e.cwiseProduct(e);
            sum_outer += e * e.transpose();
        }
    }

    MonteCarloReport rep;
    rep.replications = replications;
    rep.seed = seed;
    rep.family = spec.family;
    rep.mu = mu;
    rep.sigma = sigma;
    rep.n = n;
    rep.r = r;
    rep.targets = targets;
    const double R = static_cast<double>(replications);
    rep.empirical_bias = sum_e / R;
    rep.se_defined = replications >= 2;
    rep.bias_standard_errors.resize(l);
    for (int j = 0; j < l; ++j) {
        if (rep.se_defined) {
            const double var = (sum_e2(j) - R * rep.empirical_bias(j) * rep.empirical_bias(j)) / (R - 1.0);
            rep.bias_standard_errors(j) = std::sqrt(std::max(var, 0.0) / R);
        } else {
            rep.bias_standard_errors(j) = std::numeric_limits<double>::quiet_NaN();
        }
    }
    rep.empirical_mspe_unit = sum_outer / (R * sigma * sigma);
    rep.theoretical_mspe_unit = w.w;
    rep.max_relative_mspe_error = 0.0;
    for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j)
            rep.max_relative_mspe_error =
                std::max(rep.max_relative_mspe_error,
                         std::abs(rep.empirical_mspe_unit(i, j) - w.w(i, j)) / std::abs(w.w(i, j)));
    return rep;
}

DominanceReport dominance_probe(const MomentSlice& slice_, int s, int t,
                                long long trials, std::uint64_t seed, Exec exec) {
    if (trials < 1) throw DomainError("dominance_probe: trials must be >= 1");
    const int pos_s = require_target_position(slice_, s);
    const int pos_t = require_target_position(slice_, t);

    const AuxQuantities aux = aux_quantities(slice_);
    const PredictorCoefficients pc = simultaneous_coefficients(slice_, aux);
    const Eigen::VectorXd a = pc.coeffs.row(pos_s).transpose();
    const Eigen::VectorXd b = pc.coeffs.row(pos_t).transpose();
    const Eigen::MatrixXd N = constraint_nullspace(slice_.alpha_obs);
    const int rdim = static_cast<int>(N.cols());

    const Eigen::MatrixXd& S = slice_.sigma_obs;
    const Eigen::VectorXd om_s = slice_.omega.col(pos_s);
    const Eigen::VectorXd om_t = slice_.omega.col(pos_t);
    const double w_ss = slice_.omega_tt(pos_s, pos_s);
    const double w_tt = slice_.omega_tt(pos_t, pos_t);
    const double w_st = slice_.omega_tt(pos_s, pos_t);

    auto quad_form = [&](const Eigen::VectorXd& av, const Eigen::VectorXd& bv, double lw,
                         double kw) {
        const double W1 = av.dot(S * av) - 2.0 * av.dot(om_s) + w_ss;
        const double W2 = bv.dot(S * bv) - 2.0 * bv.dot(om_t) + w_tt;
        const double W3 = av.dot(S * bv) - av.dot(om_t) - bv.dot(om_s) + w_st;
        return lw * lw * W1 + 2.0 * lw * kw * W3 + kw * kw * W2;
    };

    const long long block = 1 << 14;
    std::vector<double> viol(static_cast<size_t>(std::min(block, trials)));

    DominanceReport rep;
    rep.trials = trials;
    rep.seed = seed;
    rep.s = s;
    rep.t = t;
    rep.max_violation = -std::numeric_limits<double>::infinity();

    auto run_trial = [&](long long trial) {
        StreamRng rng = StreamRng::stream(seed, static_cast<std::uint64_t>(trial));
        const double theta = 2.0 * M_PI * rng.uniform01();
        const double lw = std::cos(theta), kw = std::sin(theta);
        Eigen::VectorXd u(rdim), v(rdim);
        for (int i = 0; i < rdim; ++i) u(i) = normal_quantile(rng.uniform01());
        for (int i = 0; i < rdim; ++i) v(i) = normal_quantile(rng.uniform01());
        const Eigen::VectorXd a_alt = a + N * u;
        const Eigen::VectorXd b_alt = b + N * v;
        return quad_form(a, b, lw, kw) - quad_form(a_alt, b_alt, lw, kw);
    };

    for (long long lo = 0; lo < trials; lo += block) {
        const long long hi = std::min(trials, lo + block);
        const int count = static_cast<int>(hi - lo);
#ifdef ORDSTAT_HAVE_OPENMP
        if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
            for (int k = 0; k < count; ++k) viol[k] = run_trial(lo + k);
        } else {
            for (int k = 0; k < count; ++k) viol[k] = run_trial(lo + k);
        }
#else
        (void)exec;
        for (int k = 0; k < count; ++k) viol[k] = run_trial(lo + k);
#endif
        for (int k = 0; k < count; ++k) {
            if (viol[k] > rep.max_violation) {
                rep.max_violation = viol[k];
                rep.worst_trial = lo + k;
            }
        }
    }

    rep.has_violation = rep.max_violation > 1e-10;
    // re-derive the worst trial's instance for the report
    {
        StreamRng rng = StreamRng::stream(seed, static_cast<std::uint64_t>(rep.worst_trial));
        const double theta = 2.0 * M_PI * rng.uniform01();
        rep.worst_l = std::cos(theta);
        rep.worst_k = std::sin(theta);
        Eigen::VectorXd u(rdim), v(rdim);
        for (int i = 0; i < rdim; ++i) u(i) = normal_quantile(rng.uniform01());
        for (int i = 0; i < rdim; ++i) v(i) = normal_quantile(rng.uniform01());
        rep.worst_a = a + N * u;
        rep.worst_b = b + N * v;
    }
    return rep;
}

} // namespace ordstat
