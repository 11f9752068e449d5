#include "ordstat/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#ifdef ORDSTAT_HAVE_OPENMP
#include <omp.h>
#endif

#include "ordstat/errors.hpp"
#include "ordstat/gauss_legendre.hpp"
#include "ordstat/linalg.hpp"

namespace ordstat {

namespace {

constexpr int kNodeCap = 4096;

double log_factorial(int k) {
    double s = 0.0;
    for (int i = 2; i <= k; ++i) s += std::log(static_cast<double>(i));
    return s;
}

// n! / ((i-1)! (n-i)!) as a log, the normalizing constant of the i-th order
// statistic density in u-space.
double log_coef_single(int i, int n) {
    return log_factorial(n) - log_factorial(i - 1) - log_factorial(n - i);
}

// n! / ((i-1)! (j-i-1)! (n-j)!) for the joint (i,j) density, i < j.
double log_coef_pair(int i, int j, int n) {
    return log_factorial(n) - log_factorial(i - 1) - log_factorial(j - i - 1) -
           log_factorial(n - j);
}

// One quadrature stage of E[Z_{i:n}] and E[Z_{i:n}^2].
std::pair<double, double> single_stage(const DistributionSpec& spec, int i, int n,
                                       const MappedRule& rule) {
    const double lc = log_coef_single(i, n);
    const int m = static_cast<int>(rule.x.size());
    double mean = 0.0, raw2 = 0.0;
    for (int p = 0; p < m; ++p) {
        const double u = rule.x[p];
        const double cu = rule.cx[p];
        double t = lc;
        if (i > 1) t += (i - 1) * std::log(u);
        if (n - i > 0) t += (n - i) * std::log(cu);
        const double q = quantile(spec, u, cu);
        const double g = rule.w[p] * std::exp(t);
        mean += g * q;
        raw2 += g * q * q;
    }
    return {mean, raw2};
}

struct CrossPair {
    int i, j;     // 1-based, i < j
    double lc;
    double prev = 0.0;
    double value = 0.0;
    bool converged = false;
    bool has_prev = false;
};

// One shared stage of E[Z_i Z_j] for every active pair.  The outer u-loop is
// the parallel axis; each row's partial sums live in `rows` and are reduced
// in index order afterwards, so Serial and Parallel are bit-identical.
void cross_stage(const DistributionSpec& spec, int n, const MappedRule& rule,
                 std::vector<CrossPair>& pairs, const std::vector<int>& active,
                 Exec exec, std::vector<double>& estimates) {
    const int m = static_cast<int>(rule.x.size());
    const int na = static_cast<int>(active.size());
    std::vector<double> rows(static_cast<size_t>(m) * na);

    auto fill_row = [&](int p) {
        const double u = rule.x[p];
        const double cu = rule.cx[p];
        const double qu = quantile(spec, u, cu);
        const double lnu = (u > 0.0) ? std::log(u) : 0.0;
        std::vector<double> qvw(m), ln_vmu(m), ln_cv(m);
        for (int q = 0; q < m; ++q) {
            const double v = u + cu * rule.x[q];
            const double cv = cu * rule.cx[q];
            const double vmu = cu * rule.x[q];
            qvw[q] = quantile(spec, v, cv) * rule.w[q];
            ln_vmu[q] = std::log(vmu);
            ln_cv[q] = std::log(cv);
        }
        for (int a = 0; a < na; ++a) {
            const CrossPair& pr = pairs[active[a]];
            const int c1 = pr.i - 1, c2 = pr.j - pr.i - 1, c3 = n - pr.j;
            const double base = pr.lc + (c1 > 0 ? c1 * lnu : 0.0);
            double acc = 0.0;
            for (int q = 0; q < m; ++q) {
                double e = base;
                if (c2 > 0) e += c2 * ln_vmu[q];
                if (c3 > 0) e += c3 * ln_cv[q];
                acc += qvw[q] * std::exp(e);
            }
            rows[static_cast<size_t>(p) * na + a] = cu * qu * acc;
        }
    };

#ifdef ORDSTAT_HAVE_OPENMP
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (int p = 0; p < m; ++p) fill_row(p);
    } else {
        for (int p = 0; p < m; ++p) fill_row(p);
    }
#else
    (void)exec;
    for (int p = 0; p < m; ++p) fill_row(p);
#endif

    estimates.assign(na, 0.0);
    for (int p = 0; p < m; ++p)
        for (int a = 0; a < na; ++a)
            estimates[a] += rule.w[p] * rows[static_cast<size_t>(p) * na + a];
}

} // namespace

MomentTable exponential_moments(int n) {
    if (n < 1 || n > 1000) throw DomainError("exponential_moments: n must be in [1, 1000]");
    MomentTable t;
    t.family = Family::StandardExponential;
    t.n = n;
    t.provenance = Provenance::ClosedForm;
    t.alpha.resize(n);
    t.sigma.resize(n, n);
    // alpha_i = sum_{j<=i} 1/(n-j+1); sigma_ij = sum_{k<=min(i,j)} 1/(n-k+1)^2
    double s1 = 0.0, s2 = 0.0;
    std::vector<double> prefix2(n);
    for (int i = 1; i <= n; ++i) {
        const double d = static_cast<double>(n - i + 1);
        s1 += 1.0 / d;
        s2 += 1.0 / (d * d);
        t.alpha(i - 1) = s1;
        prefix2[i - 1] = s2;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.sigma(i, j) = prefix2[std::min(i, j)];
    return t;
}

MomentTable uniform_moments(int n) {
    if (n < 1 || n > 1000) throw DomainError("uniform_moments: n must be in [1, 1000]");
    MomentTable t;
    t.family = Family::StandardUniform;
    t.n = n;
    t.provenance = Provenance::ClosedForm;
    t.alpha.resize(n);
    t.sigma.resize(n, n);
    const double denom = static_cast<double>(n + 1) * (n + 1) * (n + 2);
    for (int i = 1; i <= n; ++i) t.alpha(i - 1) = static_cast<double>(i) / (n + 1);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const int lo = std::min(i, j), hi = std::max(i, j);
            t.sigma(i - 1, j - 1) = static_cast<double>(lo) * (n - hi + 1) / denom;
        }
    return t;
}

MomentTable quadrature_moments(const DistributionSpec& spec, int n, Exec exec) {
    spec.validate();
    if (n < 1) throw DomainError("quadrature_moments: n must be >= 1");
    if (n > 50) throw DomainError("quadrature_moments: n capped at 50 (double-integral covariance path)");

    const double tol_cov = spec.quad_tol;
    const double tol_mean = spec.quad_tol / 10.0;
    const int cap = std::max(kNodeCap, spec.quad_points);

    double achieved = 0.0;

    // stage rules are shared by every entry
    std::vector<MappedRule> rules;
    for (int m = spec.quad_points; m <= cap; m *= 2) rules.push_back(mapped_rule_01(m));

    // means and raw second moments (one-dimensional integrals)
    Eigen::VectorXd alpha(n), raw2(n);
    for (int i = 1; i <= n; ++i) {
        double am = 0.0, rm = 0.0;
        bool ok = false;
        for (size_t st = 0; st < rules.size(); ++st) {
            auto [a, r2] = single_stage(spec, i, n, rules[st]);
            if (st > 0 && std::abs(a - am) < tol_mean && std::abs(r2 - rm) < tol_cov) {
                achieved = std::max({achieved, std::abs(a - am), std::abs(r2 - rm)});
                am = a; rm = r2; ok = true;
                break;
            }
            am = a; rm = r2;
        }
        if (!ok)
            throw PrecisionError("quadrature did not converge for mean of order statistic " +
                                 std::to_string(i) + " at the node cap");
        alpha(i - 1) = am;
        raw2(i - 1) = rm;
    }

    // cross moments E[Z_i Z_j], i < j, with a shared active set per stage
    std::vector<CrossPair> pairs;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            pairs.push_back({i, j, log_coef_pair(i, j, n)});

    std::vector<int> active(pairs.size());
    for (size_t k = 0; k < pairs.size(); ++k) active[k] = static_cast<int>(k);

    std::vector<double> estimates;
    for (size_t st = 0; st < rules.size() && !active.empty(); ++st) {
        cross_stage(spec, n, rules[st], pairs, active, exec, estimates);
        std::vector<int> still;
        for (size_t a = 0; a < active.size(); ++a) {
            CrossPair& pr = pairs[active[a]];
            const double cur = estimates[a];
            if (pr.has_prev && std::abs(cur - pr.prev) < tol_cov) {
                pr.value = cur;
                pr.converged = true;
                achieved = std::max(achieved, std::abs(cur - pr.prev));
            } else {
                pr.prev = cur;
                pr.has_prev = true;
                still.push_back(active[a]);
            }
        }
        active.swap(still);
    }
    if (!active.empty()) {
        const CrossPair& pr = pairs[active.front()];
        throw PrecisionError("quadrature did not converge for E[Z_" + std::to_string(pr.i) +
                             " Z_" + std::to_string(pr.j) + "] at the node cap");
    }

    MomentTable t;
    t.family = spec.family;
    t.n = n;
    t.provenance = Provenance::Quadrature;
    t.quad_tol = spec.quad_tol;
    t.achieved_tol = achieved;
    t.clip_delta = kQuantileClip;
    t.alpha = alpha;
    t.sigma.resize(n, n);
    for (int i = 0; i < n; ++i) t.sigma(i, i) = raw2(i) - alpha(i) * alpha(i);
    for (const CrossPair& pr : pairs) {
        const double cov = pr.value - alpha(pr.i - 1) * alpha(pr.j - 1);
        t.sigma(pr.i - 1, pr.j - 1) = cov;
        t.sigma(pr.j - 1, pr.i - 1) = cov;
    }
    validate_table(t);
    return t;
}

MomentSlice slice(const MomentTable& table, int r, const std::vector<int>& targets) {
    const int n = table.n;
    if (r < 1 || r > n) throw DomainError("slice: r must be in [1, n]");
    if (r == n && !targets.empty())
        throw DomainError("slice: nothing to predict (r = n leaves no future order statistics)");
    for (size_t k = 0; k < targets.size(); ++k) {
        if (targets[k] <= r)
            throw DomainError("slice: target " + std::to_string(targets[k]) + " already observed");
        if (targets[k] > n)
            throw DomainError("slice: target " + std::to_string(targets[k]) + " exceeds n");
        if (k > 0 && targets[k] <= targets[k - 1])
            throw DomainError("slice: targets must be strictly increasing (no duplicates)");
    }
    const int l = static_cast<int>(targets.size());
    MomentSlice s;
    s.n = n;
    s.r = r;
    s.targets = targets;
    s.alpha_obs = table.alpha.head(r);
    s.sigma_obs = table.sigma.topLeftCorner(r, r);
    s.omega.resize(r, l);
    s.omega_tt.resize(l, l);
    s.alpha_targets.resize(l);
    for (int a = 0; a < l; ++a) {
        s.omega.col(a) = table.sigma.col(targets[a] - 1).head(r);
        s.alpha_targets(a) = table.alpha(targets[a] - 1);
        for (int b = 0; b < l; ++b)
            s.omega_tt(a, b) = table.sigma(targets[a] - 1, targets[b] - 1);
    }
    return s;
}

void validate_table(const MomentTable& table) {
    const int n = table.n;
    if (table.alpha.size() != n || table.sigma.rows() != n || table.sigma.cols() != n)
        throw PrecisionError("moment table has inconsistent dimensions");
    for (int i = 1; i < n; ++i)
        if (!(table.alpha(i) > table.alpha(i - 1)))
            throw PrecisionError("alpha is not strictly increasing at index " + std::to_string(i + 1));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(table.sigma(i, j) > 0.0))
                throw PrecisionError("sigma(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                     ") is not positive");
    Cholesky chol(table.sigma); // throws with the offending pivot
}

} // namespace ordstat
