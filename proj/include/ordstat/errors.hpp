#ifndef ORDSTAT_ERRORS_HPP
#define ORDSTAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ordstat {

// Invalid inputs: out-of-range sizes, bad index sets, malformed files.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failures: PD factorization breakdown, quadrature that cannot
// reach its tolerance, degenerate designs.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Delta = V1*V2 - V3^2 not safely positive.
class DegenerateDesignError : public PrecisionError {
public:
    explicit DegenerateDesignError(const std::string& msg) : PrecisionError(msg) {}
};

// Optimizer ran out of iterations at every start; carries the best iterate's
// gradient norm so callers can judge how close it got.
class ConvergenceError : public PrecisionError {
public:
    ConvergenceError(const std::string& msg, double best_grad_norm)
        : PrecisionError(msg), best_grad_norm(best_grad_norm) {}
    double best_grad_norm;
};

} // namespace ordstat

#endif
