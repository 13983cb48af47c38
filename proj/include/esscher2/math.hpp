#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace es2 {

using cplx = std::complex<double>;

inline double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.70710678118654752440); }

// Scaled complementary error function exp(z^2)*erfc(z) for complex z.
// Stable for Re(z) >= 0; Re(z) < 0 goes through the reflection formula and
// may overflow for large |Re z| (the true value does too).
cplx cerfcx(cplx z);

// log of the Poisson pmf with the given mean.
double poisson_log_pmf(unsigned k, double mean);

// Bracketed root solve for a strictly monotone increasing f: bisection to
// locate the sign change (bracket doubling from [-1,1]) then Newton polish
// with a finite-difference slope. Converges to |f| <= abs_tol.
double solve_monotone_root(const std::function<double(double)>& f, double abs_tol = 1e-12);

// Adaptive quadrature (Gauss-Kronrod via GSL) with relative tolerance.
double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10);
double integrate_upper(const std::function<double(double)>& f, double a,
                       double rel_tol = 1e-10);  // [a, +inf)
double integrate_lower(const std::function<double(double)>& f, double b,
                       double rel_tol = 1e-10);  // (-inf, b]
double integrate_line(const std::function<double(double)>& f, double rel_tol = 1e-10);

cplx integrate_line_c(const std::function<cplx(double)>& f, double rel_tol = 1e-10);

// --- derivative-free minimization ----------------------------------------

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Nelder-Mead (GSL nmsimplex2) from `start` with uniform initial step,
// stopping when the simplex size drops below tol or after max_iter steps.
SimplexResult nelder_mead(const std::function<double(const double*)>& f,
                          const std::vector<double>& start, double step, double tol,
                          int max_iter);

// --- counter-based RNG ----------------------------------------------------
// Stream keyed by (seed, stream_id); identical draws regardless of how many
// streams are advanced in between, so parallel and serial path generation
// agree bit-exactly.
class RngStream {
public:
    RngStream(unsigned long long seed, unsigned long long stream_id);

    double uniform();        // (0, 1)
    double normal();         // standard normal (Box-Muller, one per call)
    unsigned poisson(double mean);
    double gamma(double shape, double scale);

private:
    unsigned long long next_u64();
    unsigned long long state_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace es2
