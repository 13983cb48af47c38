#include "esscher2/math.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_multimin.h>

#include <cmath>

#include "esscher2/types.hpp"

namespace es2 {

// ---------------------------------------------------------------------------
// cerfcx
// ---------------------------------------------------------------------------

namespace {

// Weideman's rational approximation of the Faddeeva function w(u) for
// Im u >= 0 (SIAM J. Numer. Anal. 31, 1994), N = 48.  Max relative error
// ~1.4e-14 over the closed upper half plane.
constexpr int kFadN = 48;
constexpr double kFadL = 5.825901260487881;  // sqrt(N/sqrt(2))
constexpr double kFadA[kFadN] = {
    -3.70074341541718826e-17, 3.90809708090504099e-17,  8.91304535964125145e-17,
    4.33646987676311602e-17,  2.10357809007447985e-17,  7.06831347963979208e-20,
    3.85910504816624698e-16,  7.25379754852292609e-16,  -1.87923282206915558e-15,
    -5.23915859509534328e-15, 9.52753636075451554e-15,  4.23425555842355866e-14,
    -3.19334159628465632e-14, -3.22775731097254591e-13, -9.65501738984251051e-14,
    2.21541877720001645e-12,  3.42533409044184144e-12,  -1.19354512668394108e-11,
    -4.38658676752703712e-11, 2.16220023479657394e-11,  3.87942207730320342e-10,
    5.77528985547910890e-10,  -2.01565992731615496e-09, -9.59625471307884432e-09,
    -6.38680992890150548e-09, 6.92700063602607607e-08,  2.65494920068709391e-07,
    1.94943374672414598e-07,  -1.94456577900989678e-06, -9.47563824045082754e-06,
    -1.90544616191120193e-05, 1.75063163711175849e-05,  3.07869136408890425e-04,
    1.48649912519561826e-03,  5.12581354822568610e-03,  1.45468377922374024e-02,
    3.58613699833766827e-02,  7.89558955347000463e-02,  1.57863304433804696e-01,
    2.89799890796048121e-01,  4.92257023913990566e-01,  7.78062419148422779e-01,
    1.14922046453977811e+00,  1.59130846911780033e+00,  2.07075997167429149e+00,
    2.53704848744469036e+00,  2.93044989562375635e+00,  3.19406458939507099e+00,
};

cplx faddeeva_upper(cplx u) {
    cplx denom = kFadL - cplx(0.0, 1.0) * u;
    cplx Z = (kFadL + cplx(0.0, 1.0) * u) / denom;
    cplx p(0.0, 0.0);
    for (double a : kFadA) p = p * Z + a;
    return 2.0 * p / (denom * denom) + 0.5641895835477562869 / denom;  // + (1/sqrt(pi))/denom
}

}  // namespace

cplx cerfcx(cplx z) {
    if (z.real() < 0.0) {
        // erfc(z) = 2 - erfc(-z)
        cplx z2 = z * z;
        if (z2.real() > 700.0) throw error(errc::domain_error, "cerfcx: reflection overflow");
        return 2.0 * std::exp(z2) - cerfcx(-z);
    }
    // erfcx(z) = w(iz); Re z >= 0 puts iz in the upper half plane
    return faddeeva_upper(cplx(-z.imag(), z.real()));
}

// ---------------------------------------------------------------------------
// small numerics
// ---------------------------------------------------------------------------

double poisson_log_pmf(unsigned k, double mean) {
    if (mean <= 0.0) return k == 0 ? 0.0 : -INFINITY;
    return -mean + k * std::log(mean) - std::lgamma(k + 1.0);
}

double solve_monotone_root(const std::function<double(double)>& f, double abs_tol) {
    double lo = -1.0, hi = 1.0;
    double flo = f(lo), fhi = f(hi);
    int guard = 0;
    while (flo > 0.0) {
        hi = lo;
        fhi = flo;
        lo *= 2.0;
        flo = f(lo);
        if (++guard > 2000 || !std::isfinite(lo))
            throw error(errc::solver_failure, "root bracket expansion failed (low side)");
    }
    guard = 0;
    while (fhi < 0.0) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = f(hi);
        if (++guard > 2000 || !std::isfinite(hi))
            throw error(errc::solver_failure, "root bracket expansion failed (high side)");
    }
    if (!std::isfinite(flo) || !std::isfinite(fhi))
        throw error(errc::solver_failure, "non-finite residual at bracket");

    // bisect until the bracket is small, then Newton with secant slope
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (std::abs(fm) <= abs_tol) return mid;
        if (fm < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15 * (1.0 + std::abs(mid))) break;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        double fx = f(x);
        if (std::abs(fx) <= abs_tol) return x;
        double h = 1e-7 * (1.0 + std::abs(x));
        double slope = (f(x + h) - fx) / h;
        if (slope <= 0.0 || !std::isfinite(slope)) break;
        double xn = x - fx / slope;
        if (xn <= lo || xn >= hi) break;
        x = xn;
    }
    return x;
}

// ---------------------------------------------------------------------------
// quadrature (GSL)
// ---------------------------------------------------------------------------

namespace {

struct GslGuard {
    GslGuard() { old_ = gsl_set_error_handler_off(); }
    ~GslGuard() { gsl_set_error_handler(old_); }
    gsl_error_handler_t* old_;
};

double gsl_thunk(double x, void* p) {
    auto* f = static_cast<const std::function<double(double)>*>(p);
    return (*f)(x);
}

struct Workspace {
    Workspace() : ws(gsl_integration_workspace_alloc(4000)) {}
    ~Workspace() { gsl_integration_workspace_free(ws); }
    gsl_integration_workspace* ws;
};

double run_quad(const std::function<double(double)>& f, double rel_tol, int mode, double a,
                double b) {
    GslGuard guard;
    thread_local Workspace w;
    gsl_function gf;
    gf.function = &gsl_thunk;
    gf.params = const_cast<void*>(static_cast<const void*>(&f));
    double result = 0.0, abserr = 0.0;
    int status = 0;
    switch (mode) {
        case 0:
            status = gsl_integration_qag(&gf, a, b, 1e-12, rel_tol, 4000, GSL_INTEG_GAUSS31,
                                         w.ws, &result, &abserr);
            break;
        case 1:
            status = gsl_integration_qagiu(&gf, a, 1e-12, rel_tol, 4000, w.ws, &result, &abserr);
            break;
        case 2:
            status = gsl_integration_qagil(&gf, b, 1e-12, rel_tol, 4000, w.ws, &result, &abserr);
            break;
        case 3:
            status = gsl_integration_qagi(&gf, 1e-12, rel_tol, 4000, w.ws, &result, &abserr);
            break;
    }
    if (status != 0 && status != GSL_EROUND) {
        // retry with looser relative tolerance before giving up
        double rt = rel_tol * 100.0;
        switch (mode) {
            case 0:
                status = gsl_integration_qag(&gf, a, b, 1e-10, rt, 4000, GSL_INTEG_GAUSS31, w.ws,
                                             &result, &abserr);
                break;
            case 1:
                status = gsl_integration_qagiu(&gf, a, 1e-10, rt, 4000, w.ws, &result, &abserr);
                break;
            case 2:
                status = gsl_integration_qagil(&gf, b, 1e-10, rt, 4000, w.ws, &result, &abserr);
                break;
            case 3:
                status = gsl_integration_qagi(&gf, 1e-10, rt, 4000, w.ws, &result, &abserr);
                break;
        }
        if (status != 0 && status != GSL_EROUND)
            throw error(errc::quadrature_failure,
                        "adaptive quadrature failed (gsl status " + std::to_string(status) + ")");
    }
    return result;
}

}  // namespace

double integrate_finite(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    return run_quad(f, rel_tol, 0, a, b);
}

double integrate_upper(const std::function<double(double)>& f, double a, double rel_tol) {
    return run_quad(f, rel_tol, 1, a, 0.0);
}

double integrate_lower(const std::function<double(double)>& f, double b, double rel_tol) {
    return run_quad(f, rel_tol, 2, 0.0, b);
}

double integrate_line(const std::function<double(double)>& f, double rel_tol) {
    // split at 0: jump integrands are frequently kinked or singular there
    return integrate_lower(f, 0.0, rel_tol) + integrate_upper(f, 0.0, rel_tol);
}

cplx integrate_line_c(const std::function<cplx(double)>& f, double rel_tol) {
    double re = integrate_line([&](double x) { return f(x).real(); }, rel_tol);
    double im = integrate_line([&](double x) { return f(x).imag(); }, rel_tol);
    return {re, im};
}

// ---------------------------------------------------------------------------
// RngStream
// ---------------------------------------------------------------------------

namespace {

inline unsigned long long splitmix64(unsigned long long& s) {
    s += 0x9E3779B97F4A7C15ULL;
    unsigned long long z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(unsigned long long seed, unsigned long long stream_id) {
    unsigned long long s = seed;
    unsigned long long a = splitmix64(s);
    s ^= stream_id * 0xD6E8FEB86659FD93ULL + 0x2545F4914F6CDD1DULL;
    unsigned long long b = splitmix64(s);
    state_ = a ^ (b + 0x9E3779B97F4A7C15ULL);
    if (state_ == 0) state_ = 0x853C49E6748FEA9BULL;
}

unsigned long long RngStream::next_u64() { return splitmix64(state_); }

double RngStream::uniform() {
    // 53-bit mantissa in (0,1)
    double u = ((next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    return u;
}

double RngStream::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    double u1 = uniform(), u2 = uniform();
    double m = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586477 * u2;
    cached_normal_ = m * std::sin(a);
    has_cached_ = true;
    return m * std::cos(a);
}

unsigned RngStream::poisson(double mean) {
    if (mean <= 0.0) return 0;
    unsigned total = 0;
    // exp underflow guard: split very large means into exact chunks
    while (mean > 500.0) {
        total += poisson(500.0);
        mean -= 500.0;
    }
    double l = std::exp(-mean), p = 1.0;
    unsigned k = 0;
    do {
        ++k;
        p *= uniform();
    } while (p > l);
    return total + k - 1;
}

double RngStream::gamma(double shape, double scale) {
    if (shape <= 0.0) return 0.0;
    if (shape < 1.0) {
        // boost: G(a) = G(a+1) * U^(1/a)
        double u = uniform();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia-Tsang
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z = normal();
        double v = 1.0 + c * z;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = uniform();
        if (u < 1.0 - 0.0331 * z * z * z * z) return scale * d * v;
        if (std::log(u) < 0.5 * z * z + d * (1.0 - v + std::log(v))) return scale * d * v;
    }
}

}  // namespace es2

namespace es2 {

namespace {
double simplex_call(const gsl_vector* v, void* params) {
    const auto* f = static_cast<const std::function<double(const double*)>*>(params);
    return (*f)(v->data);
}
}  // namespace

SimplexResult nelder_mead(const std::function<double(const double*)>& f,
                          const std::vector<double>& start, double step, double tol,
                          int max_iter) {
    const size_t n = start.size();
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* st = gsl_vector_alloc(n);
    for (size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, start[i]);
        gsl_vector_set(st, i, step);
    }
    gsl_multimin_function func;
    func.n = n;
    func.f = &simplex_call;
    func.params = const_cast<std::function<double(const double*)>*>(&f);

    gsl_multimin_fminimizer* s =
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &func, x, st);

    SimplexResult out;
    int iter = 0;
    while (iter < max_iter) {
        ++iter;
        if (gsl_multimin_fminimizer_iterate(s) != 0) break;
        if (gsl_multimin_fminimizer_size(s) < tol) {
            out.converged = true;
            break;
        }
    }
    out.iterations = iter;
    out.x.resize(n);
    for (size_t i = 0; i < n; ++i) out.x[i] = gsl_vector_get(s->x, i);
    out.value = s->fval;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(st);
    return out;
}

}  // namespace es2
