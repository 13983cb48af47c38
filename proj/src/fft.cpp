#include "esscher2/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>

namespace es2 {

double FftGrid::dk() const { return 2.0 * M_PI / (N * du); }

namespace {

constexpr double kTwoPi = 6.283185307179586477;

void validate_grid(const FftGrid& g, bool is_put) {
    if (g.N < 16 || (g.N & (g.N - 1)) != 0)
        throw error(errc::bad_config, "fft grid: N must be a power of two >= 16");
    if (!(g.du > 0.0)) throw error(errc::bad_config, "fft grid: du > 0 required");
    if (is_put) {
        // the damped put transform int e^{(1+iu-alpha)k} dk over (ln S_T, inf)
        // only converges for alpha > 1
        if (!(g.alpha > 1.0))
            throw error(errc::bad_config, "fft grid: put damping needs alpha > 1");
    } else {
        if (!(g.alpha > 0.0)) throw error(errc::bad_config, "fft grid: alpha > 0 required");
    }
}

// FFTW plan creation is not thread-safe; execution is.
std::mutex g_plan_mutex;

void run_fft(std::vector<cplx>& data) {
    const int n = static_cast<int>(data.size());
    auto* in = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        plan = fftw_plan_dft_1d(n, in, in, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        fftw_destroy_plan(plan);
    }
}

PriceCurve transform(const CharFn& cf, double spot, double r, const FftGrid& grid,
                     bool is_put) {
    validate_grid(grid, is_put);
    if (!(spot > 0.0)) throw error(errc::bad_config, "fft: spot > 0 required");
    const double a = grid.alpha;
    const double shift = is_put ? (1.0 - a) : (1.0 + a);
    const cplx i(0.0, 1.0);

    // damping-moment check: the charfn must be finite at the shifted argument
    cplx probe = cf(-shift * i);
    if (!std::isfinite(probe.real()) || !std::isfinite(probe.imag()))
        throw error(errc::domain_error, "fft: charfn not finite at the damping shift");

    const double T = cf.T;
    const double dk = grid.dk();
    const double lx = std::log(spot);
    const double b0 = lx - 0.5 * grid.N * dk;
    const double disc = std::exp(-r * T);

    std::vector<cplx> data(grid.N);
    for (int j = 0; j < grid.N; ++j) {
        const double u = j * grid.du;
        const cplx w = cplx(u, 0.0) - shift * i;
        cplx denom = is_put ? cplx(a * a - a - u * u, (1.0 - 2.0 * a) * u)
                            : cplx(a * a + a - u * u, (1.0 + 2.0 * a) * u);
        cplx val = disc * cf(w) * std::exp(i * w * lx) / denom;
        if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
            std::ostringstream os;
            os << "fft: non-finite integrand at u index " << j << " (u=" << u << ")";
            throw error(errc::domain_error, os.str());
        }
        // Simpson weights 1/3, 4/3, 2/3, ..., with the half-open first node
        double simp = (j % 2 == 1) ? 4.0 / 3.0 : 2.0 / 3.0;
        if (j == 0) simp = 1.0 / 3.0;
        data[j] = std::exp(-i * u * b0) * val * grid.du * simp;
    }
    run_fft(data);

    PriceCurve out;
    out.spot = spot;
    out.r = r;
    out.T = T;
    out.log_strike.resize(grid.N);
    out.price.resize(grid.N);
    for (int j = 0; j < grid.N; ++j) {
        const double k = b0 + j * dk;
        out.log_strike[j] = k;
        const double damp = is_put ? std::exp(a * k) : std::exp(-a * k);
        out.price[j] = damp / M_PI * data[j].real();
    }
    return out;
}

}  // namespace

PriceCurve fft_call_curve(const CharFn& cf, double spot, double r, const FftGrid& grid) {
    return transform(cf, spot, r, grid, false);
}

PriceCurve fft_put_curve(const CharFn& cf, double spot, double r, const FftGrid& grid) {
    return transform(cf, spot, r, grid, true);
}

double price_at_strike(const PriceCurve& curve, double K) {
    if (!(K > 0.0)) throw error(errc::bad_config, "price_at_strike: K > 0 required");
    const auto& ks = curve.log_strike;
    const size_t n = ks.size();
    if (n < 4) throw error(errc::bad_config, "price_at_strike: curve too short");
    const double k = std::log(K);
    const double dk = ks[1] - ks[0];
    // need nodes j-1 .. j+2 inside the grid
    const double pos = (k - ks[0]) / dk;
    const long j = static_cast<long>(std::floor(pos));
    if (j < 1 || j + 2 >= static_cast<long>(n))
        throw error(errc::domain_error, "price_at_strike: strike outside grid interior");
    // 4-point Lagrange in the local coordinate t in [0,1)
    const double t = pos - j;
    const double p0 = curve.price[j - 1], p1 = curve.price[j], p2 = curve.price[j + 1],
                 p3 = curve.price[j + 2];
    const double c0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    const double c1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    const double c2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    const double c3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    return c0 * p0 + c1 * p1 + c2 * p2 + c3 * p3;
}

double fft_call(const CharFn& cf, double spot, double r, double K, const FftGrid& grid) {
    return price_at_strike(fft_call_curve(cf, spot, r, grid), K);
}

double fft_put(const CharFn& cf, double spot, double r, double K, const FftGrid& grid) {
    return price_at_strike(fft_put_curve(cf, spot, r, grid), K);
}

}  // namespace es2
