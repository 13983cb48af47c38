#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "esscher2/charfn.hpp"
#include "esscher2/montecarlo.hpp"
#include "esscher2/pricing.hpp"

using namespace es2;

namespace {
const double kR = 0.03;
const Cjd kCjd{0.05, 0.2, 1.0, 0.1};
const Ljd kLjd{0.05, 0.2, 0.5, -0.05, 0.1};

double terminal_mean(const PathSet& ps, double lx0) {
    double s = 0.0;
    for (int p = 0; p < ps.n_paths; ++p) s += ps.terminal(p) - lx0;
    return s / ps.n_paths;
}

double terminal_var(const PathSet& ps, double lx0) {
    const double m = terminal_mean(ps, lx0);
    double s = 0.0;
    for (int p = 0; p < ps.n_paths; ++p) {
        const double d = ps.terminal(p) - lx0 - m;
        s += d * d;
    }
    return s / (ps.n_paths - 1);
}
}  // namespace

TEST_CASE("degenerate gbm collapses to deterministic drift") {
    Gbm tiny{0.07, 1e-30};
    auto ps = simulate_p(ModelSpec{tiny}, 100.0, 2.0, 3, 8);
    for (int p = 0; p < 3; ++p)
        CHECK(ps.terminal(p) ==
              doctest::Approx(std::log(100.0) + tiny.mu * 2.0).epsilon(1e-14));
}

TEST_CASE("physical moments: cjd mean and ljd variance") {
    const double T = 0.5;
    const double lx0 = std::log(100.0);
    {
        auto ps = simulate_p(ModelSpec{kCjd}, 100.0, T, 100000, 16, 11);
        // E[X_T] = b*T with b = mu - sigma^2/2 - lambda*(e^gamma - 1 - gamma)
        const double b = kCjd.mu - 0.5 * kCjd.sigma * kCjd.sigma -
                         kCjd.lambda * (std::expm1(kCjd.gamma) - kCjd.gamma);
        const double var = (kCjd.sigma * kCjd.sigma +
                            kCjd.lambda * kCjd.gamma * kCjd.gamma) * T;
        const double se = std::sqrt(var / ps.n_paths);
        CHECK(std::abs(terminal_mean(ps, lx0) - b * T) < 3.0 * se);
    }
    {
        auto ps = simulate_p(ModelSpec{kLjd}, 100.0, T, 100000, 16, 12);
        const double var = (kLjd.sigma * kLjd.sigma +
                            kLjd.lambda * (kLjd.mu_j * kLjd.mu_j +
                                           kLjd.sigma_j * kLjd.sigma_j)) * T;
        // sampling error of the sample variance from the sample fourth moment
        const double m = terminal_mean(ps, lx0);
        double mu4 = 0.0;
        for (int p = 0; p < ps.n_paths; ++p) {
            const double d = ps.terminal(p) - lx0 - m;
            mu4 += d * d * d * d;
        }
        mu4 /= ps.n_paths;
        const double se = std::sqrt((mu4 - var * var) / ps.n_paths);
        CHECK(std::abs(terminal_var(ps, lx0) - var) < 3.0 * se);
    }
}

TEST_CASE("seeded reproducibility and stream decorrelation") {
    auto a = simulate_p(ModelSpec{kCjd}, 100.0, 0.5, 64, 8, 42);
    auto b = simulate_p(ModelSpec{kCjd}, 100.0, 0.5, 64, 8, 42);
    CHECK(a.levels == b.levels);
    CHECK(path_checksum(a) == path_checksum(b));
    auto c = simulate_p(ModelSpec{kCjd}, 100.0, 0.5, 64, 8, 43);
    CHECK(a.levels != c.levels);
}

TEST_CASE("r-psi paths: discounted martingale and series-oracle price") {
    const double T = 0.5, x0 = 100.0;
    auto measure = make_cjd_measure(kCjd, kR, 0.0, MeasureClass::exponential);
    auto ps = simulate_cjd_rpsi(kCjd, measure, kR, x0, T, 100000, 16, 7);

    auto spot = mc_price(ps, Payoff{Payoff::Kind::terminal_spot, 0.0}, kR);
    CHECK(std::abs(spot.price - x0) < 3.0 * spot.std_error);

    auto unit = mc_price(ps, Payoff{Payoff::Kind::unit, 0.0}, kR);
    CHECK(unit.price == doctest::Approx(std::exp(-kR * T)).epsilon(1e-14));
    CHECK(unit.std_error == 0.0);

    MarketContext ctx{kR, x0, 0.0, T};
    const double series = cjd_call(ctx, 100.0, kCjd, measure, TruncationPolicy::adaptive());
    auto mc = mc_price(ps, Payoff::call(100.0), kR);
    CHECK(std::abs(mc.price - series) < 3.0 * mc.std_error);
}

TEST_CASE("r-psi cumulants match the characteristic function") {
    const double T = 0.5, x0 = 100.0, psi = -10.0;
    auto measure = make_cjd_measure(kCjd, kR, psi, MeasureClass::exponential);
    auto ps = simulate_cjd_rpsi(kCjd, measure, kR, x0, T, 200000, 8, 19);
    auto cf = charfn_cjd_2nd(kCjd, measure.eta, psi, MeasureClass::exponential, T);

    const double h = 1e-3;
    const cplx lc = std::log(cf(cplx(h, 0.0)));
    const double k1 = lc.imag() / h;
    const double k2 = -2.0 * lc.real() / (h * h);

    const double lx0 = std::log(x0);
    const double se1 = std::sqrt(k2 / ps.n_paths);
    CHECK(std::abs(terminal_mean(ps, lx0) - k1) < 3.0 * se1);
    // variance-of-variance bound: Gaussian-scale 2 k2^2 / n inflated for jumps
    const double se2 = std::sqrt(8.0 * k2 * k2 / ps.n_paths);
    CHECK(std::abs(terminal_var(ps, lx0) - k2) < 3.0 * se2);
}

TEST_CASE("psi -> -inf terminal law is risk-neutral gbm (kolmogorov-smirnov)") {
    const double T = 0.5, x0 = 100.0;
    auto measure = make_cjd_measure(kCjd, kR, -1e6, MeasureClass::exponential);
    auto ps = simulate_cjd_rpsi(kCjd, measure, kR, x0, T, 5000, 4, 23);

    const double mean = (kR - 0.5 * kCjd.sigma * kCjd.sigma) * T;
    const double sd = kCjd.sigma * std::sqrt(T);
    std::vector<double> xs(ps.n_paths);
    for (int p = 0; p < ps.n_paths; ++p) xs[p] = ps.terminal(p) - std::log(x0);
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double F = norm_cdf((xs[i] - mean) / sd);
        d = std::max(d, std::abs(F - double(i + 1) / xs.size()));
        d = std::max(d, std::abs(F - double(i) / xs.size()));
    }
    CHECK(d < 1.358 / std::sqrt(double(xs.size())));  // 5% critical value
}

TEST_CASE("martingale holds across 100 independent seeds") {
    const double T = 0.5, x0 = 100.0;
    auto measure = make_cjd_measure(kCjd, kR, -1.0, MeasureClass::exponential);
    int pass = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto ps = simulate_cjd_rpsi(kCjd, measure, kR, x0, T, 10000, 4, seed);
        auto spot = mc_price(ps, Payoff{Payoff::Kind::terminal_spot, 0.0}, kR);
        if (std::abs(spot.price - x0) < 3.0 * spot.std_error) ++pass;
    }
    CHECK(pass >= 99);
}

TEST_CASE("input validation and measure-tag enforcement") {
    auto ps = simulate_p(ModelSpec{kCjd}, 100.0, 0.5, 8, 4);
    CHECK_THROWS_AS((void)mc_price(ps, Payoff::call(100.0), kR), const error&);
    CHECK_THROWS_AS((void)simulate_p(ModelSpec{kCjd}, -1.0, 0.5, 8, 4), const error&);
    CHECK_THROWS_AS((void)simulate_p(ModelSpec{kCjd}, 100.0, 0.5, 0, 4), const error&);

    EsscherMeasureCjd uncertified;
    uncertified.eta = 1.0;
    uncertified.lambda_rn = 1.0;
    CHECK_THROWS_AS((void)simulate_cjd_rpsi(kCjd, uncertified, kR, 100.0, 0.5, 8, 4, 1),
                    const error&);
}

TEST_CASE("vg and kou terminal cumulants match analytic values") {
    const double T = 1.0, x0 = 100.0;
    {
        Vg m{0.05, -0.1, 0.2, 0.5};
        auto ps = simulate_p(ModelSpec{m}, x0, T, 100000, 8, 31);
        // X_T = b T + m G + delta W_G with G ~ Gamma(T/kappa, kappa):
        // mean = bT + m T, var = (delta^2 + m^2 kappa) T
        const double mean = vg_drift(m) * T + m.m * T;
        const double var = (m.delta * m.delta + m.m * m.m * m.kappa) * T;
        const double se = std::sqrt(var / ps.n_paths);
        CHECK(std::abs(terminal_mean(ps, std::log(x0)) - mean) < 3.0 * se);
        CHECK(terminal_var(ps, std::log(x0)) == doctest::Approx(var).epsilon(0.05));
    }
    {
        KouDe m{0.05, 0.2, 0.8, 0.4, 10.0, 5.0};
        auto ps = simulate_p(ModelSpec{m}, x0, T, 100000, 8, 37);
        const double q = 1.0 - m.p;
        const double nu_bar = m.p / (m.eta1 - 1.0) - q / (m.eta2 + 1.0);
        const double ej = m.p / m.eta1 - q / m.eta2;     // E[J]
        const double ej2 = 2.0 * (m.p / (m.eta1 * m.eta1) + q / (m.eta2 * m.eta2));
        const double mean = (m.mu - 0.5 * m.sigma * m.sigma - m.lambda * nu_bar +
                             m.lambda * ej) * T;
        const double var = (m.sigma * m.sigma + m.lambda * ej2) * T;
        const double se = std::sqrt(var / ps.n_paths);
        CHECK(std::abs(terminal_mean(ps, std::log(x0)) - mean) < 3.0 * se);
        CHECK(terminal_var(ps, std::log(x0)) == doctest::Approx(var).epsilon(0.05));
    }
}
