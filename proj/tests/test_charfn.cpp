#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "esscher2/charfn.hpp"

using namespace es2;

namespace {
const Cjd kCjd{0.05, 0.2, 1.0, 0.1};
const Ljd kLjd{0.05, 0.2, 0.5, -0.05, 0.1};
const KouDe kKou{0.05, 0.2, 0.8, 0.4, 10.0, 5.0};
const Vg kVg{0.05, -0.1, 0.25, 0.3};
const double kRate = 0.03;
const double kT = 0.5;

void check_martingale(const CharFn& cf, double r, double tol = 1e-7) {
    cplx at0 = cf({0.0, 0.0});
    CHECK(std::abs(at0 - 1.0) < 1e-12);
    cplx at_mi = cf({0.0, -1.0});
    CHECK(std::abs(at_mi - std::exp(r * cf.T)) < tol);
}

void check_hermitian(const CharFn& cf) {
    for (double u : {0.3, 1.0, 4.0, 17.5}) {
        cplx plus = cf({u, 0.0}), minus = cf({-u, 0.0});
        CHECK(std::abs(minus - std::conj(plus)) < 1e-12);
        CHECK(std::abs(plus) <= 1.0 + 1e-12);
    }
}

}  // namespace

TEST_CASE("gbm risk-neutral charfn") {
    auto cf = charfn_gbm_rn(0.2, kRate, kT);
    check_martingale(cf, kRate, 1e-13);
    check_hermitian(cf);
}

TEST_CASE("cjd charfn: martingale identity across psi and classes") {
    for (MeasureClass cls : {MeasureClass::exponential, MeasureClass::linear}) {
        for (double psi : {-400.0, -10.0, 0.0, 10.0, 150.0}) {
            double eta = solve_eta_cjd(kCjd, kRate, psi, cls);
            auto cf = charfn_cjd_2nd(kCjd, eta, psi, cls, kT);
            check_martingale(cf, kRate);
            check_hermitian(cf);
        }
    }
}

TEST_CASE("cjd closed form equals general quadrature form") {
    double psi = -10.0;
    double eta = solve_eta_cjd(kCjd, kRate, psi, MeasureClass::exponential);
    auto closed = charfn_cjd_2nd(kCjd, eta, psi, MeasureClass::exponential, kT);
    auto general = charfn_jd_general(ModelSpec{kCjd}, eta, psi, MeasureClass::exponential, kT);
    for (cplx w : {cplx(1.0, 0.0), cplx(5.0, 0.0), cplx(0.0, -1.0)}) {
        CHECK(std::abs(closed(w) - general(w)) < 1e-10);
    }
}

TEST_CASE("ljd charfn: closed form vs quadrature, martingale") {
    for (double psi : {0.0, -0.5, -1.0}) {
        double eta = solve_eta_jd(ModelSpec{kLjd}, kRate, psi, MeasureClass::exponential);
        auto closed = charfn_ljd_2nd(kLjd, eta, psi, kT);
        check_martingale(closed, kRate);
        check_hermitian(closed);
        auto general =
            charfn_jd_general(ModelSpec{kLjd}, eta, psi, MeasureClass::exponential, kT);
        for (cplx w : {cplx(1.0, 0.0), cplx(5.0, 0.0), cplx(0.0, -1.0)}) {
            CHECK(std::abs(closed(w) - general(w)) < 1e-8 * std::abs(closed(w)));
        }
    }
}

TEST_CASE("ljd psi=0 reduces to the first-order form") {
    double eta = solve_eta_jd(ModelSpec{kLjd}, kRate, 0.0, MeasureClass::exponential);
    auto cf = charfn_ljd_2nd(kLjd, eta, 0.0, kT);
    // first-order closed form assembled directly
    const double s2 = kLjd.sigma * kLjd.sigma;
    const double nu = std::expm1(kLjd.mu_j + 0.5 * kLjd.sigma_j * kLjd.sigma_j);
    const double drift = kLjd.mu - 0.5 * s2 - kLjd.lambda * nu + eta * s2;
    for (double u : {0.5, 2.0}) {
        cplx z = cplx(0.0, 1.0) * u;
        auto mgf = [&](cplx y) {
            return std::exp(y * kLjd.mu_j + 0.5 * kLjd.sigma_j * kLjd.sigma_j * y * y);
        };
        cplx ref = std::exp(kT * (z * drift - 0.5 * s2 * u * u +
                                  kLjd.lambda * (mgf(eta + z) - mgf(cplx(eta, 0.0)))));
        CHECK(std::abs(cf({u, 0.0}) - ref) < 1e-12);
    }
}

TEST_CASE("merton and kou reference measures are risk-neutral") {
    check_martingale(charfn_merton_qbs(kLjd, kRate, kT), kRate, 1e-12);
    check_martingale(charfn_kou_qbs(kKou, kRate, kT), kRate, 1e-12);
    // lambda -> 0 collapses to Black-Scholes
    Ljd noj = kLjd;
    noj.lambda = 1e-14;
    auto cf = charfn_merton_qbs(noj, kRate, kT);
    auto bs = charfn_gbm_rn(kLjd.sigma, kRate, kT);
    CHECK(std::abs(cf({2.0, 0.0}) - bs({2.0, 0.0})) < 1e-10);
}

TEST_CASE("kou charfn: second order, first order, continuity") {
    double psi = -0.5;
    double eta2 = solve_eta_jd(ModelSpec{kKou}, kRate, psi, MeasureClass::exponential);
    auto cf2 = charfn_kou_2nd(kKou, eta2, psi, kT);
    check_martingale(cf2, kRate);
    check_hermitian(cf2);

    double eta1 = solve_eta_jd(ModelSpec{kKou}, kRate, 0.0, MeasureClass::exponential);
    auto cf1 = charfn_kou_1st(kKou, eta1, kT);
    check_martingale(cf1, kRate);
    check_hermitian(cf1);

    auto general = charfn_jd_general(ModelSpec{kKou}, eta1, 0.0, MeasureClass::exponential, kT);
    for (cplx w : {cplx(1.0, 0.0), cplx(5.0, 0.0)}) {
        CHECK(std::abs(cf1(w) - general(w)) < 1e-9);
    }

    // psi -> 0- approaches the first-order charfn; erfcx keeps |psi| tiny safe
    double eta_s = solve_eta_jd(ModelSpec{kKou}, kRate, -1e-4, MeasureClass::exponential);
    auto cf_s = charfn_kou_2nd(kKou, eta_s, -1e-4, kT);
    cplx a = cf_s({1.0, 0.0}), b = cf1({1.0, 0.0});
    CHECK(std::abs(a - b) < 1e-3 * std::abs(b));

    double eta_t = solve_eta_jd(ModelSpec{kKou}, kRate, -1e-8, MeasureClass::exponential);
    auto cf_t = charfn_kou_2nd(kKou, eta_t, -1e-8, kT);
    CHECK(std::isfinite(std::abs(cf_t({1.0, 0.0}))));  // no overflow at extreme psi

    CHECK_THROWS_AS((void)charfn_kou_2nd(kKou, eta2, 0.5, kT), const error&);
    CHECK_THROWS_AS((void)cf1({0.0, eta1 + kKou.eta2 + 0.1}), const error&);
}

TEST_CASE("vg charfn: both orders, martingale, quadrature agreement") {
    double th1 = solve_eta_jd(ModelSpec{kVg}, kRate, 0.0, MeasureClass::exponential);
    auto cf1 = charfn_vg_1st(kVg, th1, 1.0);
    check_martingale(cf1, kRate);
    check_hermitian(cf1);

    auto general = charfn_jd_general(ModelSpec{kVg}, th1, 0.0, MeasureClass::exponential, 1.0);
    CHECK(std::abs(cf1({2.0, 0.0}) - general({2.0, 0.0})) < 1e-7);

    double th2 = solve_eta_jd(ModelSpec{kVg}, kRate, -0.1, MeasureClass::exponential);
    auto cf2 = charfn_vg_2nd(kVg, th2, -0.1, 1.0);
    check_martingale(cf2, kRate, 1e-6);
    check_hermitian(cf2);

    // psi = 0 second-order path matches the closed first-order form
    auto cf2_at0 = charfn_vg_2nd(kVg, th1, 0.0, 1.0);
    CHECK(std::abs(cf2_at0({2.0, 0.0}) - cf1({2.0, 0.0})) < 1e-8);
}

TEST_CASE("linear-class general charfn keeps the martingale identity") {
    for (double psi : {-0.5, 0.0}) {
        double eta = solve_eta_jd(ModelSpec{kLjd}, kRate, psi, MeasureClass::linear);
        auto cf = charfn_jd_general(ModelSpec{kLjd}, eta, psi, MeasureClass::linear, kT);
        check_martingale(cf, kRate, 1e-6);
    }
}
