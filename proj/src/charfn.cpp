#include "esscher2/charfn.hpp"

#include <cmath>
#include <sstream>

namespace es2 {

cplx CharFn::operator()(cplx omega) const {
    if (!(omega.imag() > im_lo && omega.imag() < im_hi)) {
        std::ostringstream os;
        os << label << ": Im(omega)=" << omega.imag() << " outside validity strip ("
           << im_lo << ", " << im_hi << ")";
        throw error(errc::domain_error, os.str());
    }
    return eval(omega);
}

namespace {

const cplx kI(0.0, 1.0);

// exp(w) - 1 without cancellation for small |w|
cplx cexpm1(cplx w) {
    if (std::abs(w) < 1e-4)
        return w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0))));
    return std::exp(w) - 1.0;
}

}  // namespace

CharFn charfn_gbm_rn(double sigma, double r, double T) {
    CharFn cf;
    cf.T = T;
    cf.label = "gbm/risk-neutral";
    cf.eval = [sigma, r, T](cplx w) {
        const double s2 = sigma * sigma;
        return std::exp(T * (kI * w * (r - 0.5 * s2) - 0.5 * s2 * w * w));
    };
    return cf;
}

CharFn charfn_cjd_2nd(const Cjd& model, double eta, double psi, MeasureClass cls, double T) {
    require_valid(ModelSpec{model});
    const double s2 = model.sigma * model.sigma;
    const double gt = gamma_tilde(model.gamma);
    const double z = zeta(cls, model.gamma);
    const double lam_rn = model.lambda * std::exp(eta * z + psi * z * z);
    if (!std::isfinite(lam_rn))
        throw error(errc::truncation_overflow, "cjd charfn: tilted intensity overflow");
    const double drift = model.mu - 0.5 * s2 - model.lambda * gt + eta * s2;
    const double gamma = model.gamma;
    CharFn cf;
    cf.T = T;
    cf.label = "cjd/esscher2";
    cf.eval = [=](cplx w) {
        // lambda*(H(eta+iw)-H(eta)) collapses to Lambda*(e^{iw gamma}-1)
        return std::exp(T * (kI * w * drift - 0.5 * s2 * w * w +
                             lam_rn * cexpm1(kI * w * gamma)));
    };
    return cf;
}

namespace {

// E[e^{zJ + psi J^2}] for J ~ N(mu_j, sigma_j^2), analytically continued in z.
cplx ljd_tilt_mgf(cplx z, double psi, double mu_j, double sigma_j) {
    const double g = 1.0 - 2.0 * psi * sigma_j * sigma_j;
    if (!(g > 0.0)) throw error(errc::domain_error, "ljd charfn: g(psi) <= 0");
    cplx a = z + 2.0 * psi * mu_j;
    return std::exp(z * mu_j + psi * mu_j * mu_j + sigma_j * sigma_j * a * a / (2.0 * g) -
                    0.5 * std::log(g));
}

}  // namespace

CharFn charfn_ljd_2nd(const Ljd& model, double eta, double psi, double T) {
    require_valid(ModelSpec{model});
    const double s2 = model.sigma * model.sigma;
    const double nu_bar = std::expm1(model.mu_j + 0.5 * model.sigma_j * model.sigma_j);
    const double drift = model.mu - 0.5 * s2 - model.lambda * nu_bar + eta * s2;
    const cplx h_eta = ljd_tilt_mgf(eta, psi, model.mu_j, model.sigma_j);
    CharFn cf;
    cf.T = T;
    cf.label = "ljd/esscher2";
    cf.eval = [=, lam = model.lambda, mj = model.mu_j, sj = model.sigma_j](cplx w) {
        cplx jump = lam * (ljd_tilt_mgf(eta + kI * w, psi, mj, sj) - h_eta);
        return std::exp(T * (kI * w * drift - 0.5 * s2 * w * w + jump));
    };
    return cf;
}

CharFn charfn_merton_qbs(const Ljd& model, double r, double T) {
    require_valid(ModelSpec{model});
    const double s2 = model.sigma * model.sigma;
    const double nu_bar = std::expm1(model.mu_j + 0.5 * model.sigma_j * model.sigma_j);
    const double drift = r - 0.5 * s2 - model.lambda * nu_bar;
    CharFn cf;
    cf.T = T;
    cf.label = "ljd/merton-qbs";
    cf.eval = [=, lam = model.lambda, mj = model.mu_j, sj = model.sigma_j](cplx w) {
        cplx z = kI * w;
        cplx jump = lam * cexpm1(z * mj + 0.5 * sj * sj * z * z);
        return std::exp(T * (z * drift - 0.5 * s2 * w * w + jump));
    };
    return cf;
}

namespace {

double kou_nu_bar(const KouDe& m) {
    return m.p / (m.eta1 - 1.0) - (1.0 - m.p) / (m.eta2 + 1.0);
}

}  // namespace

CharFn charfn_kou_2nd(const KouDe& model, double eta, double psi, double T) {
    require_valid(ModelSpec{model});
    if (!(psi < 0.0))
        throw error(errc::domain_error, "kou second-order charfn requires psi < 0");
    const double s2 = model.sigma * model.sigma;
    const double drift = model.mu - 0.5 * s2 - model.lambda * kou_nu_bar(model) + eta * s2;
    const cplx h_eta = kou_tilt_integral(eta, psi, model);
    CharFn cf;
    cf.T = T;
    // conservative strip: keeps both erfcx arguments in the reflection-free
    // half plane even as psi -> 0-
    cf.im_lo = eta - model.eta1;
    cf.im_hi = eta + model.eta2;
    cf.label = "kou/esscher2";
    cf.eval = [=, m = model](cplx w) {
        cplx jump = m.lambda * (kou_tilt_integral(eta + kI * w, psi, m) - h_eta);
        return std::exp(T * (kI * w * drift - 0.5 * s2 * w * w + jump));
    };
    return cf;
}

CharFn charfn_kou_1st(const KouDe& model, double eta, double T) {
    require_valid(ModelSpec{model});
    if (!(eta > -model.eta2 && eta < model.eta1 - 1.0))
        throw error(errc::domain_error, "kou first-order charfn: eta outside (-eta2, eta1-1)");
    const double s2 = model.sigma * model.sigma;
    const double drift = model.mu - 0.5 * s2 - model.lambda * kou_nu_bar(model) + eta * s2;
    const cplx h_eta = kou_tilt_integral_first_order(eta, model);
    CharFn cf;
    cf.T = T;
    cf.im_lo = eta - model.eta1;
    cf.im_hi = eta + model.eta2;
    cf.label = "kou/esscher1";
    cf.eval = [=, m = model](cplx w) {
        cplx jump = m.lambda * (kou_tilt_integral_first_order(eta + kI * w, m) - h_eta);
        return std::exp(T * (kI * w * drift - 0.5 * s2 * w * w + jump));
    };
    return cf;
}

CharFn charfn_kou_qbs(const KouDe& model, double r, double T) {
    require_valid(ModelSpec{model});
    const double s2 = model.sigma * model.sigma;
    const double drift = r - 0.5 * s2 - model.lambda * kou_nu_bar(model);
    CharFn cf;
    cf.T = T;
    cf.im_lo = -model.eta1;
    cf.im_hi = model.eta2;
    cf.label = "kou/qbs";
    cf.eval = [=, m = model](cplx w) {
        cplx jump = m.lambda * (kou_tilt_integral_first_order(kI * w, m) - 1.0);
        return std::exp(T * (kI * w * drift - 0.5 * s2 * w * w + jump));
    };
    return cf;
}

CharFn charfn_vg_2nd(const Vg& model, double theta, double psi, double T) {
    require_valid(ModelSpec{model});
    if (!(psi <= 0.0))
        throw error(errc::domain_error, "vg second-order charfn requires psi <= 0");
    const double b = vg_drift(model);
    CharFn cf;
    cf.T = T;
    if (psi == 0.0) {
        // convergence of the tilt integral then limits Re(theta + z)
        const double hk = 0.5 * model.delta * model.delta * model.kappa;
        const double mk = model.m * model.kappa;
        const double disc = std::sqrt(mk * mk + 4.0 * hk);
        cf.im_lo = theta - (-mk + disc) / (2.0 * hk);
        cf.im_hi = theta - (-mk - disc) / (2.0 * hk);
    }
    cf.label = "vg/esscher2";
    cf.eval = [=, m = model](cplx w) {
        cplx jump = vg_tilt_integral(kI * w, theta, psi, m);
        return std::exp(T * (kI * w * b + jump));
    };
    return cf;
}

CharFn charfn_vg_1st(const Vg& model, double eta, double T) {
    require_valid(ModelSpec{model});
    const double b = vg_drift(model);
    const double hk = 0.5 * model.delta * model.delta * model.kappa;
    const double mk = model.m * model.kappa;
    const double disc = std::sqrt(mk * mk + 4.0 * hk);
    CharFn cf;
    cf.T = T;
    cf.im_lo = eta - (-mk + disc) / (2.0 * hk);
    cf.im_hi = eta - (-mk - disc) / (2.0 * hk);
    cf.label = "vg/esscher1";
    const cplx cum_eta = vg_cumulant(eta, model);
    cf.eval = [=, m = model](cplx w) {
        cplx jump = vg_cumulant(eta + kI * w, m) - cum_eta;
        return std::exp(T * (kI * w * b + jump));
    };
    return cf;
}

namespace {

// lambda * int (e^{iwx} - 1) e^{eta zeta(x) + psi zeta(x)^2} F(dx) for a
// finite-activity jump density F
cplx tilted_jump_transform(const std::function<double(double)>& density, double lambda,
                           cplx w, double eta, double psi, MeasureClass cls) {
    auto f = [&](double x) -> cplx {
        const double d = density(x);
        if (d <= 0.0) return {0.0, 0.0};
        const double zt = zeta(cls, x);
        const double expo = eta * zt + psi * zt * zt;
        cplx a = kI * w * x;
        if (a.real() + expo > 700.0)
            throw error(errc::truncation_overflow, "charfn quadrature integrand overflow");
        if (expo < -745.0 && a.real() + expo < -745.0) return {0.0, 0.0};
        return std::exp(cplx(expo, 0.0)) * cexpm1(a) * d;
    };
    return lambda * integrate_line_c(f);
}

}  // namespace

CharFn charfn_jd_general(const ModelSpec& model, double eta, double psi, MeasureClass cls,
                         double T) {
    require_valid(model);
    return std::visit(
        [&](const auto& m) -> CharFn {
            using M = std::decay_t<decltype(m)>;
            CharFn cf;
            cf.T = T;
            if constexpr (std::is_same_v<M, Gbm>) {
                const double s2 = m.sigma * m.sigma;
                const double drift = m.mu - 0.5 * s2 + eta * s2;
                cf.label = "gbm/general";
                cf.eval = [=](cplx w) {
                    return std::exp(T * (kI * w * drift - 0.5 * s2 * w * w));
                };
            } else if constexpr (std::is_same_v<M, Cjd>) {
                return charfn_cjd_2nd(m, eta, psi, cls, T);
            } else if constexpr (std::is_same_v<M, Ljd>) {
                const double s2 = m.sigma * m.sigma;
                const double nu_bar = std::expm1(m.mu_j + 0.5 * m.sigma_j * m.sigma_j);
                const double drift = m.mu - 0.5 * s2 - m.lambda * nu_bar + eta * s2;
                cf.label = "ljd/general";
                cf.eval = [=](cplx w) {
                    auto density = [&](double x) {
                        const double u = (x - m.mu_j) / m.sigma_j;
                        return norm_pdf(u) / m.sigma_j;
                    };
                    cplx jump = tilted_jump_transform(density, m.lambda, w, eta, psi, cls);
                    return std::exp(T * (kI * w * drift - 0.5 * s2 * w * w + jump));
                };
            } else if constexpr (std::is_same_v<M, KouDe>) {
                const double s2 = m.sigma * m.sigma;
                const double drift = m.mu - 0.5 * s2 - m.lambda * kou_nu_bar(m) + eta * s2;
                cf.label = "kou/general";
                cf.eval = [=](cplx w) {
                    auto density = [&](double x) {
                        return x >= 0.0 ? m.p * m.eta1 * std::exp(-m.eta1 * x)
                                        : (1.0 - m.p) * m.eta2 * std::exp(m.eta2 * x);
                    };
                    cplx jump = tilted_jump_transform(density, m.lambda, w, eta, psi, cls);
                    return std::exp(T * (kI * w * drift - 0.5 * s2 * w * w + jump));
                };
            } else {
                const double b = vg_drift(m);
                const double d2 = m.delta * m.delta;
                const double A = std::sqrt(m.m * m.m / d2 + 2.0 / m.kappa) / m.delta;
                const double slope = m.m / d2;
                cf.label = "vg/general";
                cf.eval = [=](cplx w) {
                    auto f = [&](double x) -> cplx {
                        const double lw = slope * x - A * std::abs(x);
                        if (lw < -745.0) return {0.0, 0.0};
                        const double zt = zeta(cls, x);
                        const double expo = eta * zt + psi * zt * zt + lw;
                        cplx a = kI * w * x;
                        if (a.real() + expo > 700.0)
                            throw error(errc::truncation_overflow,
                                        "vg charfn integrand overflow");
                        return std::exp(cplx(expo, 0.0)) * cexpm1(a) /
                               (m.kappa * std::abs(x));
                    };
                    cplx jump = integrate_line_c(f);
                    return std::exp(T * (kI * w * b + jump));
                };
            }
            return cf;
        },
        model);
}

}  // namespace es2
