#include "esscher2/measure.hpp"

#include <cmath>

namespace es2 {

double gamma_tilde(double gamma) { return std::expm1(gamma); }

double zeta(MeasureClass cls, double x) {
    return cls == MeasureClass::exponential ? x : std::expm1(x);
}

// ---------------------------------------------------------------------------
// CJD
// ---------------------------------------------------------------------------

MartingaleResidual cjd_residual(const Cjd& model, double r, double eta, double psi,
                                MeasureClass cls, double exp_cap) {
    MartingaleResidual res;
    const double z = zeta(cls, model.gamma);
    double expo = eta * z + psi * z * z;
    if (expo > exp_cap) {
        // clamp keeps the residual finite and monotone so the solver can
        // still walk back into range
        expo = exp_cap;
        res.overflowed = true;
    }
    res.value = model.mu - r + eta * model.sigma * model.sigma +
                model.lambda * gamma_tilde(model.gamma) * std::expm1(expo);
    return res;
}

double solve_eta_cjd(const Cjd& model, double r, double psi, MeasureClass cls) {
    require_valid(ModelSpec{model});
    auto f = [&](double eta) { return cjd_residual(model, r, eta, psi, cls).value; };
    double eta = solve_monotone_root(f);
    MartingaleResidual check = cjd_residual(model, r, eta, psi, cls);
    if (!check.certified())
        throw error(errc::solver_failure, "cjd martingale residual not certified at solution");
    return eta;
}

EsscherMeasureCjd make_cjd_measure(const Cjd& model, double r, double psi, MeasureClass cls) {
    EsscherMeasureCjd m;
    m.cls = cls;
    m.psi = psi;
    m.eta = solve_eta_cjd(model, r, psi, cls);
    const double z = zeta(cls, model.gamma);
    m.lambda_rn = model.lambda * std::exp(m.eta * z + psi * z * z);
    m.drift_w = m.eta * model.sigma;
    if (!std::isfinite(m.lambda_rn))
        throw error(errc::truncation_overflow, "risk-neutral intensity overflow");
    return m;
}

std::pair<double, double> eta_psi_from_phi(const Cjd& model, double r, double phi,
                                           MeasureClass cls) {
    require_valid(ModelSpec{model});
    const double gt = gamma_tilde(model.gamma);
    const double z = zeta(cls, model.gamma);
    // combined tilt exponent collapses to psi_tilde * zeta with psi_tilde = phi*gamma_tilde,
    // which makes eta explicit
    const double psi_tilde = phi * gt;
    const double eta =
        (r - model.mu - model.lambda * gt * std::expm1(psi_tilde * z)) /
        (model.sigma * model.sigma);
    const double psi = (psi_tilde - eta) / z;
    return {eta, psi};
}

double map_linear_to_exponential(const Cjd& model, double r, double psi_linear) {
    const double eta = solve_eta_cjd(model, r, psi_linear, MeasureClass::linear);
    const double g = model.gamma;
    const double gt = gamma_tilde(g);
    // eta*g + psi_e*g^2 == eta*gt + psi_l*gt^2 pins the same tilted intensity
    return (eta * (gt - g) + psi_linear * gt * gt) / (g * g);
}

// ---------------------------------------------------------------------------
// jump-size transforms
// ---------------------------------------------------------------------------

double nu_tilde(double y, double psi, double mu_j, double sigma_j) {
    const double g = 1.0 - 2.0 * psi * sigma_j * sigma_j;
    if (!(g > 0.0))
        throw error(errc::domain_error, "nu_tilde: psi too large, 1 - 2 psi sigma_j^2 <= 0");
    const double a = y + 2.0 * psi * mu_j;
    const double expo = y * mu_j + psi * mu_j * mu_j + sigma_j * sigma_j * a * a / (2.0 * g);
    if (expo > 700.0) throw error(errc::domain_error, "nu_tilde: exponent overflow");
    return std::expm1(expo - 0.5 * std::log(g));
}

cplx kou_tilt_integral(cplx z, double psi, const KouDe& model) {
    if (!(psi < 0.0)) throw error(errc::domain_error, "kou_tilt_integral requires psi < 0");
    const double ap = std::sqrt(-psi);
    const double half_sqrt_pi = 0.5 * std::sqrt(M_PI / -psi);
    const double q = 1.0 - model.p;
    // int_0^inf e^{(z-eta1)x + psi x^2} dx and the mirrored negative half-line,
    // both via the scaled complementary error function
    cplx theta_up = ap * (z - model.eta1) / (2.0 * psi);
    cplx theta_dn = ap * (z + model.eta2) / (2.0 * psi);
    return model.p * model.eta1 * half_sqrt_pi * cerfcx(theta_up) +
           q * model.eta2 * half_sqrt_pi * cerfcx(-theta_dn);
}

cplx kou_tilt_integral_first_order(cplx z, const KouDe& model) {
    if (!(z.real() > -model.eta2 && z.real() < model.eta1))
        throw error(errc::domain_error,
                    "kou first-order transform needs Re z in (-eta2, eta1)");
    const double q = 1.0 - model.p;
    return model.p * model.eta1 / (model.eta1 - z) + q * model.eta2 / (model.eta2 + z);
}

// ---------------------------------------------------------------------------
// Variance Gamma
// ---------------------------------------------------------------------------

double vg_drift(const Vg& model) {
    const double s = 1.0 - model.m * model.kappa - 0.5 * model.delta * model.delta * model.kappa;
    if (!(s > 0.0)) throw error(errc::domain_error, "vg drift: log argument <= 0");
    return model.mu + std::log(s) / model.kappa;
}

cplx vg_cumulant(cplx z, const Vg& model) {
    cplx s = 1.0 - z * model.m * model.kappa -
             z * z * 0.5 * model.delta * model.delta * model.kappa;
    if (s.imag() == 0.0 && !(s.real() > 0.0))
        throw error(errc::domain_error, "vg cumulant outside admissible strip");
    return -std::log(s) / model.kappa;
}

namespace {

// exp(w) - 1 without cancellation for small |w|
cplx cexpm1(cplx w) {
    if (std::abs(w) < 1e-4)
        return w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0))));
    return std::exp(w) - 1.0;
}

}  // namespace

cplx vg_tilt_integral(cplx z, double theta, double psi, const Vg& model) {
    const double d2 = model.delta * model.delta;
    const double A = std::sqrt(model.m * model.m / d2 + 2.0 / model.kappa) / model.delta;
    const double slope = model.m / d2;
    const double inv_kappa = 1.0 / model.kappa;
    auto f = [&](double x) -> cplx {
        const double ax = std::abs(x);
        // all exponents fused before exponentiation: the Levy density decays
        // like e^{-A|x|} and separate factors overflow long before the product
        const double base = theta * x + psi * x * x + slope * x - A * ax;
        cplx w = z * x;
        if (w.real() + base > 700.0)
            throw error(errc::truncation_overflow, "vg tilt integrand overflow");
        if (base < -745.0 && w.real() + base < -745.0) return {0.0, 0.0};
        return std::exp(base) * cexpm1(w) * (inv_kappa / ax);
    };
    return integrate_line_c(f);
}

// ---------------------------------------------------------------------------
// general residual and solver
// ---------------------------------------------------------------------------

namespace {

// E[ (e^J - 1) (e^{eta zeta(J) + psi zeta(J)^2} - 1) ] against a jump-size
// density, by quadrature (used for the linear measure class, where no closed
// form exists)
double tilt_expectation_quad(const std::function<double(double)>& density, double eta,
                             double psi, MeasureClass cls) {
    auto f = [&](double x) {
        const double d = density(x);
        if (d <= 0.0) return 0.0;  // tail underflow; avoids inf * 0 below
        const double zt = zeta(cls, x);
        // clamping (rather than throwing) keeps a divergent trial eta large
        // but finite and sign-correct, so the root solver can retreat; any
        // admissible solution has max_x exponent = -eta^2/(4 psi) << cap
        const double expo = std::min(eta * zt + psi * zt * zt, 50.0);
        return std::expm1(x) * std::expm1(expo) * d;
    };
    return integrate_line(f);
}

double ljd_jump_term(const Ljd& m, double eta, double psi, MeasureClass cls) {
    if (cls == MeasureClass::exponential) {
        // E[(e^J-1)(e^{eta J + psi J^2}-1)]
        //   = nu~(eta+1,psi) - nu~(eta,psi) - nu~(1,0)
        return nu_tilde(eta + 1.0, psi, m.mu_j, m.sigma_j) -
               nu_tilde(eta, psi, m.mu_j, m.sigma_j) - nu_tilde(1.0, 0.0, m.mu_j, m.sigma_j);
    }
    auto density = [&](double x) {
        const double u = (x - m.mu_j) / m.sigma_j;
        return norm_pdf(u) / m.sigma_j;
    };
    return tilt_expectation_quad(density, eta, psi, cls);
}

double kou_jump_term(const KouDe& m, double eta, double psi, MeasureClass cls) {
    const double q = 1.0 - m.p;
    if (cls == MeasureClass::exponential) {
        const double nu_bar = m.p / (m.eta1 - 1.0) - q / (m.eta2 + 1.0);
        if (psi == 0.0) {
            return kou_tilt_integral_first_order(eta + 1.0, m).real() -
                   kou_tilt_integral_first_order(eta, m).real() - nu_bar;
        }
        return kou_tilt_integral(eta + 1.0, psi, m).real() -
               kou_tilt_integral(eta, psi, m).real() - nu_bar;
    }
    auto density = [&](double x) {
        return x >= 0.0 ? m.p * m.eta1 * std::exp(-m.eta1 * x)
                        : q * m.eta2 * std::exp(m.eta2 * x);
    };
    return tilt_expectation_quad(density, eta, psi, cls);
}

double vg_jump_term(const Vg& m, double eta, double psi, MeasureClass cls) {
    if (cls == MeasureClass::exponential) {
        if (psi == 0.0)
            return (vg_cumulant(eta + 1.0, m) - vg_cumulant(eta, m)).real();
        return vg_tilt_integral(1.0, eta, psi, m).real();
    }
    // linear class against the Levy density; the (e^x - 1) factor keeps the
    // origin integrable
    const double d2 = m.delta * m.delta;
    const double A = std::sqrt(m.m * m.m / d2 + 2.0 / m.kappa) / m.delta;
    const double slope = m.m / d2;
    auto f = [&](double x) {
        const double w = slope * x - A * std::abs(x);
        if (w < -745.0) return 0.0;  // Levy density tail underflow
        const double zt = std::expm1(x);
        const double expo = std::min(eta * zt + psi * zt * zt, 50.0);
        return std::expm1(x) * std::expm1(expo) * std::exp(w) / (m.kappa * std::abs(x));
    };
    return integrate_line(f);
}

// bisection on an open interval where the residual diverges to -inf/+inf at
// the endpoints (Kou and VG first order have poles bounding the strip)
double solve_in_interval(const std::function<double(double)>& f, double lo, double hi) {
    const double span = hi - lo;
    double a = lo + 1e-9 * span, b = hi - 1e-9 * span;
    double fa = f(a), fb = f(b);
    int guard = 0;
    while (fa > 0.0 && guard++ < 60) {
        a = lo + (a - lo) * 0.25;
        fa = f(a);
    }
    guard = 0;
    while (fb < 0.0 && guard++ < 60) {
        b = hi - (hi - b) * 0.25;
        fb = f(b);
    }
    if (!(fa <= 0.0 && fb >= 0.0))
        throw error(errc::solver_failure, "no sign change inside admissible strip");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (a + b);
        double fm = f(mid);
        if (std::abs(fm) <= 1e-12) return mid;
        if (fm < 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace

double jd_residual(const ModelSpec& model, double r, double eta, double psi,
                   MeasureClass cls) {
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gbm>) {
                return m.mu - r + eta * m.sigma * m.sigma;
            } else if constexpr (std::is_same_v<M, Cjd>) {
                return cjd_residual(m, r, eta, psi, cls).value;
            } else if constexpr (std::is_same_v<M, Ljd>) {
                return m.mu - r + eta * m.sigma * m.sigma +
                       m.lambda * ljd_jump_term(m, eta, psi, cls);
            } else if constexpr (std::is_same_v<M, KouDe>) {
                return m.mu - r + eta * m.sigma * m.sigma +
                       m.lambda * kou_jump_term(m, eta, psi, cls);
            } else {
                // VG carries no diffusion component; the drift is implied by
                // the time-changed representation
                return vg_drift(m) - r + vg_jump_term(m, eta, psi, cls);
            }
        },
        model);
}

double solve_eta_jd(const ModelSpec& model, double r, double psi, MeasureClass cls) {
    require_valid(model);
    if (const auto* c = std::get_if<Cjd>(&model)) return solve_eta_cjd(*c, r, psi, cls);

    auto f = [&](double eta) { return jd_residual(model, r, eta, psi, cls); };

    // first-order transforms live on a bounded strip; bisect inside it
    if (psi == 0.0 && cls == MeasureClass::exponential) {
        if (const auto* k = std::get_if<KouDe>(&model))
            return solve_in_interval(f, -k->eta2, k->eta1 - 1.0);
        if (const auto* v = std::get_if<Vg>(&model)) {
            // admissible z for the cumulant: roots of 1 - z m k - z^2 d^2 k / 2
            const double hk = 0.5 * v->delta * v->delta * v->kappa;
            const double mk = v->m * v->kappa;
            const double disc = std::sqrt(mk * mk + 4.0 * hk);
            const double z_lo = (-mk - disc) / (2.0 * hk);
            const double z_hi = (-mk + disc) / (2.0 * hk);
            return solve_in_interval(f, z_lo, z_hi - 1.0);
        }
    }

    double eta = solve_monotone_root(f);
    if (!(std::abs(f(eta)) <= 1e-9))
        throw error(errc::solver_failure, "martingale residual not certified at solution");
    return eta;
}

MartingaleResidual residual_at(const ModelSpec& model, double r, double eta, double psi,
                               MeasureClass cls, double tolerance) {
    MartingaleResidual res;
    res.tolerance = tolerance;
    if (const auto* c = std::get_if<Cjd>(&model)) {
        res = cjd_residual(*c, r, eta, psi, cls);
        res.tolerance = tolerance;
        return res;
    }
    res.value = jd_residual(model, r, eta, psi, cls);
    res.overflowed = !std::isfinite(res.value);
    return res;
}

}  // namespace es2
