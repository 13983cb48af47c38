#pragma once

#include <utility>

#include "esscher2/math.hpp"
#include "esscher2/types.hpp"

namespace es2 {

// gamma_tilde = e^gamma - 1, the multiplicative jump size.
double gamma_tilde(double gamma);

// zeta(x) = x (exponential class) or e^x - 1 (linear class).
double zeta(MeasureClass cls, double x);

struct MartingaleResidual {
    double value = 0.0;
    double tolerance = 1e-9;
    bool overflowed = false;

    bool certified() const { return !overflowed && std::abs(value) <= tolerance; }
};

// Solved CJD second-order Esscher measure.
struct EsscherMeasureCjd {
    MeasureClass cls = MeasureClass::exponential;
    double eta = 0.0;
    double psi = 0.0;
    double lambda_rn = 0.0;  // jump intensity under R_psi
    double drift_w = 0.0;    // Brownian drift eta*sigma under R_psi
};

// mu - r + eta*sigma^2 + lambda*gamma_tilde*(e^{eta*zeta + psi*zeta^2} - 1).
// Exponents above exp_cap report overflow instead of +-inf.
MartingaleResidual cjd_residual(const Cjd& model, double r, double eta, double psi,
                                MeasureClass cls, double exp_cap = 700.0);

double solve_eta_cjd(const Cjd& model, double r, double psi, MeasureClass cls);

EsscherMeasureCjd make_cjd_measure(const Cjd& model, double r, double psi, MeasureClass cls);

// Solver-free reparameterization: eta follows explicitly from phi, then
// (eta, psi) is recovered. The returned pair has zero residual up to round-off.
std::pair<double, double> eta_psi_from_phi(const Cjd& model, double r, double phi,
                                           MeasureClass cls);

// Given a linear-class psi, returns the exponential-class psi yielding the
// identical pricing measure (same eta, same risk-neutral intensity).
double map_linear_to_exponential(const Cjd& model, double r, double psi_linear);

// E[e^{y J + psi J^2}] - 1 for J ~ N(mu_j, sigma_j^2); requires g = 1 - 2 psi
// sigma_j^2 > 0.
double nu_tilde(double y, double psi, double mu_j, double sigma_j);

// Integral of e^{z x + psi x^2} against the double-exponential density,
// psi < 0, closed form via the scaled complementary error function.
cplx kou_tilt_integral(cplx z, double psi, const KouDe& model);

// Same integral at psi = 0 (rational form); requires -eta2 < Re z < eta1.
cplx kou_tilt_integral_first_order(cplx z, const KouDe& model);

// Integral of (e^{z x} - 1) e^{theta x + psi x^2} against the VG Levy density
// (two-sided adaptive quadrature, exponents fused to avoid overflow).
cplx vg_tilt_integral(cplx z, double theta, double psi, const Vg& model);

// VG drift b = mu + ln(1 - m kappa - delta^2 kappa / 2)/kappa.
double vg_drift(const Vg& model);

// Cumulant (1/kappa per unit time): -ln(1 - z m kappa - z^2 delta^2 kappa/2)/kappa.
cplx vg_cumulant(cplx z, const Vg& model);

// General jump-diffusion / Levy martingale residual at (eta, psi) and its
// unique root. Supported: Ljd, KouDe, Vg (the CJD overloads above handle Cjd).
double jd_residual(const ModelSpec& model, double r, double eta, double psi, MeasureClass cls);
double solve_eta_jd(const ModelSpec& model, double r, double psi, MeasureClass cls);

// Residual at an already-solved pair, for certification.
MartingaleResidual residual_at(const ModelSpec& model, double r, double eta, double psi,
                               MeasureClass cls, double tolerance = 1e-9);

}  // namespace es2
