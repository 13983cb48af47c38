#pragma once

#include <functional>
#include <string>

#include "esscher2/measure.hpp"

namespace es2 {

// Characteristic function of the log-price driver X_T (spot-normalized:
// S_T = x e^{X_T}) under a pricing or reference measure.  Evaluable at
// complex omega inside the validity strip im_lo < Im(omega) < im_hi.
struct CharFn {
    std::function<cplx(cplx)> eval;
    double T = 0.0;
    double im_lo = -HUGE_VAL;
    double im_hi = HUGE_VAL;
    std::string label;

    cplx operator()(cplx omega) const;
};

// Black-Scholes risk-neutral driver (also the lambda -> 0 limit of every
// jump model here).
CharFn charfn_gbm_rn(double sigma, double r, double T);

// CJD under the second-order Esscher measure R_psi (either class).
CharFn charfn_cjd_2nd(const Cjd& model, double eta, double psi, MeasureClass cls, double T);

// LJD under the exponential-class second-order measure; closed form, entire.
CharFn charfn_ljd_2nd(const Ljd& model, double eta, double psi, double T);

// Merton risk-neutral reference measure: jump risk not priced.
CharFn charfn_merton_qbs(const Ljd& model, double r, double T);

// Kou under the exponential-class measure, psi < 0 (erfcx closed form).
CharFn charfn_kou_2nd(const KouDe& model, double eta, double psi, double T);

// Kou first-order (psi = 0); rational form on the strip Re z in (-eta2, eta1).
CharFn charfn_kou_1st(const KouDe& model, double eta, double T);

// Kou risk-neutral reference measure (jump risk not priced).
CharFn charfn_kou_qbs(const KouDe& model, double r, double T);

// VG under the exponential-class measure, psi <= 0 (two-sided quadrature).
CharFn charfn_vg_2nd(const Vg& model, double theta, double psi, double T);

// VG first order: closed log-ratio of cumulant denominators.
CharFn charfn_vg_1st(const Vg& model, double eta, double T);

// General tilted jump-diffusion form by quadrature over the jump density /
// Levy measure; supports both measure classes and every family.  Closed
// forms above must agree with this on their common domain.
CharFn charfn_jd_general(const ModelSpec& model, double eta, double psi, MeasureClass cls,
                         double T);

}  // namespace es2
