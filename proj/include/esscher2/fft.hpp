#pragma once

#include <vector>

#include "esscher2/charfn.hpp"

namespace es2 {

// Carr-Madan grid.  N*du*dk = 2*pi by construction; the log-strike grid is
// centered on ln(spot).
struct FftGrid {
    int N = 4096;        // power of two
    double du = 0.25;    // omega spacing
    double alpha = 1.5;  // damping; calls need alpha > 0, puts alpha > 1

    double dk() const;
};

struct PriceCurve {
    std::vector<double> log_strike;  // ascending, uniform
    std::vector<double> price;
    double spot = 0.0;
    double r = 0.0;
    double T = 0.0;
};

PriceCurve fft_call_curve(const CharFn& cf, double spot, double r, const FftGrid& grid = {});
// The put default balances two opposing errors: coarser du leaks aliased
// payoff tails into deep strikes, while the e^{alpha k} recovery amplifies
// both aliasing and round-off at the grid edges.  (4096, 0.18, 2.2) keeps
// put-call parity under 5e-4 across the central half-grid for every built-in
// model, including the fat-tailed Kou and VG first-order measures.
PriceCurve fft_put_curve(const CharFn& cf, double spot, double r,
                         const FftGrid& grid = {4096, 0.18, 2.2});

// Cubic (4-point Lagrange) interpolation in log-strike; refuses strikes
// outside the interior of the grid.
double price_at_strike(const PriceCurve& curve, double K);

// Convenience: one call/put price at strike K.
double fft_call(const CharFn& cf, double spot, double r, double K, const FftGrid& grid = {});
double fft_put(const CharFn& cf, double spot, double r, double K,
               const FftGrid& grid = {4096, 0.18, 2.2});

}  // namespace es2
