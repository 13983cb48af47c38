#pragma once

#include <string>
#include <vector>

#include "esscher2/measure.hpp"

namespace es2 {

// Black-Scholes call; tau = 0 returns intrinsic value.
double bs_call(const MarketContext& ctx, double K, double sigma);

struct TruncationPolicy {
    enum class Mode { fixed, adaptive };
    Mode mode = Mode::adaptive;
    int n_fixed = 10;          // highest summed index for fixed mode (terms 0..n)
    double mass = 1.0 - 1e-12; // Poisson coverage target, on the inflated intensity
    int margin = 10;           // extra terms past the peak, in units of sqrt(mean)
    int n_max = 1000;

    static TruncationPolicy fixed(int n) {
        TruncationPolicy p;
        p.mode = Mode::fixed;
        p.n_fixed = n;
        return p;
    }
    static TruncationPolicy adaptive(double mass = 1.0 - 1e-12, int margin = 10) {
        TruncationPolicy p;
        p.mode = Mode::adaptive;
        p.mass = mass;
        p.margin = margin;
        return p;
    }
};

struct SeriesPrice {
    double price = 0.0;
    int n_used = 0;           // highest index summed
    double error_bound = 0.0; // x * neglected mass of the dominating Poisson tail
};

// Poisson-weighted Black-Scholes series for the CJD second-order Esscher price.
SeriesPrice cjd_call_detail(const MarketContext& ctx, double K, const Cjd& model,
                            const EsscherMeasureCjd& measure, const TruncationPolicy& policy);
double cjd_call(const MarketContext& ctx, double K, const Cjd& model,
                const EsscherMeasureCjd& measure, const TruncationPolicy& policy);

struct PricePoint {
    double psi = 0.0;
    double price = 0.0;
    bool ok = false;
    std::string diagnostic;  // non-empty when ok is false
};

struct PriceInterval {
    std::vector<PricePoint> points;
    double lower_bound = 0.0;  // Black-Scholes price
    double upper_bound = 0.0;  // spot
};

// Sweeps psi over the grid, solving eta per point.  With an adaptive policy
// the successful points are verified non-decreasing and inside
// [lower_bound, upper_bound]; fixed policies deliberately reproduce the
// truncation artifact and are not checked.
PriceInterval cjd_price_interval(const MarketContext& ctx, double K, const Cjd& model, MeasureClass cls,
                                 const std::vector<double>& psi_grid,
                                 const TruncationPolicy& policy);

// Explicit LJD second-order price (exponential class).  psi > 0 requires a
// fixed policy and the explicit opt-in, since alpha_n = 1 - 2 n psi sigma_j^2
// must stay positive for every summed term.
double ljd_call_second_order(const MarketContext& ctx, double K, const Ljd& model, double theta,
                             double psi, const TruncationPolicy& policy,
                             bool allow_positive_psi = false);

double european_put_from_parity(double call_price, const MarketContext& ctx, double K);

}  // namespace es2
