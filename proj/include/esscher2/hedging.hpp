#pragma once

#include <cstdint>
#include <vector>

#include "esscher2/measure.hpp"
#include "esscher2/montecarlo.hpp"
#include "esscher2/pricing.hpp"
#include "esscher2/types.hpp"

namespace es2 {

// Which valuation rule the hedger marks and deltas against.
struct PricerSpec {
    enum class Kind {
        bs,                 // Black-Scholes on a Gbm model
        cjd_no_jump_risk,   // diffusion-only tilt: eta = (r-mu)/sigma^2, jumps unpriced
        cjd_first_order,    // psi = 0 Esscher
        cjd_second_order,   // free psi
        ljd_explicit,       // LJD closed-form series at (theta, psi)
    };
    Kind kind = Kind::bs;
    ModelSpec model = Gbm{};
    double psi = 0.0;
    MeasureClass cls = MeasureClass::exponential;
};

struct HedgeConfig {
    PricerSpec pricer;
    ModelSpec path_model = Gbm{};  // physical dynamics the world follows
    double r = 0.0;
    double x0 = 0.0;
    OptionSpec option;
    int rebalance_steps = 1;  // over the option life
    int n_paths = 0;
    std::uint64_t seed = 0;
    TruncationPolicy policy = TruncationPolicy::adaptive();
};

struct HedgeReport {
    std::vector<double> pnl;  // per path, currency at expiry
    double var_5 = 0.0;
    double es_5 = 0.0;
    HedgeConfig config;
};

struct VarEsPoint {
    double psi = 0.0;
    double var = 0.0;
    double es = 0.0;
    bool ok = false;
    std::string diagnostic;
};

// Model call price under the pricer's measure.
double pricer_value(const PricerSpec& pricer, const MarketContext& ctx, double K,
                    const TruncationPolicy& policy);

// dC/dx by central finite difference with h = 1e-4 (relative); Black-Scholes
// uses the analytic norm_cdf(d1).
double model_delta(const PricerSpec& pricer, const MarketContext& ctx, double K,
                   const TruncationPolicy& policy = TruncationPolicy::adaptive());

// Sell one call at the model price, delta-hedge on the rebalance schedule,
// finance at r, settle the payoff at expiry. pnl = terminal portfolio value
// minus payoff; deterministic given the seed.
HedgeReport hedge_simulate(const HedgeConfig& config);

// Empirical order-statistic risk measures on losses L = -pnl (positive =
// loss): VaR is the ceil((1-alpha) n)-th smallest loss, ES the mean of the
// worst floor(alpha n) losses.
std::pair<double, double> var_es(const std::vector<double>& pnl, double alpha);

// Common-random-number sweep: every psi reuses the identical physical paths
// (asserted via path_checksum); only the pricing measure varies.
std::vector<VarEsPoint> var_es_sweep(const HedgeConfig& base,
                                     const std::vector<double>& psi_grid);

}  // namespace es2
