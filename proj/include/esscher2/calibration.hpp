#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esscher2/pricing.hpp"
#include "esscher2/types.hpp"

namespace es2 {

struct Quote {
    double strike = 0.0;
    double mid = 0.0;
    double open_interest = 0.0;
};

struct QuoteSet {
    double spot = 0.0;
    double r = 0.0;
    double expiry = 0.0;  // tau, years from trade date
    std::string trade_date;
    std::vector<Quote> rows;  // strikes strictly increasing, mids > 0
};

void require_valid(const QuoteSet& quotes);

// The unique sigma with bs_call(ctx, K, sigma) = price, safeguarded Newton
// (vega step inside a bisection bracket), tolerance 1e-10 in price. The
// price must lie inside the open no-arbitrage band
// (max(x - K e^{-r tau}, 0), x).
double implied_vol(double price, const MarketContext& ctx, double K);

enum class CalibFamily { cjd_first, cjd_second, ljd_merton };

struct CalibConfig {
    int multi_starts = 6;
    int max_iter = 4000;
    double simplex_tol = 1e-10;
    std::uint64_t seed = 0;
    TruncationPolicy policy = TruncationPolicy::adaptive();
};

struct CalibResult {
    ModelSpec model = Gbm{};
    double psi = 0.0;  // meaningful for cjd_second only
    double rmse = 0.0;
    std::vector<double> residuals;  // model - mid per strike
    std::vector<double> iv_model;
    std::vector<double> iv_market;
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Model call price for a calibration family at one strike. cjd_first /
// cjd_second price through the Esscher series (psi fixed to 0 for first
// order); ljd_merton prices through the jump-compensated Black-Scholes
// reference measure via FFT.
double calib_price(CalibFamily family, const ModelSpec& model, double psi,
                   const MarketContext& ctx, double K, const TruncationPolicy& policy);

// Least-squares fit of the family's free parameters to mid quotes in price
// space (equally weighted), Nelder-Mead with moment-matched multi-starts;
// cjd_second is additionally seeded from the cjd_first optimum so the nested
// ordering rmse(2nd) <= rmse(1st) holds up to optimizer slack.
CalibResult calibrate(CalibFamily family, const QuoteSet& quotes,
                      const std::optional<ModelSpec>& init = std::nullopt,
                      const CalibConfig& config = {});

}  // namespace es2
