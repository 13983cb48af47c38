#include "esscher2/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "esscher2/charfn.hpp"
#include "esscher2/fft.hpp"
#include "esscher2/math.hpp"
#include "esscher2/measure.hpp"

namespace es2 {

void require_valid(const QuoteSet& quotes) {
    if (!(quotes.spot > 0.0) || !(quotes.r > 0.0) || !(quotes.expiry > 0.0))
        throw error(errc::bad_config, "quote set: spot, r, expiry must be positive");
    if (quotes.rows.empty()) throw error(errc::bad_config, "quote set: no quotes");
    double prev = 0.0;
    for (size_t i = 0; i < quotes.rows.size(); ++i) {
        const auto& q = quotes.rows[i];
        if (!(q.strike > prev)) {
            std::ostringstream os;
            os << "quote set: strikes not strictly increasing at row " << (i + 1);
            throw error(errc::bad_config, os.str());
        }
        if (!(q.mid > 0.0)) {
            std::ostringstream os;
            os << "quote set: non-positive mid at row " << (i + 1);
            throw error(errc::bad_config, os.str());
        }
        prev = q.strike;
    }
}

double implied_vol(double price, const MarketContext& ctx, double K) {
    require_valid(ctx);
    if (!(K > 0.0)) throw error(errc::bad_config, "implied_vol: K > 0 required");
    const double tau = ctx.tau();
    const double lo_bound = std::max(ctx.x - K * std::exp(-ctx.r * tau), 0.0);
    if (!(price > lo_bound))
        throw error(errc::domain_error,
                    "implied_vol: price at or below the intrinsic bound "
                    "max(x - K e^{-r tau}, 0)");
    if (!(price < ctx.x))
        throw error(errc::domain_error, "implied_vol: price at or above the spot bound");

    double lo = 1e-8, hi = 5.0;
    while (bs_call(ctx, K, hi) < price) {
        hi *= 2.0;
        if (hi > 100.0)
            throw error(errc::solver_failure, "implied_vol: no volatility below 100");
    }
    double sigma = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double val = bs_call(ctx, K, sigma);
        const double diff = val - price;
        if (std::abs(diff) < 1e-10) return sigma;
        if (diff > 0.0)
            hi = sigma;
        else
            lo = sigma;
        // Newton step on the Black-Scholes vega, kept inside the bracket
        const double sq = sigma * std::sqrt(tau);
        const double d1 =
            (std::log(ctx.x / K) + (ctx.r + 0.5 * sigma * sigma) * tau) / sq;
        const double vega = ctx.x * norm_pdf(d1) * std::sqrt(tau);
        double next = sigma - diff / vega;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        sigma = next;
    }
    return sigma;
}

namespace {

struct CalibParams {
    ModelSpec model = Gbm{};
    double psi = 0.0;
};

size_t calib_dim(CalibFamily f) {
    switch (f) {
        case CalibFamily::cjd_first: return 4;   // mu, log sigma, log lambda, gamma
        case CalibFamily::cjd_second: return 5;  // + psi
        default: return 4;                       // log sigma, log lambda, mu_j, log sigma_j
    }
}

CalibParams unpack(CalibFamily f, double r, const double* th) {
    CalibParams p;
    switch (f) {
        case CalibFamily::cjd_second:
            p.psi = th[4];
            [[fallthrough]];
        case CalibFamily::cjd_first:
            p.model = Cjd{th[0], std::exp(th[1]), std::exp(th[2]), th[3]};
            break;
        default:
            // the reference measure pins the drift to r; mu is not a free
            // parameter of the merton pricer
            p.model = Ljd{r, std::exp(th[0]), std::exp(th[1]), th[2], std::exp(th[3])};
            break;
    }
    return p;
}

std::vector<double> pack(CalibFamily f, const CalibParams& p) {
    switch (f) {
        case CalibFamily::cjd_first: {
            const auto& m = std::get<Cjd>(p.model);
            return {m.mu, std::log(m.sigma), std::log(m.lambda), m.gamma};
        }
        case CalibFamily::cjd_second: {
            const auto& m = std::get<Cjd>(p.model);
            return {m.mu, std::log(m.sigma), std::log(m.lambda), m.gamma, p.psi};
        }
        default: {
            const auto& m = std::get<Ljd>(p.model);
            return {std::log(m.sigma), std::log(m.lambda), m.mu_j,
                    std::log(std::max(m.sigma_j, 1e-6))};
        }
    }
}

// prices every strike at once (one FFT curve for merton, one measure solve
// for the cjd families)
std::vector<double> price_all(CalibFamily f, const CalibParams& p, const QuoteSet& qs,
                              const TruncationPolicy& policy) {
    std::vector<double> out;
    out.reserve(qs.rows.size());
    MarketContext ctx{qs.r, qs.spot, 0.0, qs.expiry};
    if (f == CalibFamily::ljd_merton) {
        const auto& m = std::get<Ljd>(p.model);
        auto cf = charfn_merton_qbs(m, qs.r, qs.expiry);
        auto curve = fft_call_curve(cf, qs.spot, qs.r);
        for (const auto& q : qs.rows) out.push_back(price_at_strike(curve, q.strike));
    } else {
        const auto& m = std::get<Cjd>(p.model);
        const double psi = f == CalibFamily::cjd_first ? 0.0 : p.psi;
        auto measure = make_cjd_measure(m, qs.r, psi, MeasureClass::exponential);
        for (const auto& q : qs.rows)
            out.push_back(cjd_call(ctx, q.strike, m, measure, policy));
    }
    return out;
}

}  // namespace

double calib_price(CalibFamily family, const ModelSpec& model, double psi,
                   const MarketContext& ctx, double K, const TruncationPolicy& policy) {
    QuoteSet qs;
    qs.spot = ctx.x;
    qs.r = ctx.r;
    qs.expiry = ctx.tau();
    qs.rows.push_back({K, 1.0, 0.0});
    return price_all(family, CalibParams{model, psi}, qs, policy)[0];
}

CalibResult calibrate(CalibFamily family, const QuoteSet& quotes,
                      const std::optional<ModelSpec>& init, const CalibConfig& config) {
    require_valid(quotes);
    MarketContext ctx{quotes.r, quotes.spot, 0.0, quotes.expiry};

    auto objective = [&](const double* th) -> double {
        CalibParams p = unpack(family, quotes.r, th);
        if (!validate(p.model).empty()) return 1e12;
        try {
            auto prices = price_all(family, p, quotes, config.policy);
            double s = 0.0;
            for (size_t i = 0; i < prices.size(); ++i) {
                const double d = prices[i] - quotes.rows[i].mid;
                s += d * d;
            }
            return std::isfinite(s) ? s : 1e12;
        } catch (const error&) {
            return 1e12;
        }
    };
    std::function<double(const double*)> f = objective;

    // moment-matched center: implied vol of the quote nearest the money
    double sigma0 = 0.2;
    {
        size_t best = 0;
        for (size_t i = 1; i < quotes.rows.size(); ++i)
            if (std::abs(quotes.rows[i].strike - quotes.spot) <
                std::abs(quotes.rows[best].strike - quotes.spot))
                best = i;
        try {
            sigma0 = implied_vol(quotes.rows[best].mid, ctx, quotes.rows[best].strike);
        } catch (const error&) {
        }
    }

    std::vector<std::vector<double>> starts;
    if (init) starts.push_back(pack(family, CalibParams{*init, 0.0}));
    switch (family) {
        case CalibFamily::cjd_first:
            starts.push_back(pack(family, {Cjd{quotes.r, 0.9 * sigma0, 1.0, -0.1}, 0.0}));
            starts.push_back(pack(family, {Cjd{quotes.r, 0.8 * sigma0, 3.0, 0.1}, 0.0}));
            break;
        case CalibFamily::cjd_second: {
            // seeding from the first-order optimum makes the nested rmse
            // ordering hold by construction
            auto base = calibrate(CalibFamily::cjd_first, quotes, init, config);
            starts.push_back(pack(family, {base.model, 0.0}));
            starts.push_back(pack(family, {Cjd{quotes.r, 0.9 * sigma0, 1.0, -0.1}, -5.0}));
            break;
        }
        default:
            starts.push_back(
                pack(family, {Ljd{quotes.r, 0.9 * sigma0, 0.5, -0.1, 0.1}, 0.0}));
            starts.push_back(
                pack(family, {Ljd{quotes.r, 0.8 * sigma0, 2.0, 0.05, 0.05}, 0.0}));
            break;
    }
    {
        RngStream rng(config.seed, 1);
        const auto center = starts.back();
        while (static_cast<int>(starts.size()) < config.multi_starts) {
            auto s = center;
            for (auto& c : s) c += 0.25 * rng.normal();
            starts.push_back(std::move(s));
        }
    }

    SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        auto got = nelder_mead(f, s, 0.2, config.simplex_tol, config.max_iter);
        if (got.value < best.value) best = got;
    }
    if (!std::isfinite(best.value) || best.value >= 1e12)
        throw error(errc::solver_failure, "calibrate: no feasible optimum found");

    CalibResult out;
    CalibParams p = unpack(family, quotes.r, best.x.data());
    out.model = p.model;
    out.psi = family == CalibFamily::cjd_second ? p.psi : 0.0;
    out.objective = best.value;
    out.converged = best.converged;
    out.iterations = best.iterations;
    auto prices = price_all(family, p, quotes, config.policy);
    out.residuals.resize(prices.size());
    double s = 0.0;
    for (size_t i = 0; i < prices.size(); ++i) {
        out.residuals[i] = prices[i] - quotes.rows[i].mid;
        s += out.residuals[i] * out.residuals[i];
    }
    out.rmse = std::sqrt(s / prices.size());
    for (size_t i = 0; i < prices.size(); ++i) {
        const double K = quotes.rows[i].strike;
        auto iv = [&](double price) {
            try {
                return implied_vol(price, ctx, K);
            } catch (const error&) {
                return std::numeric_limits<double>::quiet_NaN();
            }
        };
        out.iv_model.push_back(iv(prices[i]));
        out.iv_market.push_back(iv(quotes.rows[i].mid));
    }
    return out;
}

}  // namespace es2
