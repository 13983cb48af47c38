#include "esscher2/hedging.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace es2 {

namespace {

// Resolves the pricing measure once; the returned closure prices at any
// (spot, time) context with the same r.
std::function<double(const MarketContext&, double)> make_pricer(
    const PricerSpec& pricer, double r, const TruncationPolicy& policy) {
    switch (pricer.kind) {
        case PricerSpec::Kind::bs: {
            const auto g = std::get<Gbm>(pricer.model);
            return [g](const MarketContext& ctx, double K) {
                return bs_call(ctx, K, g.sigma);
            };
        }
        case PricerSpec::Kind::cjd_no_jump_risk: {
            const auto m = std::get<Cjd>(pricer.model);
            // diffusion-only tilt; psi = -eta/gamma zeroes the jump tilt so
            // the intensity stays at the physical lambda and the residual
            // still certifies
            EsscherMeasureCjd ms;
            ms.cls = MeasureClass::exponential;
            ms.eta = (r - m.mu) / (m.sigma * m.sigma);
            ms.psi = -ms.eta / m.gamma;
            ms.lambda_rn = m.lambda;
            ms.drift_w = ms.eta * m.sigma;
            return [m, ms, policy](const MarketContext& ctx, double K) {
                return cjd_call(ctx, K, m, ms, policy);
            };
        }
        case PricerSpec::Kind::cjd_first_order:
        case PricerSpec::Kind::cjd_second_order: {
            const auto m = std::get<Cjd>(pricer.model);
            const double psi =
                pricer.kind == PricerSpec::Kind::cjd_first_order ? 0.0 : pricer.psi;
            const auto ms = make_cjd_measure(m, r, psi, pricer.cls);
            return [m, ms, policy](const MarketContext& ctx, double K) {
                return cjd_call(ctx, K, m, ms, policy);
            };
        }
        default: {
            const auto m = std::get<Ljd>(pricer.model);
            const double psi = pricer.psi;
            const double theta = solve_eta_jd(pricer.model, r, psi, pricer.cls);
            return [m, theta, psi, policy](const MarketContext& ctx, double K) {
                return ljd_call_second_order(ctx, K, m, theta, psi, policy);
            };
        }
    }
}

}  // namespace

double pricer_value(const PricerSpec& pricer, const MarketContext& ctx, double K,
                    const TruncationPolicy& policy) {
    return make_pricer(pricer, ctx.r, policy)(ctx, K);
}

double model_delta(const PricerSpec& pricer, const MarketContext& ctx, double K,
                   const TruncationPolicy& policy) {
    if (pricer.kind == PricerSpec::Kind::bs) {
        const auto g = std::get<Gbm>(pricer.model);
        const double tau = ctx.tau();
        if (tau <= 0.0 || g.sigma <= 0.0) return ctx.x > K ? 1.0 : 0.0;
        const double sq = g.sigma * std::sqrt(tau);
        const double d1 =
            (std::log(ctx.x / K) + (ctx.r + 0.5 * g.sigma * g.sigma) * tau) / sq;
        return norm_cdf(d1);
    }
    auto price = make_pricer(pricer, ctx.r, policy);
    const double h = 1e-4;
    MarketContext up = ctx, dn = ctx;
    up.x = ctx.x * (1.0 + h);
    dn.x = ctx.x * (1.0 - h);
    return (price(up, K) - price(dn, K)) / (2.0 * ctx.x * h);
}

HedgeReport hedge_simulate(const HedgeConfig& config) {
    if (!(config.x0 > 0.0) || !(config.option.K > 0.0) || !(config.option.T > 0.0))
        throw error(errc::bad_config, "hedge_simulate: x0, K, T must be positive");
    if (config.rebalance_steps < 1 || config.n_paths < 1)
        throw error(errc::bad_config, "hedge_simulate: schedule and n_paths >= 1");

    const double T = config.option.T;
    const int steps = config.rebalance_steps;
    const double dt = T / steps;
    const double grow = std::exp(config.r * dt);

    auto price = make_pricer(config.pricer, config.r, config.policy);
    auto delta_at = [&](double spot, double t) {
        MarketContext ctx{config.r, spot, t, T};
        if (config.pricer.kind == PricerSpec::Kind::bs)
            return model_delta(config.pricer, ctx, config.option.K, config.policy);
        const double h = 1e-4;
        MarketContext up = ctx, dn = ctx;
        up.x = spot * (1.0 + h);
        dn.x = spot * (1.0 - h);
        return (price(up, config.option.K) - price(dn, config.option.K)) /
               (2.0 * spot * h);
    };

    auto paths = simulate_p(config.path_model, config.x0, T, config.n_paths, steps,
                            config.seed);

    MarketContext ctx0{config.r, config.x0, 0.0, T};
    const double premium = price(ctx0, config.option.K);

    HedgeReport report;
    report.config = config;
    report.pnl.resize(config.n_paths);
    const double delta0 = delta_at(config.x0, 0.0);
    for (int p = 0; p < config.n_paths; ++p) {
        double cash = premium - delta0 * config.x0;
        double delta = delta0;
        for (int s = 1; s < steps; ++s) {
            const double spot = std::exp(paths.level(p, s));
            const double nd = delta_at(spot, s * dt);
            cash = cash * grow - (nd - delta) * spot;
            delta = nd;
        }
        const double sT = std::exp(paths.terminal(p));
        const double payoff = config.option.kind == OptionKind::call
                                  ? std::max(sT - config.option.K, 0.0)
                                  : std::max(config.option.K - sT, 0.0);
        report.pnl[p] = cash * grow + delta * sT - payoff;
    }
    auto ve = var_es(report.pnl, 0.05);
    report.var_5 = ve.first;
    report.es_5 = ve.second;
    return report;
}

std::pair<double, double> var_es(const std::vector<double>& pnl, double alpha) {
    if (pnl.empty()) throw error(errc::bad_config, "var_es: empty sample");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw error(errc::bad_config, "var_es: alpha in (0,1) required");
    const size_t n = pnl.size();
    const size_t tail = static_cast<size_t>(std::floor(alpha * n));
    if (tail < 1)
        throw error(errc::bad_config,
                    "var_es: alpha*n < 1, need more samples for the tail mean");
    std::vector<double> losses(n);
    for (size_t i = 0; i < n; ++i) losses[i] = -pnl[i];
    std::sort(losses.begin(), losses.end());
    const size_t var_rank = static_cast<size_t>(std::ceil((1.0 - alpha) * n));
    const double var = losses[var_rank - 1];
    double es = 0.0;
    for (size_t i = n - tail; i < n; ++i) es += losses[i];
    es /= tail;
    return {var, es};
}

std::vector<VarEsPoint> var_es_sweep(const HedgeConfig& base,
                                     const std::vector<double>& psi_grid) {
    std::vector<VarEsPoint> out;
    out.reserve(psi_grid.size());
    double checksum = 0.0;
    bool have_checksum = false;
    for (double psi : psi_grid) {
        VarEsPoint pt;
        pt.psi = psi;
        HedgeConfig cfg = base;
        cfg.pricer.psi = psi;
        try {
            // common random numbers: the physical paths depend only on
            // (path_model, x0, T, n_paths, steps, seed), all fixed here
            auto paths = simulate_p(cfg.path_model, cfg.x0, cfg.option.T, cfg.n_paths,
                                    cfg.rebalance_steps, cfg.seed);
            const double cs = path_checksum(paths);
            if (!have_checksum) {
                checksum = cs;
                have_checksum = true;
            } else if (cs != checksum) {
                throw error(errc::solver_failure,
                            "var_es_sweep: physical paths differ across psi");
            }
            auto report = hedge_simulate(cfg);
            pt.var = report.var_5;
            pt.es = report.es_5;
            pt.ok = true;
        } catch (const error& e) {
            pt.diagnostic = e.what();
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace es2
