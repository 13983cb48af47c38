#include "esscher2/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace es2 {

double bs_call(const MarketContext& ctx, double K, double sigma) {
    const double tau = ctx.tau();
    const double x = ctx.x;
    if (tau <= 0.0) return std::max(x - K, 0.0);
    if (K <= 0.0) return x;
    if (sigma <= 0.0) return std::max(x - K * std::exp(-ctx.r * tau), 0.0);
    const double sq = sigma * std::sqrt(tau);
    const double d1 = (std::log(x / K) + (ctx.r + 0.5 * sigma * sigma) * tau) / sq;
    return x * norm_cdf(d1) - K * std::exp(-ctx.r * tau) * norm_cdf(d1 - sq);
}

namespace {

// smallest n with Poisson(mean) CDF >= mass, capped
int poisson_coverage_terms(double mean, double mass, int n_max) {
    if (mean <= 0.0) return 0;
    double cdf = 0.0;
    for (int k = 0; k <= n_max; ++k) {
        cdf += std::exp(poisson_log_pmf(k, mean));
        if (cdf >= mass) return k;
    }
    return n_max + 1;
}

double poisson_tail_mass(double mean, int n) {
    if (mean <= 0.0) return 0.0;
    double cdf = 0.0;
    for (int k = 0; k <= n; ++k) cdf += std::exp(poisson_log_pmf(k, mean));
    return std::max(0.0, 1.0 - cdf);
}

int resolve_terms(const TruncationPolicy& policy, double mean, double inflated_mean,
                  const char* what) {
    int n;
    if (policy.mode == TruncationPolicy::Mode::fixed) {
        n = policy.n_fixed;
    } else {
        n = static_cast<int>(std::ceil(mean + policy.margin * std::sqrt(mean)));
        n = std::max(n, poisson_coverage_terms(inflated_mean, policy.mass, policy.n_max));
    }
    if (n > policy.n_max) {
        std::ostringstream os;
        os << what << ": required " << n << " terms exceeds n_max=" << policy.n_max
           << " (Poisson mean " << mean << ", dominating mean " << inflated_mean << ")";
        throw error(errc::truncation_overflow, os.str());
    }
    return n;
}

}  // namespace

SeriesPrice cjd_call_detail(const MarketContext& ctx, double K, const Cjd& model,
                            const EsscherMeasureCjd& measure,
                            const TruncationPolicy& policy) {
    require_valid(ModelSpec{model});
    require_valid(ctx);
    {
        auto res = cjd_residual(model, ctx.r, measure.eta, measure.psi, measure.cls);
        if (!res.certified())
            throw error(errc::invalid_model, "cjd_call: measure residual not certified");
    }
    const double tau = ctx.tau();
    const double gt = gamma_tilde(model.gamma);
    const double lam = measure.lambda_rn;
    const double mean = lam * tau;
    // the domination bound for the series error uses the inflated intensity
    // Lambda*(1+gamma_tilde) = Lambda*e^gamma
    const double inflated = mean * std::exp(model.gamma);

    SeriesPrice out;
    out.n_used = resolve_terms(policy, mean, inflated, "cjd_call");
    const double shift = -lam * gt * tau;
    double total = 0.0;
    for (int k = 0; k <= out.n_used; ++k) {
        const double w = std::exp(poisson_log_pmf(k, mean));
        if (w == 0.0 && k > mean) break;
        const double xk = ctx.x * std::exp(k * model.gamma + shift);
        if (!std::isfinite(xk))
            throw error(errc::truncation_overflow, "cjd_call: shifted spot overflow");
        MarketContext c = ctx;
        c.x = xk;
        total += w * bs_call(c, K, model.sigma);
    }
    out.price = total;
    out.error_bound = ctx.x * poisson_tail_mass(inflated, out.n_used);
    return out;
}

double cjd_call(const MarketContext& ctx, double K, const Cjd& model,
                const EsscherMeasureCjd& measure, const TruncationPolicy& policy) {
    return cjd_call_detail(ctx, K, model, measure, policy).price;
}

PriceInterval cjd_price_interval(const MarketContext& ctx, double K, const Cjd& model,
                                 MeasureClass cls, const std::vector<double>& psi_grid,
                                 const TruncationPolicy& policy) {
    PriceInterval out;
    out.lower_bound = bs_call(ctx, K, model.sigma);
    out.upper_bound = ctx.x;
    out.points.reserve(psi_grid.size());
    for (double psi : psi_grid) {
        PricePoint pt;
        pt.psi = psi;
        try {
            auto measure = make_cjd_measure(model, ctx.r, psi, cls);
            pt.price = cjd_call(ctx, K, model, measure, policy);
            pt.ok = true;
        } catch (const error& e) {
            pt.diagnostic = e.what();
        }
        out.points.push_back(pt);
    }
    if (policy.mode == TruncationPolicy::Mode::adaptive) {
        const PricePoint* prev = nullptr;
        for (const auto& pt : out.points) {
            if (!pt.ok) continue;
            if (prev && pt.price < prev->price - 1e-9)
                throw error(errc::solver_failure,
                            "cjd_price_interval: adaptive prices not non-decreasing in psi");
            if (pt.price < out.lower_bound - 1e-8 || pt.price > out.upper_bound + 1e-8)
                throw error(errc::solver_failure,
                            "cjd_price_interval: price outside [bs_call, spot]");
            prev = &pt;
        }
    }
    return out;
}

double ljd_call_second_order(const MarketContext& ctx, double K, const Ljd& model,
                             double theta, double psi, const TruncationPolicy& policy,
                             bool allow_positive_psi) {
    require_valid(ModelSpec{model});
    require_valid(ctx);
    if (psi > 0.0 && !(allow_positive_psi && policy.mode == TruncationPolicy::Mode::fixed))
        throw error(errc::domain_error,
                    "ljd explicit price: psi > 0 needs a fixed policy and explicit opt-in "
                    "(alpha_n = 1 - 2 n psi sigma_j^2 turns negative as n grows)");

    const double tau = ctx.tau();
    const double sig = model.sigma, sj = model.sigma_j, mj = model.mu_j, lam = model.lambda;
    const double mean = lam * tau;
    const int n_terms = resolve_terms(policy, mean, mean, "ljd explicit price");

    const double nt_th = nu_tilde(theta, psi, mj, sj);
    const double nt_th1 = nu_tilde(theta + 1.0, psi, mj, sj);
    const double jump_comp = lam * (nt_th1 - nt_th) * tau;
    const double sqtau = std::sqrt(tau);

    double total = 0.0;
    for (int n = 0; n <= n_terms; ++n) {
        const double alpha = 1.0 - 2.0 * n * psi * sj * sj;
        if (!(alpha > 0.0)) {
            std::ostringstream os;
            os << "ljd explicit price: alpha_n <= 0 at n=" << n << " for psi=" << psi;
            throw error(errc::domain_error, os.str());
        }
        const double w = std::exp(poisson_log_pmf(n, mean));
        const double sn = std::sqrt(sig * sig + n * sj * sj / tau);
        const double P = 2.0 * n * psi * mj * sj / (sn * sqtau);
        const double tb = (theta + P) / alpha;        // theta * beta
        const double t1b = (theta + 1.0 + P) / alpha; // (theta+1) * beta~
        const double A =
            std::exp(n * (theta * mj + psi * mj * mj) -
                     (0.5 * theta * theta * sig * sig + lam * nt_th) * tau +
                     0.5 * alpha * tb * tb * sn * sn * tau);
        const double B =
            std::exp(n * ((theta + 1.0) * mj + psi * mj * mj) +
                     (ctx.r - 0.5 * sig * sig * (theta + 1.0) * (theta + 1.0) -
                      lam * nt_th1) * tau +
                     0.5 * alpha * t1b * t1b * sn * sn * tau);
        const double base_shift = n * (mj + 0.5 * sj * sj + theta * sj * sj) - jump_comp;
        const double delta = base_shift + (tb - theta) * sn * sn * tau;
        const double delta_t = base_shift + (t1b - (theta + 1.0)) * sn * sn * tau;
        const double dm = (std::log(ctx.x / K) + delta + (ctx.r - 0.5 * sn * sn) * tau) *
                          std::sqrt(alpha) / (sn * sqtau);
        const double dp = (std::log(ctx.x / K) + delta_t + (ctx.r + 0.5 * sn * sn) * tau) *
                          std::sqrt(alpha) / (sn * sqtau);
        total += w * (ctx.x * B * norm_cdf(dp) - K * A * norm_cdf(dm)) / std::sqrt(alpha);
    }
    return std::exp(-ctx.r * tau) * total;
}

double european_put_from_parity(double call_price, const MarketContext& ctx, double K) {
    return call_price - ctx.x + K * std::exp(-ctx.r * ctx.tau());
}

}  // namespace es2
