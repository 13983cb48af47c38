#include "esscher2/estimation.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "esscher2/math.hpp"
#include "esscher2/measure.hpp"

namespace es2 {

namespace {

int mixture_k_max(double lambda, double dt) {
    const double m = lambda * dt;
    return std::max(20, static_cast<int>(std::ceil(m + 10.0 * std::sqrt(m))));
}

// Poisson-mixture-of-Gaussians increment density with per-component
// constants precomputed, so a whole-series likelihood pays the lgamma and
// log(var) costs once instead of once per observation.
struct MixtureDensity {
    // component k contributes exp(pre[k] - 0.5*(y-mean[k])^2/var[k])
    std::vector<double> pre, mean, var;

    double log_density(double y) const {
        double best = -std::numeric_limits<double>::infinity();
        const size_t n = pre.size();
        for (size_t k = 0; k < n; ++k) {
            const double d = y - mean[k];
            const double t = pre[k] - 0.5 * d * d / var[k];
            if (t > best) best = t;
        }
        if (!std::isfinite(best)) return best;
        double s = 0.0;
        for (size_t k = 0; k < n; ++k) {
            const double d = y - mean[k];
            s += std::exp(pre[k] - 0.5 * d * d / var[k] - best);
        }
        return best + std::log(s);
    }
};

MixtureDensity make_mixture(const ModelSpec& model, double dt) {
    MixtureDensity mx;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gbm>) {
                mx.mean = {(m.mu - 0.5 * m.sigma * m.sigma) * dt};
                mx.var = {m.sigma * m.sigma * dt};
                mx.pre = {-0.5 * std::log(2.0 * M_PI * mx.var[0])};
            } else if constexpr (std::is_same_v<M, Cjd>) {
                const int kmax = mixture_k_max(m.lambda, dt);
                const double drift =
                    (m.mu - 0.5 * m.sigma * m.sigma - m.lambda * gamma_tilde(m.gamma)) * dt;
                const double var = m.sigma * m.sigma * dt;
                const double lognorm = -0.5 * std::log(2.0 * M_PI * var);
                for (int k = 0; k <= kmax; ++k) {
                    mx.pre.push_back(poisson_log_pmf(k, m.lambda * dt) + lognorm);
                    mx.mean.push_back(drift + k * m.gamma);
                    mx.var.push_back(var);
                }
            } else if constexpr (std::is_same_v<M, Ljd>) {
                const int kmax = mixture_k_max(m.lambda, dt);
                const double nu_bar = std::expm1(m.mu_j + 0.5 * m.sigma_j * m.sigma_j);
                const double drift =
                    (m.mu - 0.5 * m.sigma * m.sigma - m.lambda * nu_bar) * dt;
                for (int k = 0; k <= kmax; ++k) {
                    const double var =
                        m.sigma * m.sigma * dt + k * m.sigma_j * m.sigma_j;
                    mx.pre.push_back(poisson_log_pmf(k, m.lambda * dt) -
                                     0.5 * std::log(2.0 * M_PI * var));
                    mx.mean.push_back(drift + k * m.mu_j);
                    mx.var.push_back(var);
                }
            } else {
                throw error(errc::bad_config,
                            "increment_log_density: only gbm/cjd/ljd supported");
            }
        },
        model);
    return mx;
}

void check_series(const ReturnSeries& series, bool for_fit) {
    if (!(series.dt > 0.0))
        throw error(errc::bad_config, "return series: dt > 0 required");
    for (double y : series.observations)
        if (!std::isfinite(y))
            throw error(errc::bad_config, "return series: non-finite observation");
    if (for_fit && series.observations.size() < 30)
        throw error(errc::bad_config, "return series: need >= 30 observations to fit");
}

// --- parameter packing (transformed space) --------------------------------

size_t family_dim(FitFamily f) {
    switch (f) {
        case FitFamily::gbm: return 2;
        case FitFamily::cjd: return 4;
        default: return 5;
    }
}

ModelSpec unpack(FitFamily f, const double* th) {
    switch (f) {
        case FitFamily::gbm: return Gbm{th[0], std::exp(th[1])};
        case FitFamily::cjd:
            return Cjd{th[0], std::exp(th[1]), std::exp(th[2]), th[3]};
        default:
            return Ljd{th[0], std::exp(th[1]), std::exp(th[2]), th[3], std::exp(th[4])};
    }
}

std::vector<double> pack(FitFamily f, const ModelSpec& model) {
    std::vector<double> th(family_dim(f));
    if (f == FitFamily::gbm) {
        const auto& m = std::get<Gbm>(model);
        th = {m.mu, std::log(m.sigma)};
    } else if (f == FitFamily::cjd) {
        const auto& m = std::get<Cjd>(model);
        th = {m.mu, std::log(m.sigma), std::log(m.lambda), m.gamma};
    } else {
        const auto& m = std::get<Ljd>(model);
        th = {m.mu, std::log(m.sigma), std::log(m.lambda), m.mu_j,
              std::log(std::max(m.sigma_j, 1e-8))};
    }
    return th;
}

struct Objective {
    FitFamily family;
    const ReturnSeries* series;

    double operator()(const double* th) const {
        ModelSpec model = unpack(family, th);
        if (!validate(model).empty()) return 1e12;
        double ll;
        try {
            ll = series_loglik(model, *series);
        } catch (const error&) {
            return 1e12;
        }
        if (!std::isfinite(ll)) return 1e12;
        return -ll;
    }
};

}  // namespace

double increment_log_density(const ModelSpec& model, double dt, double y) {
    require_valid(model);
    if (!(dt > 0.0)) throw error(errc::bad_config, "increment_log_density: dt > 0");
    return make_mixture(model, dt).log_density(y);
}

double series_loglik(const ModelSpec& model, const ReturnSeries& series) {
    check_series(series, false);
    require_valid(model);
    const auto mx = make_mixture(model, series.dt);
    double s = 0.0;
    for (double y : series.observations) s += mx.log_density(y);
    return s;
}

FitResult fit_mle(const ReturnSeries& series, FitFamily family,
                  const std::optional<ModelSpec>& init, const FitConfig& config) {
    check_series(series, true);
    const size_t n = series.observations.size();
    const double dt = series.dt;

    double m1 = 0.0;
    for (double y : series.observations) m1 += y;
    m1 /= n;
    double v = 0.0, skew = 0.0;
    for (double y : series.observations) {
        const double d = y - m1;
        v += d * d;
        skew += d * d * d;
    }
    v /= (n - 1);
    skew /= n;
    const double sigma_tot = std::sqrt(v / dt);
    const double mu0 = m1 / dt + 0.5 * sigma_tot * sigma_tot;

    std::vector<std::vector<double>> starts;
    switch (family) {
        case FitFamily::gbm:
            starts.push_back(pack(family, Gbm{mu0, sigma_tot}));
            break;
        case FitFamily::cjd: {
            // boundary start at the fitted gbm (lambda ~ 0) guarantees the
            // nested-likelihood ordering cjd >= gbm
            auto base = fit_mle(series, FitFamily::gbm, std::nullopt, config);
            const auto& g = std::get<Gbm>(base.model);
            starts.push_back(pack(family, Cjd{g.mu, g.sigma, 1e-4, 0.05}));
            const double g0 = (skew < 0.0 ? -1.0 : 1.0) *
                              std::max(2.0 * std::sqrt(v), 1e-3);
            starts.push_back(pack(family, Cjd{mu0, 0.8 * sigma_tot, 10.0, g0}));
            starts.push_back(pack(family, Cjd{mu0, 0.9 * sigma_tot, 100.0, 0.5 * g0}));
            break;
        }
        case FitFamily::ljd: {
            // boundary start at the fitted cjd (sigma_j ~ 0, mu_j = gamma)
            auto base = fit_mle(series, FitFamily::cjd, std::nullopt, config);
            const auto& c = std::get<Cjd>(base.model);
            starts.push_back(pack(family, Ljd{c.mu, c.sigma, c.lambda, c.gamma, 1e-4}));
            const double g0 = (skew < 0.0 ? -1.0 : 1.0) *
                              std::max(2.0 * std::sqrt(v), 1e-3);
            starts.push_back(
                pack(family, Ljd{mu0, 0.8 * sigma_tot, 10.0, g0, std::abs(g0)}));
            break;
        }
    }
    if (init) starts.insert(starts.begin(), pack(family, *init));
    // jittered restarts around the first moment-matched start
    {
        RngStream rng(config.seed, 1);
        const auto center = starts.back();
        while (static_cast<int>(starts.size()) < config.multi_starts) {
            auto s = center;
            for (auto& c : s) c += 0.3 * rng.normal();
            starts.push_back(std::move(s));
        }
    }

    Objective obj{family, &series};
    std::function<double(const double*)> f = [&obj](const double* th) { return obj(th); };
    SimplexResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        auto got = nelder_mead(f, s, 0.25, config.simplex_tol, config.max_iter);
        if (got.value < best.value) best = got;
    }
    if (!std::isfinite(best.value) || best.value >= 1e12)
        throw error(errc::solver_failure, "fit_mle: no feasible optimum found");

    FitResult out;
    out.model = unpack(family, best.x.data());
    out.loglik = -best.value;
    out.converged = best.converged;
    out.iterations = best.iterations;
    {
        const double h = 1e-5;
        double g2 = 0.0;
        auto th = best.x;
        for (size_t i = 0; i < th.size(); ++i) {
            const double save = th[i];
            th[i] = save + h;
            const double up = obj(th.data());
            th[i] = save - h;
            const double dn = obj(th.data());
            th[i] = save;
            const double g = (up - dn) / (2.0 * h);
            g2 += g * g;
        }
        out.grad_norm = std::sqrt(g2);
    }
    return out;
}

ReturnSeries log_returns_from_prices(const std::vector<DatedPrice>& prices) {
    if (prices.size() < 2)
        throw error(errc::bad_config, "log_returns_from_prices: need >= 2 prices");
    std::vector<double> gaps;
    ReturnSeries out;
    for (size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i].close > 0.0)) {
            std::ostringstream os;
            os << "log_returns_from_prices: non-positive close at row " << (i + 1);
            throw error(errc::bad_config, os.str());
        }
        if (i > 0) {
            if (prices[i].day <= prices[i - 1].day) {
                std::ostringstream os;
                os << "log_returns_from_prices: dates not strictly increasing at row "
                   << (i + 1);
                throw error(errc::bad_config, os.str());
            }
            gaps.push_back(double(prices[i].day - prices[i - 1].day));
            out.observations.push_back(std::log(prices[i].close / prices[i - 1].close));
        }
    }
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    out.dt = gaps[gaps.size() / 2] / 365.0;
    return out;
}

}  // namespace es2
