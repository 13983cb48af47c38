#include "esscher2/montecarlo.hpp"

#include <algorithm>
#include <cmath>

namespace es2 {

namespace {

void check_sim_args(double x0, double horizon, int n_paths, int n_steps) {
    if (!(x0 > 0.0)) throw error(errc::bad_config, "simulate: x0 > 0 required");
    if (!(horizon > 0.0)) throw error(errc::bad_config, "simulate: horizon > 0 required");
    if (n_paths < 1 || n_steps < 1)
        throw error(errc::bad_config, "simulate: n_paths >= 1 and n_steps >= 1 required");
}

PathSet make_pathset(PathMeasure measure, double x0, double horizon, int n_paths,
                     int n_steps, std::uint64_t seed) {
    PathSet ps;
    ps.measure = measure;
    ps.n_paths = n_paths;
    ps.n_steps = n_steps;
    ps.dt = horizon / n_steps;
    ps.seed = seed;
    ps.levels.assign(static_cast<std::size_t>(n_paths) * (n_steps + 1), std::log(x0));
    return ps;
}

// One path of a jump diffusion with per-step log-drift b*dt, diffusion
// sigma, and a jump block drawn by `jumps(rng, count)`.
template <typename JumpSum>
void fill_path(PathSet& ps, int path, double b, double sigma, double lambda,
               JumpSum&& jump_sum) {
    RngStream rng(ps.seed, static_cast<std::uint64_t>(path));
    const double dt = ps.dt;
    const double sq = sigma * std::sqrt(dt);
    double* row = ps.levels.data() + static_cast<std::size_t>(path) * (ps.n_steps + 1);
    for (int s = 0; s < ps.n_steps; ++s) {
        double inc = b * dt + sq * rng.normal();
        if (lambda > 0.0) {
            const unsigned n = rng.poisson(lambda * dt);
            if (n > 0) inc += jump_sum(rng, n);
        }
        row[s + 1] = row[s] + inc;
    }
}

}  // namespace

PathSet simulate_p(const ModelSpec& model, double x0, double horizon, int n_paths,
                   int n_steps, std::uint64_t seed) {
    require_valid(model);
    check_sim_args(x0, horizon, n_paths, n_steps);
    PathSet ps = make_pathset(PathMeasure::physical, x0, horizon, n_paths, n_steps, seed);

    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gbm>) {
                const double b = m.mu - 0.5 * m.sigma * m.sigma;
                for (int p = 0; p < n_paths; ++p)
                    fill_path(ps, p, b, m.sigma, 0.0, [](RngStream&, unsigned) { return 0.0; });
            } else if constexpr (std::is_same_v<M, Cjd>) {
                const double b = m.mu - 0.5 * m.sigma * m.sigma - m.lambda * gamma_tilde(m.gamma);
                for (int p = 0; p < n_paths; ++p)
                    fill_path(ps, p, b, m.sigma, m.lambda,
                              [&](RngStream&, unsigned n) { return n * m.gamma; });
            } else if constexpr (std::is_same_v<M, Ljd>) {
                const double nu_bar = std::expm1(m.mu_j + 0.5 * m.sigma_j * m.sigma_j);
                const double b = m.mu - 0.5 * m.sigma * m.sigma - m.lambda * nu_bar;
                for (int p = 0; p < n_paths; ++p)
                    fill_path(ps, p, b, m.sigma, m.lambda, [&](RngStream& rng, unsigned n) {
                        // sum of n iid N(mu_j, sigma_j^2) jumps
                        return n * m.mu_j + m.sigma_j * std::sqrt(double(n)) * rng.normal();
                    });
            } else if constexpr (std::is_same_v<M, KouDe>) {
                const double q = 1.0 - m.p;
                const double nu_bar = m.p / (m.eta1 - 1.0) - q / (m.eta2 + 1.0);
                const double b = m.mu - 0.5 * m.sigma * m.sigma - m.lambda * nu_bar;
                for (int p = 0; p < n_paths; ++p)
                    fill_path(ps, p, b, m.sigma, m.lambda, [&](RngStream& rng, unsigned n) {
                        double sum = 0.0;
                        for (unsigned k = 0; k < n; ++k) {
                            const double e = -std::log(rng.uniform());
                            sum += (rng.uniform() < m.p) ? e / m.eta1 : -e / m.eta2;
                        }
                        return sum;
                    });
            } else {  // Vg
                const double b = vg_drift(m);
                const double shape = ps.dt / m.kappa;
                for (int p = 0; p < n_paths; ++p) {
                    RngStream rng(seed, static_cast<std::uint64_t>(p));
                    double* row =
                        ps.levels.data() + static_cast<std::size_t>(p) * (n_steps + 1);
                    for (int s = 0; s < n_steps; ++s) {
                        const double g = rng.gamma(shape, m.kappa);
                        row[s + 1] = row[s] + b * ps.dt + m.m * g +
                                     m.delta * std::sqrt(g) * rng.normal();
                    }
                }
            }
        },
        model);
    return ps;
}

PathSet simulate_cjd_rpsi(const Cjd& model, const EsscherMeasureCjd& measure, double r,
                          double x0, double horizon, int n_paths, int n_steps,
                          std::uint64_t seed) {
    require_valid(ModelSpec{model});
    check_sim_args(x0, horizon, n_paths, n_steps);
    {
        auto res = cjd_residual(model, r, measure.eta, measure.psi, measure.cls);
        if (!res.certified())
            throw error(errc::invalid_model,
                        "simulate_cjd_rpsi: measure residual not certified");
    }
    if (!(measure.lambda_rn >= 0.0))
        throw error(errc::invalid_model, "simulate_cjd_rpsi: negative intensity");

    PathSet ps = make_pathset(PathMeasure::esscher, x0, horizon, n_paths, n_steps, seed);
    // under R_psi the Brownian part gains drift eta*sigma^2 and jumps arrive
    // at lambda_rn; the -lambda*gamma_tilde compensation in the drift is part
    // of the model definition and keeps the physical lambda
    const double b = model.mu - 0.5 * model.sigma * model.sigma -
                     model.lambda * gamma_tilde(model.gamma) +
                     measure.eta * model.sigma * model.sigma;
    for (int p = 0; p < n_paths; ++p)
        fill_path(ps, p, b, model.sigma, measure.lambda_rn,
                  [&](RngStream&, unsigned n) { return n * model.gamma; });
    return ps;
}

McPrice mc_price(const PathSet& paths, const Payoff& payoff, double r) {
    if (paths.measure != PathMeasure::esscher)
        throw error(errc::bad_config,
                    "mc_price: physical-measure paths refused for pricing");
    if (paths.n_paths < 1) throw error(errc::bad_config, "mc_price: empty path set");
    const double disc = std::exp(-r * paths.horizon());
    double sum = 0.0, sum2 = 0.0;
    for (int p = 0; p < paths.n_paths; ++p) {
        const double sT = std::exp(paths.terminal(p));
        double g = 0.0;
        switch (payoff.kind) {
            case Payoff::Kind::call: g = std::max(sT - payoff.K, 0.0); break;
            case Payoff::Kind::put: g = std::max(payoff.K - sT, 0.0); break;
            case Payoff::Kind::unit: g = 1.0; break;
            case Payoff::Kind::terminal_spot: g = sT; break;
        }
        sum += g;
        sum2 += g * g;
    }
    const double n = paths.n_paths;
    const double mean = sum / n;
    const double var = std::max(0.0, sum2 / n - mean * mean);
    McPrice out;
    out.price = disc * mean;
    out.std_error = disc * std::sqrt(var / n);
    return out;
}

double path_checksum(const PathSet& paths) {
    double acc = 0.0;
    double w = 1.0;
    for (double v : paths.levels) {
        acc += w * v;
        w = (w >= 1e9) ? 1.0 : w * 1.0000001;
    }
    return acc;
}

}  // namespace es2
