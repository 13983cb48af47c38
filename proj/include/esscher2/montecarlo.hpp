#pragma once

#include <cstdint>
#include <vector>

#include "esscher2/measure.hpp"
#include "esscher2/types.hpp"

namespace es2 {

enum class PathMeasure { physical, esscher };

// Simulated log-price paths. levels is row-major (n_paths) x (n_steps + 1)
// with levels[p][0] = ln x0; reproducible bit-exactly from the seed because
// every path owns its own counter-based RNG stream.
struct PathSet {
    PathMeasure measure = PathMeasure::physical;
    int n_paths = 0;
    int n_steps = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> levels;

    double level(int path, int step) const {
        return levels[static_cast<std::size_t>(path) * (n_steps + 1) + step];
    }
    double terminal(int path) const { return level(path, n_steps); }
    double horizon() const { return dt * n_steps; }
};

// Physical-measure simulation with exact per-step increments: Gaussian part
// exact, jump counts Poisson per step with end-of-step aggregation, VG via
// gamma-subordinated Gaussian increments (shape dt/kappa, scale kappa).
PathSet simulate_p(const ModelSpec& model, double x0, double horizon, int n_paths,
                   int n_steps, std::uint64_t seed = 0);

// CJD paths under the second-order Esscher measure R_psi: Brownian drift
// gains eta*sigma^2 and the Poisson intensity becomes lambda_rn. The measure
// must certify against (model, r); the discounted spot is then a martingale.
PathSet simulate_cjd_rpsi(const Cjd& model, const EsscherMeasureCjd& measure, double r,
                          double x0, double horizon, int n_paths, int n_steps,
                          std::uint64_t seed);

struct Payoff {
    enum class Kind { call, put, unit, terminal_spot };
    Kind kind = Kind::call;
    double K = 0.0;

    static Payoff call(double K) { return Payoff{Kind::call, K}; }
    static Payoff put(double K) { return Payoff{Kind::put, K}; }
};

struct McPrice {
    double price = 0.0;
    double std_error = 0.0;
};

// Discounted sample mean over terminal values; refuses physical-measure paths
// (they carry the wrong drift for pricing).
McPrice mc_price(const PathSet& paths, const Payoff& payoff, double r);

// Order-sensitive digest of the level matrix, used to assert that paired-seed
// sweeps really reuse identical paths.
double path_checksum(const PathSet& paths);

}  // namespace es2
