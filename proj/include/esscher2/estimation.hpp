#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esscher2/types.hpp"

namespace es2 {

// Ordered log-returns sampled at a fixed interval dt (years).
struct ReturnSeries {
    std::vector<double> observations;
    double dt = 0.0;
    std::string source;
};

// A dated closing price; day counts days since the epoch so the parsing
// layer owns all calendar handling.
struct DatedPrice {
    std::int64_t day = 0;
    double close = 0.0;
};

enum class FitFamily { gbm, cjd, ljd };

struct FitConfig {
    int multi_starts = 5;
    int max_iter = 2000;
    double simplex_tol = 1e-8;
    std::uint64_t seed = 0;
};

struct FitResult {
    ModelSpec model = Gbm{};
    double loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;  // finite-difference gradient at the optimum
};

// Log-density of one log-return over dt. GBM is Gaussian; CJD and LJD are
// Poisson mixtures of Gaussians evaluated in log-sum-exp form with the
// mixture truncated at k_max = max(20, ceil(lambda dt + 10 sqrt(lambda dt))).
double increment_log_density(const ModelSpec& model, double dt, double y);

double series_loglik(const ModelSpec& model, const ReturnSeries& series);

// Maximum-likelihood fit by Nelder-Mead over transformed parameters
// (sigma, lambda, sigma_j through log; drift and jump locations raw), with
// moment-matched multi-starts. Nested families are seeded from the fitted
// smaller family so the likelihood ordering ljd >= cjd >= gbm holds up to
// optimizer slack. Deterministic given (series, init, config).
FitResult fit_mle(const ReturnSeries& series, FitFamily family,
                  const std::optional<ModelSpec>& init = std::nullopt,
                  const FitConfig& config = {});

// y_i = ln(p_{i+1}/p_i); dt = median calendar gap / 365.
ReturnSeries log_returns_from_prices(const std::vector<DatedPrice>& prices);

}  // namespace es2
