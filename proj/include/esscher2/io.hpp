#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esscher2/calibration.hpp"
#include "esscher2/estimation.hpp"
#include "esscher2/types.hpp"

namespace es2 {

// days since 1970-01-01 from an ISO-8601 calendar date
std::int64_t days_from_iso_date(const std::string& iso);

// CSV with header `date,close`, ISO-8601 dates, strictly increasing,
// positive closes; parse errors name the offending line.
std::vector<DatedPrice> load_prices(const std::string& path);

struct QuoteFilter {
    double min_open_interest = 100.0;  // strictly greater than
    double strike_lo = 0.0;
    double strike_hi = 1e308;
};

// CSV with header `strike,mid,open_interest` plus a JSON sidecar
// {"spot":..., "r":..., "trade_date":"...", "expiry":"..."}; rows are
// filtered, then sorted by strike. An empty post-filter set is an error
// naming the filter.
QuoteSet load_quotes(const std::string& csv_path, const std::string& sidecar_path,
                     const QuoteFilter& filter = {});

struct RunConfig {
    std::string command;  // fit | price | interval | hedge | calibrate | charfn-check
    std::string model_family = "gbm";  // gbm|cjd|ljd|kou|vg (calibrate: cjd-1st|cjd-2nd|ljd-merton)
    std::vector<double> model_params;  // family-order constructor arguments
    std::string measure = "exp";       // exp | lin
    std::optional<double> psi;
    std::optional<double> phi;
    std::vector<double> psi_grid;      // lo:hi:step expansion
    std::string method = "series";     // series | explicit | fft | mc
    double strike = 100.0;
    double spot = 100.0;
    double rate = 0.03;
    double expiry = 0.5;
    int n_fixed = -1;                  // >= 0 selects fixed truncation
    double adaptive_mass = 1.0 - 1e-12;
    int paths = 10000;
    int steps = 126;
    std::uint64_t seed = 0;
    std::string prices_path;
    std::string quotes_path;
    std::string quotes_sidecar;
    std::string out_dir = ".";
    std::string format = "json";       // json | csv for tabular artifacts
};

// Builds the in-memory model from (model_family, model_params).
ModelSpec model_from_config(const RunConfig& config);

// One FFT call price using the family-appropriate characteristic function
// for (config.measure, psi resolved from config).
double fft_price_from_config(const RunConfig& config, const ModelSpec& model);

// Parses a JSON object with keys named after the RunConfig fields; unknown
// keys are an error, psi_grid accepts either an array or a "lo:hi:step"
// string.
RunConfig run_config_from_json(const std::string& text);

// Expands "lo:hi:step" into an inclusive ascending grid.
std::vector<double> parse_psi_grid(const std::string& spec);

// Runs one command, writing machine-readable artifacts (with the effective
// config echoed) strictly inside config.out_dir. Throws es2::error on any
// failure; returns the list of files written.
std::vector<std::string> dispatch(const RunConfig& config);

}  // namespace es2
