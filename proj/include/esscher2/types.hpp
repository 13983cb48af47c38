#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace es2 {

enum class errc {
    ok = 0,
    invalid_model,
    domain_error,
    solver_failure,
    quadrature_failure,
    truncation_overflow,
    io_error,
    bad_config,
};

// All recoverable failures in the library throw es2::error; the code survives
// the C boundary as an integer.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

enum class OptionKind { call, put };

enum class MeasureClass { exponential, linear };

struct MarketContext {
    double r = 0.0;  // risk-free rate, continuously compounded per year
    double x = 0.0;  // spot
    double t = 0.0;  // valuation time (years)
    double T = 0.0;  // expiry (years)

    double tau() const { return T - t; }
};

struct OptionSpec {
    double K = 0.0;
    OptionKind kind = OptionKind::call;
    double T = 0.0;
};

// --- model families -------------------------------------------------------

struct Gbm {
    double mu = 0.0;
    double sigma = 0.0;
};

// Constant jump size gamma (log scale).
struct Cjd {
    double mu = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    double gamma = 0.0;
};

// Log-normal jump sizes N(mu_j, sigma_j^2).
struct Ljd {
    double mu = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    double mu_j = 0.0;
    double sigma_j = 0.0;
};

// Double-exponential jumps: up-probability p, decay eta1 (up), eta2 (down).
struct KouDe {
    double mu = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    double p = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
};

// Variance Gamma: drifted Brownian motion (m, delta) at a gamma clock with
// unit mean rate and variance rate kappa.
struct Vg {
    double mu = 0.0;
    double m = 0.0;
    double delta = 0.0;
    double kappa = 0.0;
};

using ModelSpec = std::variant<Gbm, Cjd, Ljd, KouDe, Vg>;

struct EsscherSpec {
    MeasureClass cls = MeasureClass::exponential;
    double psi = 0.0;
    double eta = 0.0;
};

// Returns the list of violated invariants; empty means admissible.
std::vector<std::string> validate(const ModelSpec& model);
std::vector<std::string> validate(const MarketContext& ctx);
std::vector<std::string> validate(const OptionSpec& opt);

// Throws error{invalid_model} listing every violation.
void require_valid(const ModelSpec& model);
void require_valid(const MarketContext& ctx);

const char* family_name(const ModelSpec& model);

}  // namespace es2
