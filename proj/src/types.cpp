#include "esscher2/types.hpp"

#include <cmath>
#include <sstream>

namespace es2 {

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_finite(std::vector<std::string>& out, double v, const char* name) {
    if (!finite(v)) out.push_back(std::string(name) + " must be finite");
}

}  // namespace

std::vector<std::string> validate(const ModelSpec& model) {
    std::vector<std::string> v;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            check_finite(v, m.mu, "mu");
            if constexpr (std::is_same_v<M, Gbm>) {
                check_finite(v, m.sigma, "sigma");
                if (!(m.sigma > 0.0)) v.push_back("sigma > 0");
            } else if constexpr (std::is_same_v<M, Cjd>) {
                check_finite(v, m.sigma, "sigma");
                check_finite(v, m.lambda, "lambda");
                check_finite(v, m.gamma, "gamma");
                if (!(m.sigma > 0.0)) v.push_back("sigma > 0");
                if (!(m.lambda > 0.0)) v.push_back("lambda > 0");
                if (m.gamma == 0.0) v.push_back("gamma != 0");
                if (!(m.gamma > -1.0)) v.push_back("gamma > -1");
            } else if constexpr (std::is_same_v<M, Ljd>) {
                check_finite(v, m.sigma, "sigma");
                check_finite(v, m.lambda, "lambda");
                check_finite(v, m.mu_j, "mu_j");
                check_finite(v, m.sigma_j, "sigma_j");
                if (!(m.sigma > 0.0)) v.push_back("sigma > 0");
                if (!(m.lambda > 0.0)) v.push_back("lambda > 0");
                if (!(m.sigma_j >= 0.0)) v.push_back("sigma_j >= 0");
            } else if constexpr (std::is_same_v<M, KouDe>) {
                check_finite(v, m.sigma, "sigma");
                check_finite(v, m.lambda, "lambda");
                check_finite(v, m.p, "p");
                check_finite(v, m.eta1, "eta1");
                check_finite(v, m.eta2, "eta2");
                if (!(m.sigma > 0.0)) v.push_back("sigma > 0");
                if (!(m.lambda > 0.0)) v.push_back("lambda > 0");
                if (!(m.p > 0.0 && m.p < 1.0)) v.push_back("p in (0,1)");
                if (!(m.eta1 > 1.0)) v.push_back("eta1 > 1");
                if (!(m.eta2 > 0.0)) v.push_back("eta2 > 0");
            } else if constexpr (std::is_same_v<M, Vg>) {
                check_finite(v, m.m, "m");
                check_finite(v, m.delta, "delta");
                check_finite(v, m.kappa, "kappa");
                if (!(m.delta > 0.0)) v.push_back("delta > 0");
                if (!(m.kappa > 0.0)) v.push_back("kappa > 0");
                if (finite(m.m) && finite(m.delta) && finite(m.kappa) &&
                    !(1.0 - m.m * m.kappa - 0.5 * m.delta * m.delta * m.kappa > 0.0))
                    v.push_back("1 - m*kappa - delta^2*kappa/2 > 0");
            }
        },
        model);
    return v;
}

std::vector<std::string> validate(const MarketContext& ctx) {
    std::vector<std::string> v;
    check_finite(v, ctx.r, "r");
    check_finite(v, ctx.x, "x");
    check_finite(v, ctx.t, "t");
    check_finite(v, ctx.T, "T");
    if (!(ctx.r > 0.0)) v.push_back("r > 0");
    if (!(ctx.x > 0.0)) v.push_back("x > 0");
    if (!(ctx.t >= 0.0 && ctx.t < ctx.T)) v.push_back("0 <= t < T");
    return v;
}

std::vector<std::string> validate(const OptionSpec& opt) {
    std::vector<std::string> v;
    check_finite(v, opt.K, "K");
    if (!(opt.K >= 0.0)) v.push_back("K >= 0");
    return v;
}

namespace {

[[noreturn]] void raise(const std::vector<std::string>& violations, const char* what) {
    std::ostringstream os;
    os << what << ":";
    for (const auto& s : violations) os << " [" << s << "]";
    throw error(errc::invalid_model, os.str());
}

}  // namespace

void require_valid(const ModelSpec& model) {
    auto v = validate(model);
    if (!v.empty()) raise(v, "invalid model");
}

void require_valid(const MarketContext& ctx) {
    auto v = validate(ctx);
    if (!v.empty()) raise(v, "invalid market context");
}

const char* family_name(const ModelSpec& model) {
    struct V {
        const char* operator()(const Gbm&) const { return "gbm"; }
        const char* operator()(const Cjd&) const { return "cjd"; }
        const char* operator()(const Ljd&) const { return "ljd"; }
        const char* operator()(const KouDe&) const { return "kou"; }
        const char* operator()(const Vg&) const { return "vg"; }
    };
    return std::visit(V{}, model);
}

}  // namespace es2
