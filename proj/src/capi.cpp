#include "esscher2/capi.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "esscher2/calibration.hpp"
#include "esscher2/charfn.hpp"
#include "esscher2/fft.hpp"
#include "esscher2/io.hpp"
#include "esscher2/measure.hpp"
#include "esscher2/pricing.hpp"

namespace {

thread_local std::string g_last_error = "";

int code_of(es2::errc c) {
    using es2::errc;
    switch (c) {
        case errc::ok: return ES2_OK;
        case errc::invalid_model: return ES2_ERR_INVALID_MODEL;
        case errc::domain_error: return ES2_ERR_DOMAIN;
        case errc::solver_failure: return ES2_ERR_SOLVER;
        case errc::quadrature_failure: return ES2_ERR_QUADRATURE;
        case errc::truncation_overflow: return ES2_ERR_TRUNCATION_OVERFLOW;
        case errc::io_error: return ES2_ERR_IO;
        case errc::bad_config: return ES2_ERR_BAD_CONFIG;
    }
    return ES2_ERR_INTERNAL;
}

// runs f, converting exceptions into error codes + the thread-local message
template <typename F>
int guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return ES2_OK;
    } catch (const es2::error& e) {
        g_last_error = e.what();
        return code_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ES2_ERR_INTERNAL;
    }
}

es2::MeasureClass class_from(const char* s) {
    if (s && std::strcmp(s, "exp") == 0) return es2::MeasureClass::exponential;
    if (s && std::strcmp(s, "lin") == 0) return es2::MeasureClass::linear;
    throw es2::error(es2::errc::bad_config, "measure class must be 'exp' or 'lin'");
}

}  // namespace

struct es2_model {
    es2::ModelSpec spec;
    std::string family;
};

struct es2_measure {
    es2::MeasureClass cls;
    double eta;
    double psi;
    double lambda_rn;
    bool is_cjd;
};

extern "C" {

const char* es2_last_error(void) { return g_last_error.c_str(); }

es2_model* es2_model_create(const char* json_spec) {
    es2_model* out = nullptr;
    const int rc = guarded([&] {
        if (!json_spec)
            throw es2::error(es2::errc::bad_config, "model spec is NULL");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(json_spec);
        } catch (const std::exception& e) {
            throw es2::error(es2::errc::bad_config,
                             std::string("model spec: bad JSON: ") + e.what());
        }
        if (!j.contains("family") || !j.contains("params"))
            throw es2::error(es2::errc::bad_config,
                             "model spec needs 'family' and 'params'");
        es2::RunConfig cfg;
        cfg.model_family = j["family"].get<std::string>();
        cfg.model_params = j["params"].get<std::vector<double>>();
        auto spec = es2::model_from_config(cfg);
        out = new es2_model{spec, es2::family_name(spec)};
    });
    return rc == ES2_OK ? out : nullptr;
}

void es2_model_destroy(es2_model* model) { delete model; }

const char* es2_model_family(const es2_model* model) {
    return model ? model->family.c_str() : "";
}

es2_measure* es2_measure_solve(const es2_model* model, double r, double psi,
                               const char* measure_class) {
    es2_measure* out = nullptr;
    const int rc = guarded([&] {
        if (!model) throw es2::error(es2::errc::bad_config, "model is NULL");
        const auto cls = class_from(measure_class);
        if (const auto* cjd = std::get_if<es2::Cjd>(&model->spec)) {
            auto m = es2::make_cjd_measure(*cjd, r, psi, cls);
            out = new es2_measure{m.cls, m.eta, m.psi, m.lambda_rn, true};
        } else {
            const double eta = es2::solve_eta_jd(model->spec, r, psi, cls);
            auto res = es2::residual_at(model->spec, r, eta, psi, cls);
            if (!res.certified())
                throw es2::error(es2::errc::solver_failure,
                                 "measure residual not certified");
            out = new es2_measure{cls, eta, psi, 0.0, false};
        }
    });
    return rc == ES2_OK ? out : nullptr;
}

void es2_measure_destroy(es2_measure* measure) { delete measure; }

int es2_measure_eta(const es2_measure* measure, double* out) {
    return guarded([&] {
        if (!measure || !out)
            throw es2::error(es2::errc::bad_config, "NULL argument");
        *out = measure->eta;
    });
}

int es2_measure_intensity(const es2_measure* measure, double* out) {
    return guarded([&] {
        if (!measure || !out)
            throw es2::error(es2::errc::bad_config, "NULL argument");
        if (!measure->is_cjd)
            throw es2::error(es2::errc::bad_config,
                             "intensity accessor is cjd-only");
        *out = measure->lambda_rn;
    });
}

int es2_measure_residual(const es2_model* model, const es2_measure* measure,
                         double r, double* out) {
    return guarded([&] {
        if (!model || !measure || !out)
            throw es2::error(es2::errc::bad_config, "NULL argument");
        *out = es2::residual_at(model->spec, r, measure->eta, measure->psi,
                                measure->cls)
                   .value;
    });
}

int es2_price_series(const es2_model* model, const es2_measure* measure,
                     double spot, double r, double expiry, double strike,
                     double* out) {
    return guarded([&] {
        if (!model || !measure || !out)
            throw es2::error(es2::errc::bad_config, "NULL argument");
        const auto* cjd = std::get_if<es2::Cjd>(&model->spec);
        if (!cjd || !measure->is_cjd)
            throw es2::error(es2::errc::bad_config,
                             "series pricing requires a cjd model and measure");
        es2::EsscherMeasureCjd m{measure->cls, measure->eta, measure->psi,
                                 measure->lambda_rn,
                                 measure->eta * cjd->sigma * cjd->sigma};
        es2::MarketContext ctx{r, spot, 0.0, expiry};
        *out = es2::cjd_call(ctx, strike, *cjd, m,
                             es2::TruncationPolicy::adaptive());
    });
}

int es2_price_fft(const es2_model* model, double r, double psi,
                  const char* measure_class, double spot, double expiry,
                  double strike, double* out) {
    return guarded([&] {
        if (!model || !out)
            throw es2::error(es2::errc::bad_config, "NULL argument");
        es2::RunConfig cfg;
        cfg.model_family = model->family;
        cfg.measure = measure_class ? measure_class : "exp";
        cfg.psi = psi;
        cfg.method = "fft";
        cfg.strike = strike;
        cfg.spot = spot;
        cfg.rate = r;
        cfg.expiry = expiry;
        (void)class_from(cfg.measure.c_str());
        *out = es2::fft_price_from_config(cfg, model->spec);
    });
}

int es2_implied_vol(double price, double spot, double r, double expiry,
                    double strike, double* out) {
    return guarded([&] {
        if (!out) throw es2::error(es2::errc::bad_config, "NULL argument");
        es2::MarketContext ctx{r, spot, 0.0, expiry};
        *out = es2::implied_vol(price, ctx, strike);
    });
}

int es2_dispatch(const char* config_json, char* out_files, size_t out_cap) {
    return guarded([&] {
        if (!config_json)
            throw es2::error(es2::errc::bad_config, "config is NULL");
        auto cfg = es2::run_config_from_json(config_json);
        auto files = es2::dispatch(cfg);
        if (out_files && out_cap > 0) {
            const std::string listing = nlohmann::json(files).dump();
            const size_t n = std::min(listing.size(), out_cap - 1);
            std::memcpy(out_files, listing.data(), n);
            out_files[n] = '\0';
        }
    });
}

}  // extern "C"
