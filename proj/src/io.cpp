#include "esscher2/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "esscher2/charfn.hpp"
#include "esscher2/fft.hpp"
#include "esscher2/hedging.hpp"
#include "esscher2/measure.hpp"
#include "esscher2/montecarlo.hpp"
#include "esscher2/pricing.hpp"

namespace es2 {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::int64_t days_from_iso_date(const std::string& iso) {
    int y, m, d;
    char dash1, dash2;
    std::istringstream is(iso);
    if (!(is >> y >> dash1 >> m >> dash2 >> d) || dash1 != '-' || dash2 != '-' ||
        m < 1 || m > 12 || d < 1 || d > 31 || !is.eof())
        throw error(errc::io_error, "invalid ISO-8601 date: '" + iso + "'");
    // days_from_civil (Gregorian, proleptic)
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

std::vector<DatedPrice> load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error(errc::io_error, "cannot open prices file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "date,close")
        throw error(errc::io_error, path + ": expected header 'date,close'");
    std::vector<DatedPrice> out;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        std::ostringstream where;
        where << path << " line " << line_no;
        if (comma == std::string::npos)
            throw error(errc::io_error, where.str() + ": expected 'date,close'");
        DatedPrice p;
        try {
            p.day = days_from_iso_date(line.substr(0, comma));
        } catch (const error& e) {
            throw error(errc::io_error, where.str() + ": " + e.what());
        }
        size_t used = 0;
        const std::string val = line.substr(comma + 1);
        try {
            p.close = std::stod(val, &used);
        } catch (const std::exception&) {
            throw error(errc::io_error, where.str() + ": unparseable close '" + val + "'");
        }
        if (used != val.size())
            throw error(errc::io_error, where.str() + ": trailing junk in close '" + val + "'");
        if (!(p.close > 0.0))
            throw error(errc::io_error, where.str() + ": non-positive close");
        if (!out.empty()) {
            if (p.day == out.back().day)
                throw error(errc::io_error, where.str() + ": duplicate date");
            if (p.day < out.back().day)
                throw error(errc::io_error, where.str() + ": dates not increasing");
        }
        out.push_back(p);
    }
    return out;
}

QuoteSet load_quotes(const std::string& csv_path, const std::string& sidecar_path,
                     const QuoteFilter& filter) {
    QuoteSet qs;
    {
        std::ifstream in(sidecar_path);
        if (!in) throw error(errc::io_error, "cannot open quote sidecar: " + sidecar_path);
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw error(errc::io_error, sidecar_path + ": bad JSON: " + e.what());
        }
        for (const char* key : {"spot", "r", "trade_date", "expiry"})
            if (!j.contains(key))
                throw error(errc::io_error,
                            sidecar_path + ": missing key '" + std::string(key) + "'");
        qs.spot = j["spot"].get<double>();
        qs.r = j["r"].get<double>();
        qs.trade_date = j["trade_date"].get<std::string>();
        const auto t0 = days_from_iso_date(qs.trade_date);
        const auto t1 = days_from_iso_date(j["expiry"].get<std::string>());
        if (t1 <= t0)
            throw error(errc::io_error, sidecar_path + ": expiry not after trade_date");
        qs.expiry = double(t1 - t0) / 365.0;
    }

    std::ifstream in(csv_path);
    if (!in) throw error(errc::io_error, "cannot open quotes file: " + csv_path);
    std::string line;
    if (!std::getline(in, line) || line != "strike,mid,open_interest")
        throw error(errc::io_error,
                    csv_path + ": expected header 'strike,mid,open_interest'");
    int line_no = 1;
    size_t raw_rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++raw_rows;
        std::istringstream is(line);
        Quote q;
        char c1, c2;
        if (!(is >> q.strike >> c1 >> q.mid >> c2 >> q.open_interest) || c1 != ',' ||
            c2 != ',') {
            std::ostringstream os;
            os << csv_path << " line " << line_no
               << ": expected 'strike,mid,open_interest'";
            throw error(errc::io_error, os.str());
        }
        if (q.open_interest > filter.min_open_interest && q.strike >= filter.strike_lo &&
            q.strike <= filter.strike_hi)
            qs.rows.push_back(q);
    }
    if (qs.rows.empty()) {
        std::ostringstream os;
        os << csv_path << ": no quotes survive the filter (open_interest > "
           << filter.min_open_interest << ", strike in [" << filter.strike_lo << ", "
           << filter.strike_hi << "]) out of " << raw_rows << " rows";
        throw error(errc::io_error, os.str());
    }
    std::sort(qs.rows.begin(), qs.rows.end(),
              [](const Quote& a, const Quote& b) { return a.strike < b.strike; });
    require_valid(qs);
    return qs;
}

ModelSpec model_from_config(const RunConfig& config) {
    const auto& p = config.model_params;
    auto need = [&](size_t n, const char* sig) {
        if (p.size() != n)
            throw error(errc::bad_config,
                        "model '" + config.model_family + "' needs parameters " + sig);
    };
    ModelSpec model;
    if (config.model_family == "gbm") {
        need(2, "mu,sigma");
        model = Gbm{p[0], p[1]};
    } else if (config.model_family == "cjd" || config.model_family == "cjd-1st" ||
               config.model_family == "cjd-2nd") {
        need(4, "mu,sigma,lambda,gamma");
        model = Cjd{p[0], p[1], p[2], p[3]};
    } else if (config.model_family == "ljd" || config.model_family == "ljd-merton") {
        need(5, "mu,sigma,lambda,mu_j,sigma_j");
        model = Ljd{p[0], p[1], p[2], p[3], p[4]};
    } else if (config.model_family == "kou") {
        need(6, "mu,sigma,lambda,p,eta1,eta2");
        model = KouDe{p[0], p[1], p[2], p[3], p[4], p[5]};
    } else if (config.model_family == "vg") {
        need(4, "mu,m,delta,kappa");
        model = Vg{p[0], p[1], p[2], p[3]};
    } else {
        throw error(errc::bad_config, "unknown model family '" + config.model_family + "'");
    }
    require_valid(model);
    return model;
}

namespace {

MeasureClass class_from_config(const RunConfig& c) {
    if (c.measure == "exp") return MeasureClass::exponential;
    if (c.measure == "lin") return MeasureClass::linear;
    throw error(errc::bad_config, "measure must be 'exp' or 'lin'");
}

TruncationPolicy policy_from_config(const RunConfig& c) {
    if (c.n_fixed >= 0) return TruncationPolicy::fixed(c.n_fixed);
    return TruncationPolicy::adaptive(c.adaptive_mass);
}

json config_echo(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["model"] = c.model_family;
    j["model_params"] = c.model_params;
    j["measure"] = c.measure;
    if (c.psi) j["psi"] = *c.psi;
    if (c.phi) j["phi"] = *c.phi;
    if (!c.psi_grid.empty()) j["psi_grid"] = c.psi_grid;
    j["method"] = c.method;
    j["strike"] = c.strike;
    j["spot"] = c.spot;
    j["rate"] = c.rate;
    j["expiry"] = c.expiry;
    j["n_fixed"] = c.n_fixed;
    j["adaptive_mass"] = c.adaptive_mass;
    j["paths"] = c.paths;
    j["steps"] = c.steps;
    j["seed"] = c.seed;
    j["format"] = c.format;
    return j;
}

std::string write_artifact(const RunConfig& c, const std::string& name,
                           const std::string& body) {
    namespace fs = std::filesystem;
    fs::create_directories(c.out_dir);
    const fs::path p = fs::path(c.out_dir) / name;
    std::ofstream out(p);
    if (!out) throw error(errc::io_error, "cannot write artifact: " + p.string());
    out << body;
    return p.string();
}

double resolve_psi(const RunConfig& c, const ModelSpec& model) {
    if (c.phi) {
        const auto* cjd = std::get_if<Cjd>(&model);
        if (!cjd)
            throw error(errc::bad_config, "--phi reparameterization is cjd-only");
        return eta_psi_from_phi(*cjd, c.rate, *c.phi, class_from_config(c)).second;
    }
    return c.psi.value_or(0.0);
}

// builds the pricing-measure characteristic function for any family
CharFn charfn_from_config(const RunConfig& c, const ModelSpec& model, double psi) {
    const MeasureClass cls = class_from_config(c);
    const double T = c.expiry;
    if (const auto* g = std::get_if<Gbm>(&model)) return charfn_gbm_rn(g->sigma, c.rate, T);
    if (const auto* m = std::get_if<Cjd>(&model)) {
        const double eta = solve_eta_cjd(*m, c.rate, psi, cls);
        return charfn_cjd_2nd(*m, eta, psi, cls, T);
    }
    const double eta = solve_eta_jd(model, c.rate, psi, cls);
    if (const auto* m = std::get_if<Ljd>(&model)) return charfn_ljd_2nd(*m, eta, psi, T);
    if (const auto* m = std::get_if<KouDe>(&model))
        return psi == 0.0 ? charfn_kou_1st(*m, eta, T) : charfn_kou_2nd(*m, eta, psi, T);
    const auto& m = std::get<Vg>(model);
    return psi == 0.0 ? charfn_vg_1st(m, eta, T) : charfn_vg_2nd(m, eta, psi, T);
}

std::vector<std::string> run_fit(const RunConfig& c) {
    if (c.prices_path.empty())
        throw error(errc::bad_config, "fit: a prices file is required");
    auto series = log_returns_from_prices(load_prices(c.prices_path));
    FitFamily family;
    if (c.model_family == "gbm")
        family = FitFamily::gbm;
    else if (c.model_family == "cjd")
        family = FitFamily::cjd;
    else if (c.model_family == "ljd")
        family = FitFamily::ljd;
    else
        throw error(errc::bad_config, "fit supports model families gbm, cjd, ljd");
    FitConfig fc;
    fc.seed = c.seed;
    auto fit = fit_mle(series, family, std::nullopt, fc);

    json j;
    j["config"] = config_echo(c);
    j["family"] = family_name(fit.model);
    j["loglik"] = fit.loglik;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["grad_norm"] = fit.grad_norm;
    j["n_observations"] = series.observations.size();
    j["dt"] = series.dt;
    json params;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Gbm>) {
                params = {{"mu", m.mu}, {"sigma", m.sigma}};
            } else if constexpr (std::is_same_v<M, Cjd>) {
                params = {{"mu", m.mu}, {"sigma", m.sigma}, {"lambda", m.lambda},
                          {"gamma", m.gamma}};
            } else if constexpr (std::is_same_v<M, Ljd>) {
                params = {{"mu", m.mu}, {"sigma", m.sigma}, {"lambda", m.lambda},
                          {"mu_j", m.mu_j}, {"sigma_j", m.sigma_j}};
            }
        },
        fit.model);
    j["parameters"] = params;
    return {write_artifact(c, "fit_result.json", j.dump(2) + "\n")};
}

std::vector<std::string> run_price(const RunConfig& c) {
    const ModelSpec model = model_from_config(c);
    const MarketContext ctx{c.rate, c.spot, 0.0, c.expiry};
    const double psi = resolve_psi(c, model);
    const auto policy = policy_from_config(c);
    double price = 0.0;
    json extra;
    if (c.method == "series") {
        const auto* m = std::get_if<Cjd>(&model);
        if (!m) throw error(errc::bad_config, "method 'series' requires a cjd model");
        auto measure = make_cjd_measure(*m, c.rate, psi, class_from_config(c));
        auto detail = cjd_call_detail(ctx, c.strike, *m, measure, policy);
        price = detail.price;
        extra["n_terms"] = detail.n_used;
        extra["error_bound"] = detail.error_bound;
        extra["eta"] = measure.eta;
        extra["lambda_rn"] = measure.lambda_rn;
    } else if (c.method == "explicit") {
        const auto* m = std::get_if<Ljd>(&model);
        if (!m) throw error(errc::bad_config, "method 'explicit' requires an ljd model");
        const double theta = solve_eta_jd(model, c.rate, psi, class_from_config(c));
        price = ljd_call_second_order(ctx, c.strike, *m, theta, psi, policy);
        extra["theta"] = theta;
    } else if (c.method == "fft") {
        price = fft_price_from_config(c, model);
    } else if (c.method == "mc") {
        const auto* m = std::get_if<Cjd>(&model);
        if (!m) throw error(errc::bad_config, "method 'mc' simulates cjd models only");
        auto measure = make_cjd_measure(*m, c.rate, psi, class_from_config(c));
        auto ps = simulate_cjd_rpsi(*m, measure, c.rate, c.spot, c.expiry, c.paths,
                                    c.steps, c.seed);
        auto got = mc_price(ps, Payoff::call(c.strike), c.rate);
        price = got.price;
        extra["std_error"] = got.std_error;
    } else {
        throw error(errc::bad_config, "unknown method '" + c.method + "'");
    }

    json j;
    j["config"] = config_echo(c);
    j["price"] = price;
    j["psi"] = psi;
    j["detail"] = extra;
    return {write_artifact(c, "price.json", j.dump(2) + "\n")};
}

std::vector<std::string> run_interval(const RunConfig& c) {
    const ModelSpec model = model_from_config(c);
    const auto* m = std::get_if<Cjd>(&model);
    if (!m) throw error(errc::bad_config, "interval requires a cjd model");
    if (c.psi_grid.empty())
        throw error(errc::bad_config, "interval requires --psi-grid lo:hi:step");
    const MarketContext ctx{c.rate, c.spot, 0.0, c.expiry};
    auto interval = cjd_price_interval(ctx, c.strike, *m, class_from_config(c),
                                       c.psi_grid, policy_from_config(c));
    std::ostringstream csv;
    csv << "psi,price,ok\n";
    for (const auto& pt : interval.points)
        csv << fmt17(pt.psi) << ',' << fmt17(pt.price) << ',' << (pt.ok ? 1 : 0) << '\n';

    json j;
    j["config"] = config_echo(c);
    j["lower_bound"] = interval.lower_bound;
    j["upper_bound"] = interval.upper_bound;
    json pts = json::array();
    for (const auto& pt : interval.points) {
        json q = {{"psi", pt.psi}, {"price", pt.price}, {"ok", pt.ok}};
        if (!pt.ok) q["diagnostic"] = pt.diagnostic;
        pts.push_back(q);
    }
    j["points"] = pts;
    return {write_artifact(c, "interval.csv", csv.str()),
            write_artifact(c, "interval.json", j.dump(2) + "\n")};
}

std::vector<std::string> run_hedge(const RunConfig& c) {
    const ModelSpec model = model_from_config(c);
    HedgeConfig hc;
    hc.path_model = model;
    hc.r = c.rate;
    hc.x0 = c.spot;
    hc.option = {c.strike, OptionKind::call, c.expiry};
    hc.rebalance_steps = c.steps;
    hc.n_paths = c.paths;
    hc.seed = c.seed;
    hc.policy = policy_from_config(c);
    if (std::holds_alternative<Gbm>(model)) {
        hc.pricer = {PricerSpec::Kind::bs, model, 0.0, class_from_config(c)};
    } else if (std::holds_alternative<Cjd>(model)) {
        const double psi = resolve_psi(c, model);
        hc.pricer = {c.psi || c.phi ? PricerSpec::Kind::cjd_second_order
                                    : PricerSpec::Kind::cjd_first_order,
                     model, psi, class_from_config(c)};
    } else if (std::holds_alternative<Ljd>(model)) {
        hc.pricer = {PricerSpec::Kind::ljd_explicit, model, c.psi.value_or(0.0),
                     class_from_config(c)};
    } else {
        throw error(errc::bad_config, "hedge supports gbm, cjd, ljd models");
    }
    auto report = hedge_simulate(hc);

    std::ostringstream csv;
    csv << "path,pnl\n";
    for (size_t i = 0; i < report.pnl.size(); ++i)
        csv << i << ',' << fmt17(report.pnl[i]) << '\n';

    json j;
    j["config"] = config_echo(c);
    j["var_5"] = report.var_5;
    j["es_5"] = report.es_5;
    j["n_paths"] = report.pnl.size();
    double mean = 0.0;
    for (double v : report.pnl) mean += v;
    j["mean_pnl"] = mean / report.pnl.size();
    return {write_artifact(c, "hedge_report.json", j.dump(2) + "\n"),
            write_artifact(c, "pnl.csv", csv.str())};
}

std::vector<std::string> run_calibrate(const RunConfig& c) {
    if (c.quotes_path.empty() || c.quotes_sidecar.empty())
        throw error(errc::bad_config, "calibrate: quotes csv and sidecar are required");
    CalibFamily family;
    if (c.model_family == "cjd-1st")
        family = CalibFamily::cjd_first;
    else if (c.model_family == "cjd-2nd")
        family = CalibFamily::cjd_second;
    else if (c.model_family == "ljd-merton")
        family = CalibFamily::ljd_merton;
    else
        throw error(errc::bad_config,
                    "calibrate supports cjd-1st, cjd-2nd, ljd-merton");
    auto quotes = load_quotes(c.quotes_path, c.quotes_sidecar);
    CalibConfig cc;
    cc.seed = c.seed;
    cc.policy = policy_from_config(c);
    auto fit = calibrate(family, quotes, std::nullopt, cc);

    std::ostringstream csv;
    csv << "strike,mid,model_price,residual,iv_market,iv_model\n";
    for (size_t i = 0; i < quotes.rows.size(); ++i)
        csv << fmt17(quotes.rows[i].strike) << ',' << fmt17(quotes.rows[i].mid) << ','
            << fmt17(quotes.rows[i].mid + fit.residuals[i]) << ','
            << fmt17(fit.residuals[i]) << ',' << fmt17(fit.iv_market[i]) << ','
            << fmt17(fit.iv_model[i]) << '\n';

    json j;
    j["config"] = config_echo(c);
    j["family"] = c.model_family;
    j["rmse"] = fit.rmse;
    j["psi"] = fit.psi;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    json params;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Cjd>) {
                params = {{"mu", m.mu}, {"sigma", m.sigma}, {"lambda", m.lambda},
                          {"gamma", m.gamma}};
            } else if constexpr (std::is_same_v<M, Ljd>) {
                params = {{"mu", m.mu}, {"sigma", m.sigma}, {"lambda", m.lambda},
                          {"mu_j", m.mu_j}, {"sigma_j", m.sigma_j}};
            }
        },
        fit.model);
    j["parameters"] = params;
    return {write_artifact(c, "calib_result.json", j.dump(2) + "\n"),
            write_artifact(c, "iv_curve.csv", csv.str())};
}

std::vector<std::string> run_charfn_check(const RunConfig& c) {
    struct Case {
        std::string label;
        CharFn cf;
    };
    std::vector<Case> cases;
    const double r = c.rate, T = c.expiry;
    const Cjd cjd{0.05, 0.2, 1.0, 0.1};
    for (double psi : {-400.0, -10.0, 0.0, 10.0, 150.0})
        for (auto cls : {MeasureClass::exponential, MeasureClass::linear}) {
            const double eta = solve_eta_cjd(cjd, r, psi, cls);
            std::ostringstream label;
            label << "cjd/" << (cls == MeasureClass::exponential ? "exp" : "lin")
                  << "/psi=" << psi;
            cases.push_back({label.str(), charfn_cjd_2nd(cjd, eta, psi, cls, T)});
        }
    const Ljd ljd{0.05, 0.2, 0.5, -0.05, 0.1};
    for (double psi : {-1.0, 0.0}) {
        const double eta =
            solve_eta_jd(ModelSpec{ljd}, r, psi, MeasureClass::exponential);
        std::ostringstream label;
        label << "ljd/exp/psi=" << psi;
        cases.push_back({label.str(), charfn_ljd_2nd(ljd, eta, psi, T)});
    }
    const KouDe kou{0.05, 0.2, 0.8, 0.4, 10.0, 5.0};
    {
        const double eta =
            solve_eta_jd(ModelSpec{kou}, r, -0.5, MeasureClass::exponential);
        cases.push_back({"kou/exp/psi=-0.5", charfn_kou_2nd(kou, eta, -0.5, T)});
        const double eta0 =
            solve_eta_jd(ModelSpec{kou}, r, 0.0, MeasureClass::exponential);
        cases.push_back({"kou/exp/first-order", charfn_kou_1st(kou, eta0, T)});
    }
    const Vg vg{0.05, -0.1, 0.25, 0.3};
    {
        const double th = solve_eta_jd(ModelSpec{vg}, r, 0.0, MeasureClass::exponential);
        cases.push_back({"vg/exp/first-order", charfn_vg_1st(vg, th, T)});
    }

    json rows = json::array();
    bool all_pass = true;
    for (const auto& cs : cases) {
        const cplx at0 = cs.cf(cplx(0.0, 0.0));
        const cplx mart = cs.cf(cplx(0.0, -1.0));
        const double err0 = std::abs(at0 - 1.0);
        const double errm = std::abs(mart - std::exp(r * T));
        const bool pass = err0 < 1e-12 && errm < 1e-7;
        all_pass = all_pass && pass;
        rows.push_back({{"case", cs.label},
                        {"phi0_error", err0},
                        {"martingale_error", errm},
                        {"pass", pass}});
    }
    json j;
    j["config"] = config_echo(c);
    j["cases"] = rows;
    j["all_pass"] = all_pass;
    auto files = std::vector<std::string>{
        write_artifact(c, "charfn_check.json", j.dump(2) + "\n")};
    if (!all_pass)
        throw error(errc::solver_failure, "charfn-check: martingale identity violated");
    return files;
}

}  // namespace

double fft_price_from_config(const RunConfig& config, const ModelSpec& model) {
    const double psi = resolve_psi(config, model);
    auto cf = charfn_from_config(config, model, psi);
    return fft_call(cf, config.spot, config.rate, config.strike);
}

std::vector<double> parse_psi_grid(const std::string& spec) {
    double lo, hi, step;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || !is.eof())
        throw error(errc::bad_config, "psi grid: expected lo:hi:step, got '" + spec + "'");
    if (!(step > 0.0) || hi < lo)
        throw error(errc::bad_config, "psi grid: need step > 0 and hi >= lo");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
    for (int i = 0; i <= n; ++i) out.push_back(lo + i * step);
    if (out.back() < hi - 1e-9 * std::max(1.0, std::abs(hi))) out.push_back(hi);
    return out;
}

RunConfig run_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw error(errc::bad_config, std::string("config: bad JSON: ") + e.what());
    }
    if (!j.is_object()) throw error(errc::bad_config, "config: expected a JSON object");
    RunConfig c;
    for (const auto& [key, val] : j.items()) {
        try {
            if (key == "command") c.command = val.get<std::string>();
            else if (key == "model") c.model_family = val.get<std::string>();
            else if (key == "model_params") c.model_params = val.get<std::vector<double>>();
            else if (key == "measure") c.measure = val.get<std::string>();
            else if (key == "psi") c.psi = val.get<double>();
            else if (key == "phi") c.phi = val.get<double>();
            else if (key == "psi_grid") {
                if (val.is_string())
                    c.psi_grid = parse_psi_grid(val.get<std::string>());
                else
                    c.psi_grid = val.get<std::vector<double>>();
            }
            else if (key == "method") c.method = val.get<std::string>();
            else if (key == "strike") c.strike = val.get<double>();
            else if (key == "spot") c.spot = val.get<double>();
            else if (key == "rate") c.rate = val.get<double>();
            else if (key == "expiry") c.expiry = val.get<double>();
            else if (key == "n_fixed") c.n_fixed = val.get<int>();
            else if (key == "adaptive_mass") c.adaptive_mass = val.get<double>();
            else if (key == "paths") c.paths = val.get<int>();
            else if (key == "steps") c.steps = val.get<int>();
            else if (key == "seed") c.seed = val.get<std::uint64_t>();
            else if (key == "prices") c.prices_path = val.get<std::string>();
            else if (key == "quotes") c.quotes_path = val.get<std::string>();
            else if (key == "quotes_sidecar") c.quotes_sidecar = val.get<std::string>();
            else if (key == "out_dir") c.out_dir = val.get<std::string>();
            else if (key == "format") c.format = val.get<std::string>();
            else throw error(errc::bad_config, "config: unknown key '" + key + "'");
        } catch (const json::exception& e) {
            throw error(errc::bad_config,
                        "config: bad value for '" + key + "': " + e.what());
        }
    }
    if (c.command.empty()) throw error(errc::bad_config, "config: 'command' is required");
    return c;
}

std::vector<std::string> dispatch(const RunConfig& config) {
    if (config.command == "fit") return run_fit(config);
    if (config.command == "price") return run_price(config);
    if (config.command == "interval") return run_interval(config);
    if (config.command == "hedge") return run_hedge(config);
    if (config.command == "calibrate") return run_calibrate(config);
    if (config.command == "charfn-check") return run_charfn_check(config);
    throw error(errc::bad_config, "unknown command '" + config.command + "'");
}

}  // namespace es2
