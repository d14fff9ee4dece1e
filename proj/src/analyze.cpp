#include "sebd/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace sebd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Sums per-bin counts across per-point histograms, renormalizing by the
// combined total.
Histogram pool_histograms(const std::vector<const Histogram*>& parts) {
    std::map<int64_t, double> counts;
    uint64_t total = 0;
    for (const Histogram* h : parts) {
        total += h->total_count;
        for (const auto& [bin, mass] : h->mass) counts[bin] += mass * double(h->total_count);
    }
    Histogram out;
    out.total_count = total;
    if (total == 0) return out;
    for (const auto& [bin, c] : counts) out.mass[bin] = c / double(total);
    return out;
}

// 1/se^2 weights when every point carries a positive error bar, unit weights
// otherwise (tiny grids can have identical peaks and hence zero spread).
std::vector<double> inverse_variance_weights(const std::vector<double>& ses) {
    std::vector<double> ws(ses.size(), 1.0);
    for (double se : ses)
        if (!(se > 0.0)) return ws;
    for (size_t i = 0; i < ses.size(); ++i) ws[i] = 1.0 / (ses[i] * ses[i]);
    return ws;
}

size_t distinct_count(std::vector<double> vals) {
    std::sort(vals.begin(), vals.end());
    return size_t(std::unique(vals.begin(), vals.end()) - vals.begin());
}

bool usable(const PointAggregate& pt) { return pt.n_completed > 0 && !std::isnan(pt.mean_peak); }

double sample_stddev(const std::vector<double>& vals) {
    if (vals.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= double(vals.size());
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / double(vals.size() - 1));
}

// Parametric bootstrap for a cross-point fit: jitter each input by its
// standard error, refit, and take the spread of the refit estimates.
template <typename Refit>
void bootstrap_errors(std::mt19937_64& rng, uint32_t resamples, const std::vector<double>& ys,
                      const std::vector<double>& ses, Refit refit, double& slope_se,
                      double* intercept_se) {
    std::normal_distribution<double> unit;
    std::vector<double> slopes, intercepts, jittered(ys.size());
    slopes.reserve(resamples);
    intercepts.reserve(resamples);
    for (uint32_t b = 0; b < resamples; ++b) {
        for (size_t i = 0; i < ys.size(); ++i) jittered[i] = ys[i] + ses[i] * unit(rng);
        const LinearFit fit = refit(jittered);
        slopes.push_back(fit.slope);
        intercepts.push_back(fit.intercept);
    }
    slope_se = sample_stddev(slopes);
    if (intercept_se) *intercept_se = sample_stddev(intercepts);
}

}  // namespace

FitResults analyze_points(const std::vector<PointAggregate>& points, uint32_t ell0,
                          double eta_default, uint32_t bootstrap) {
    FitResults out;
    out.ell0 = ell0;
    out.eta_default = eta_default;
    out.bootstrap = bootstrap;
    std::mt19937_64 boot_rng(0x626f6f74ULL);

    // Volume-law slope per depth over the noiseless points.
    std::map<uint32_t, std::vector<const PointAggregate*>> noiseless_by_t;
    for (const PointAggregate& pt : points)
        if (pt.p == 0.0 && usable(pt)) noiseless_by_t[pt.T].push_back(&pt);
    for (const auto& [T, pts] : noiseless_by_t) {
        std::vector<double> xs, ys, ses;
        for (const PointAggregate* pt : pts) {
            xs.push_back(double(pt->L));
            ys.push_back(pt->mean_peak);
            ses.push_back(pt->se_peak);
        }
        if (distinct_count(xs) < 2) continue;
        const std::vector<double> ws = inverse_variance_weights(ses);
        LinearFit fit = fit_linear(xs, ys, ws);
        if (bootstrap > 0)
            bootstrap_errors(
                boot_rng, bootstrap, ys, ses,
                [&](const std::vector<double>& jy) { return fit_linear(xs, jy, ws); },
                fit.slope_se, &fit.intercept_se);
        out.alpha_by_t[T] = {fit.slope, fit.slope_se, fit.intercept, fit.intercept_se,
                             uint32_t(xs.size())};
    }

    if (!out.alpha_by_t.empty()) {
        std::map<uint32_t, AlphaEstimate> alphas;
        for (const auto& [T, fit] : out.alpha_by_t) alphas[T] = {fit.alpha, fit.alpha_se};
        bool consecutive = true;
        for (auto it = std::next(alphas.begin()); it != alphas.end(); ++it)
            consecutive = consecutive && it->first == std::prev(it)->first + 1;
        if (consecutive) out.t_c = detect_critical_depth(alphas);
    }

    // Saturation slope per noise rate over depth.
    std::map<double, std::vector<const PointAggregate*>> noisy_by_p;
    for (const PointAggregate& pt : points)
        if (pt.p > 0.0 && usable(pt)) noisy_by_p[pt.p].push_back(&pt);
    for (const auto& [p, pts] : noisy_by_p) {
        std::vector<double> xs, ys, ses;
        for (const PointAggregate* pt : pts) {
            xs.push_back(double(pt->T));
            ys.push_back(pt->mean_peak);
            ses.push_back(pt->se_peak);
        }
        if (distinct_count(xs) < 2) continue;
        const std::vector<double> ws = inverse_variance_weights(ses);
        LinearFit fit = fit_linear(xs, ys, ws);
        if (bootstrap > 0)
            bootstrap_errors(
                boot_rng, bootstrap, ys, ses,
                [&](const std::vector<double>& jy) { return fit_linear(xs, jy, ws); },
                fit.slope_se, &fit.intercept_se);
        out.beta_by_p[p] = {fit.slope, fit.slope_se, fit.intercept, fit.intercept_se,
                            uint32_t(xs.size())};
    }

    std::vector<double> power_ps, power_betas;
    for (const auto& [p, fit] : out.beta_by_p) {
        if (fit.beta <= 0.0) continue;
        power_ps.push_back(p);
        power_betas.push_back(fit.beta);
    }
    if (power_ps.size() >= 3) out.beta_power = fit_power_law(power_ps, power_betas);

    // Length-tail exponent over (p, T) groups, pooling histograms across L/W.
    std::map<std::pair<double, uint32_t>, std::vector<const PointAggregate*>> by_pt;
    for (const PointAggregate& pt : points)
        if (usable(pt)) by_pt[{pt.p, pt.T}].push_back(&pt);
    for (const auto& [key, pts] : by_pt) {
        if (key.first <= 0.0) continue;
        std::vector<const Histogram*> parts;
        for (const PointAggregate* pt : pts) parts.push_back(&pt->hist_d);
        const Histogram pooled = pool_histograms(parts);
        try {
            const ExpTailFit fit = fit_exponential_tail(pooled, double(ell0));
            out.gamma_len.push_back(
                {key.first, key.second, fit.gamma, fit.gamma_se, fit.log_amplitude});
        } catch (const std::runtime_error&) {
            // Too little tail mass at this grid point; nothing to report.
        }
    }

    // CMI decay over (p, T) groups, n-weighted pooling of the per-point means.
    // Only buffers spanning at least ell0 sites enter the fit: the generators
    // crossing them are exactly the ones the length tail is fitted over.
    for (const auto& [key, pts] : by_pt) {
        const uint32_t w_b = key.second / 2 + 1;
        std::map<uint32_t, std::pair<double, uint64_t>> pooled;  // d_c -> (sum n*mean, sum n)
        for (const PointAggregate* pt : pts)
            for (const CmiPoint& cp : pt->cmi) {
                if (std::isnan(cp.mean)) continue;
                if (cp.d_c * w_b < ell0) continue;
                pooled[cp.d_c].first += double(cp.n) * cp.mean;
                pooled[cp.d_c].second += cp.n;
            }
        std::vector<double> xs, ys;
        for (const auto& [dc, acc] : pooled) {
            if (acc.second == 0) continue;
            const double mean = acc.first / double(acc.second);
            if (mean <= 0.0) continue;
            xs.push_back(double(dc));
            ys.push_back(std::log(mean));
        }
        if (distinct_count(xs) < 3) continue;
        const LinearFit fit = fit_linear(xs, ys);
        out.gamma_cmi.push_back({key.first, key.second, w_b, -fit.slope, fit.slope_se,
                                 -fit.slope / double(w_b), fit.slope_se / double(w_b)});
    }

    if (!out.gamma_len.empty()) {
        std::vector<double> xs, ys, ses;
        for (const TailFit& fit : out.gamma_len) {
            xs.push_back(fit.p / double(fit.T));
            ys.push_back(fit.gamma);
            ses.push_back(fit.gamma_se);
        }
        const std::vector<double> ws = inverse_variance_weights(ses);
        LinearFit fit = fit_proportional(xs, ys, ws);
        if (bootstrap > 0)
            bootstrap_errors(
                boot_rng, bootstrap, ys, ses,
                [&](const std::vector<double>& jy) { return fit_proportional(xs, jy, ws); },
                fit.slope_se, nullptr);
        out.eta = EtaFit{fit.slope, fit.slope_se, uint32_t(xs.size())};
    }
    return out;
}

FitResults analyze_sweep(const std::string& sweep_dir, std::optional<uint32_t> ell0,
                         double eta_default, uint32_t bootstrap) {
    const fs::path base(sweep_dir);
    std::ifstream in(base / "sweep.json", std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + (base / "sweep.json").string());
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error("bad sweep.json in " + sweep_dir + ": " + e.what());
    }
    uint32_t tail_cut = 10;
    if (ell0)
        tail_cut = *ell0;
    else if (manifest.contains("ell0"))
        tail_cut = manifest.at("ell0").get<uint32_t>();
    std::vector<PointAggregate> points;
    if (!manifest.contains("points"))
        throw std::runtime_error("sweep.json lacks a points list in " + sweep_dir);
    for (const auto& name : manifest.at("points"))
        points.push_back(read_point_aggregate((base / name.get<std::string>()).string()));
    return analyze_points(points, tail_cut, eta_default, bootstrap);
}

std::string fit_results_to_json(const FitResults& fits) {
    json j;
    j["schema_version"] = 1;
    j["ell0"] = fits.ell0;
    j["eta_default"] = fits.eta_default;
    j["bootstrap"] = fits.bootstrap;

    json alpha = json::object();
    for (const auto& [T, fit] : fits.alpha_by_t)
        alpha[std::to_string(T)] = {{"alpha", fit.alpha},
                                    {"alpha_se", fit.alpha_se},
                                    {"c", fit.c},
                                    {"c_se", fit.c_se},
                                    {"n_points", fit.n_points}};
    j["alpha_T"] = alpha;
    j["t_c"] = fits.t_c ? json(*fits.t_c) : json(nullptr);

    json beta = json::object();
    for (const auto& [p, fit] : fits.beta_by_p)
        beta[format_double(p)] = {{"beta", fit.beta},
                                  {"beta_se", fit.beta_se},
                                  {"c", fit.c},
                                  {"c_se", fit.c_se},
                                  {"n_points", fit.n_points}};
    j["beta_p"] = beta;
    j["beta_power"] = fits.beta_power
                          ? json{{"exponent", fits.beta_power->exponent},
                                 {"exponent_se", fits.beta_power->exponent_se},
                                 {"log_amplitude", fits.beta_power->log_amplitude}}
                          : json(nullptr);

    json glen = json::array();
    for (const TailFit& fit : fits.gamma_len)
        glen.push_back({{"p", fit.p},
                        {"T", fit.T},
                        {"gamma", fit.gamma},
                        {"gamma_se", fit.gamma_se},
                        {"log_amplitude", fit.log_amplitude}});
    j["gamma_len"] = glen;

    json gcmi = json::array();
    for (const CmiFit& fit : fits.gamma_cmi)
        gcmi.push_back({{"p", fit.p},
                        {"T", fit.T},
                        {"w_b", fit.w_b},
                        {"decay", fit.decay},
                        {"decay_se", fit.decay_se},
                        {"gamma", fit.gamma},
                        {"gamma_se", fit.gamma_se}});
    j["gamma_cmi"] = gcmi;

    j["eta"] = fits.eta ? json{{"eta", fits.eta->eta},
                               {"eta_se", fits.eta->eta_se},
                               {"n_points", fits.eta->n_points}}
                        : json(nullptr);
    return j.dump(2) + "\n";
}

}  // namespace sebd
