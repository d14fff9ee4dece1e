#include "sebd/fits.hpp"

#include <cmath>
#include <stdexcept>

namespace sebd {

LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::vector<double>& weights) {
    const size_t n = xs.size();
    if (ys.size() != n || (!weights.empty() && weights.size() != n))
        throw std::invalid_argument("fit_linear: input length mismatch");
    if (n < 2) throw std::runtime_error("fit_linear: need at least 2 points");
    double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (w < 0.0) throw std::invalid_argument("fit_linear: negative weight");
        s += w;
        sx += w * xs[i];
        sy += w * ys[i];
        sxx += w * xs[i] * xs[i];
        sxy += w * xs[i] * ys[i];
    }
    const double delta = s * sxx - sx * sx;
    if (!(delta > 0.0) || s <= 0.0)
        throw std::runtime_error("fit_linear: degenerate x values");
    LinearFit fit;
    fit.slope = (s * sxy - sx * sy) / delta;
    fit.intercept = (sxx * sy - sx * sxy) / delta;
    double ssr = 0;
    for (size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        const double r = ys[i] - fit.slope * xs[i] - fit.intercept;
        ssr += w * r * r;
    }
    const double variance = n > 2 ? ssr / double(n - 2) : 0.0;
    fit.slope_se = std::sqrt(variance * s / delta);
    fit.intercept_se = std::sqrt(variance * sxx / delta);
    return fit;
}

LinearFit fit_proportional(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& weights) {
    const size_t n = xs.size();
    if (ys.size() != n || (!weights.empty() && weights.size() != n))
        throw std::invalid_argument("fit_proportional: input length mismatch");
    if (n == 0) throw std::runtime_error("fit_proportional: need at least 1 point");
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        if (w < 0.0) throw std::invalid_argument("fit_proportional: negative weight");
        sxx += w * xs[i] * xs[i];
        sxy += w * xs[i] * ys[i];
    }
    if (!(sxx > 0.0)) throw std::runtime_error("fit_proportional: degenerate x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    double ssr = 0;
    for (size_t i = 0; i < n; ++i) {
        const double w = weights.empty() ? 1.0 : weights[i];
        const double r = ys[i] - fit.slope * xs[i];
        ssr += w * r * r;
    }
    const double variance = n > 1 ? ssr / double(n - 1) : 0.0;
    fit.slope_se = std::sqrt(variance / sxx);
    return fit;
}

ExpTailFit fit_exponential_tail(const Histogram& hist, double ell0) {
    std::vector<double> xs, ys;
    for (const auto& [label, mass] : hist.mass) {
        if (double(label) <= ell0 || mass <= 0.0) continue;
        xs.push_back(double(label));
        ys.push_back(std::log(mass));
    }
    if (xs.size() < 3)
        throw std::runtime_error("fit_exponential_tail: fewer than 3 nonzero bins beyond ell0");
    const LinearFit fit = fit_linear(xs, ys);
    return {-fit.slope, fit.slope_se, fit.intercept};
}

PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_power_law: length mismatch");
    if (xs.size() < 3) throw std::runtime_error("fit_power_law: need at least 3 points");
    std::vector<double> lx, ly;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0.0 || ys[i] <= 0.0)
            throw std::runtime_error("fit_power_law: inputs must be positive");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    const LinearFit fit = fit_linear(lx, ly);
    return {fit.slope, fit.slope_se, fit.intercept};
}

std::optional<uint32_t> detect_critical_depth(const std::map<uint32_t, AlphaEstimate>& alpha_by_T,
                                              double threshold) {
    if (alpha_by_T.empty()) throw std::invalid_argument("detect_critical_depth: no depths");
    uint32_t expected = alpha_by_T.begin()->first;
    for (const auto& [T, est] : alpha_by_T) {
        if (T != expected++)
            throw std::invalid_argument("detect_critical_depth: depths must be consecutive");
        if (est.alpha > threshold && est.alpha - 2.0 * est.alpha_se > 0.0) return T;
    }
    return std::nullopt;
}

double predict_s_max(double gamma) {
    if (!(gamma > 0.0)) throw std::domain_error("predict_s_max: gamma must be positive");
    return 1.0 / std::expm1(gamma);
}

double predict_cmi(double gamma, uint32_t w_b, uint32_t d_c) {
    if (!(gamma > 0.0)) throw std::domain_error("predict_cmi: gamma must be positive");
    if (w_b < 1) throw std::domain_error("predict_cmi: W_b must be at least 1");
    return std::exp(-gamma * double(w_b) * double(d_c)) / std::expm1(gamma);
}

CutoffEvaluation evaluate_cutoff_policy(const CutoffPolicy& policy, uint64_t N, uint32_t T,
                                        double p) {
    if (!(policy.lambda > 0.0) || !(policy.eta > 0.0) ||
        !(policy.epsilon > 0.0 && policy.epsilon < 1.0))
        throw std::invalid_argument("evaluate_cutoff_policy: invalid policy");
    if (N == 0 || T == 0)
        throw std::invalid_argument("evaluate_cutoff_policy: need N >= 1 and T >= 1");
    CutoffEvaluation ev;
    ev.chi_cutoff_log2 = policy.threshold_bits(T, p);
    ev.tvd_bound = double(N) * double(T) * std::exp(-policy.lambda);
    ev.lambda_global = std::log(double(N) * double(T) / policy.epsilon);
    ev.lambda_per_column = std::log(double(T) / policy.epsilon);
    return ev;
}

}  // namespace sebd
