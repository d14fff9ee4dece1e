#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sebd/sebd.hpp"

namespace sebd {

// Probability mass per integer bin label plus the pooled sample count.
// Center histograms C(x_c) bin each half-integer center x+1/2 into the site
// immediately to its right, i.e. label ceil(com); length histograms D(l) use
// the length itself.
struct Histogram {
    std::map<int64_t, double> mass;
    uint64_t total_count = 0;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
};

// Weighted least squares; empty weights means unit weights. Standard errors
// scale the covariance by the residual variance (zero when dof <= 0).
// Throws std::runtime_error on fewer than 2 points or degenerate x.
LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::vector<double>& weights = {});

// Weighted least squares through the origin (intercept pinned at zero); used
// to refit eta in gamma = eta * (p / T). Throws std::runtime_error on empty
// input or all-zero x.
LinearFit fit_proportional(const std::vector<double>& xs, const std::vector<double>& ys,
                           const std::vector<double>& weights = {});

struct ExpTailFit {
    double gamma = 0.0;  // decay exponent of mass ~ e^(-gamma * l)
    double gamma_se = 0.0;
    double log_amplitude = 0.0;
};

// Unweighted fit of log-mass vs l over the nonzero bins with label strictly
// above ell0. Throws std::runtime_error with fewer than 3 usable bins.
ExpTailFit fit_exponential_tail(const Histogram& hist, double ell0);

struct PowerLawFit {
    double exponent = 0.0;
    double exponent_se = 0.0;
    double log_amplitude = 0.0;
};

// Linear fit in log-log space; needs >= 3 strictly positive (x, y) pairs,
// otherwise throws std::runtime_error.
PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

struct AlphaEstimate {
    double alpha = 0.0;
    double alpha_se = 0.0;
};

// Smallest depth whose volume-law slope clears the threshold with a 2-sigma
// margin (alpha > threshold and alpha - 2*se > 0); nullopt when none does.
// Depths must be consecutive.
std::optional<uint32_t> detect_critical_depth(const std::map<uint32_t, AlphaEstimate>& alpha_by_T,
                                              double threshold = 0.01);

// Model value S_op^max = 1/(e^gamma - 1); gamma must be positive.
double predict_s_max(double gamma);

// Model value CMI(d_C) = e^(-gamma * W_b * d_C) / (e^gamma - 1).
double predict_cmi(double gamma, uint32_t w_b, uint32_t d_c);

struct CutoffEvaluation {
    double chi_cutoff_log2 = 0.0;     // lambda*T/(eta*p), base-2 exponent of chi_cutoff
    double tvd_bound = 0.0;           // N*T*e^(-lambda)
    double lambda_global = 0.0;       // preset lambda = ln(N*T/epsilon)
    double lambda_per_column = 0.0;   // preset lambda = ln(T/epsilon)
};

// Evaluates the abort policy: bond-dimension budget, the TVD upper bound, and
// the two preset exponents that hit a target accuracy epsilon.
CutoffEvaluation evaluate_cutoff_policy(const CutoffPolicy& policy, uint64_t N, uint32_t T,
                                        double p);

}  // namespace sebd
