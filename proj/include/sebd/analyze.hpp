#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sebd/fits.hpp"
#include "sebd/sweep.hpp"

namespace sebd {

// Volume-law fit mean_peak = alpha * L + c over the noiseless points at one
// depth.
struct DepthFit {
    double alpha = 0.0, alpha_se = 0.0;
    double c = 0.0, c_se = 0.0;
    uint32_t n_points = 0;
};

// Saturation fit mean_peak = beta * T + c over the depths at one noise rate.
struct NoiseFit {
    double beta = 0.0, beta_se = 0.0;
    double c = 0.0, c_se = 0.0;
    uint32_t n_points = 0;
};

// Tail exponent of the pooled length histogram at one (p, T).
struct TailFit {
    double p = 0.0;
    uint32_t T = 0;
    double gamma = 0.0, gamma_se = 0.0;
    double log_amplitude = 0.0;
};

// Exponential decay of mean CMI vs d_C at one (p, T); gamma = decay / W_b with
// W_b = T/2 + 1 so it is directly comparable to the length-tail exponent.
// The fit uses buffers spanning at least ell0 sites (d_C * W_b >= ell0), the
// same generator population the length tail is fitted over.
struct CmiFit {
    double p = 0.0;
    uint32_t T = 0;
    uint32_t w_b = 0;
    double decay = 0.0, decay_se = 0.0;
    double gamma = 0.0, gamma_se = 0.0;
};

struct EtaFit {
    double eta = 0.0, eta_se = 0.0;
    uint32_t n_points = 0;
};

struct FitResults {
    uint32_t ell0 = 10;
    double eta_default = 21.3;
    uint32_t bootstrap = 0;                   // resample count; 0 means plain OLS errors
    std::map<uint32_t, DepthFit> alpha_by_t;  // noiseless points only
    std::optional<uint32_t> t_c;
    std::map<double, NoiseFit> beta_by_p;  // noisy points only
    std::optional<PowerLawFit> beta_power;
    std::vector<TailFit> gamma_len;  // ascending (p, T)
    std::vector<CmiFit> gamma_cmi;   // ascending (p, T), noiseless points included
    std::optional<EtaFit> eta;       // gamma_len refit through the origin in p/T
};

// Runs every applicable fit over the aggregates under a run_sweep output
// directory.  Groups lacking enough points (or tail bins) are simply absent
// from the result; structural problems (missing files, bad CSV) throw
// std::runtime_error.  bootstrap > 0 replaces the standard errors of the
// cross-point fits (alpha, beta, eta) with parametric-bootstrap estimates
// over that many resamples of the per-point inputs; seeding is fixed, so
// repeated calls agree bit for bit.
FitResults analyze_sweep(const std::string& sweep_dir, std::optional<uint32_t> ell0 = {},
                         double eta_default = 21.3, uint32_t bootstrap = 0);

// Same fits over already-loaded aggregates (analyze_sweep loads then calls
// this).
FitResults analyze_points(const std::vector<PointAggregate>& points, uint32_t ell0,
                          double eta_default, uint32_t bootstrap = 0);

std::string fit_results_to_json(const FitResults& fits);  // pretty-printed, key-sorted

}  // namespace sebd
