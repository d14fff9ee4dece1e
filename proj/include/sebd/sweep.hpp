#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sebd/fits.hpp"
#include "sebd/sebd.hpp"

namespace sebd {

// Monte-Carlo sweep over grids of (L, W, T, p).  Each grid point runs
// n_realizations independent trajectories whose seeds derive from
// (master_seed, grid point, realization index), so output bytes depend only on
// the experiment parameters -- never on thread count or completion order.
struct SweepConfig {
    std::vector<uint32_t> Ls, Ws, Ts;
    std::vector<double> ps;
    uint32_t n_realizations = 1000;
    uint64_t master_seed = 0;
    std::vector<uint32_t> cmi_buffers;   // d_C row counts measured at the peak
    uint32_t ell0 = 10;                  // tail threshold, recorded for analyze
    std::string out_dir;
    std::optional<CutoffPolicy> cutoff;  // abort mode when set
    int threads = 0;                     // <= 0: SEBD_THREADS env, then OpenMP default
    bool dump_records = true;            // write records.jsonl per grid point

    void validate() const;  // throws std::invalid_argument
};

// Deterministic per-trajectory seed; the geometry's gate seed and the
// trajectory's measurement/noise streams are derived from it in turn.
uint64_t trajectory_seed(uint64_t master_seed, uint32_t L, uint32_t W, uint32_t T, double p,
                         uint32_t realization);

// SEBD_THREADS (positive integer) wins, then `requested` if >= 1, then the
// OpenMP default.
int resolve_threads(int requested);

struct BatchResult {
    std::vector<TrajectoryRecord> records;  // ascending realization index, failures dropped
    uint32_t n_failed = 0;
};

// The parallel kernel: n trajectories of one grid point.  threads == 1 runs
// the plain serial loop (the reference path benchmarked against the OpenMP
// one); results are identical either way.
BatchResult run_batch(uint32_t L, uint32_t W, uint32_t T, double p, uint64_t master_seed,
                      uint32_t n, const std::vector<uint32_t>& cmi_buffers,
                      const CutoffPolicy* cutoff, int threads);

// Pools peak-snapshot generator statistics across records sharing (L, W, T, p).
// Centers: label ceil(com), so a half-integer center x+1/2 lands on the site
// immediately to its right.  Lengths: label len.  Masses normalized by the
// pooled generator count N_g.
std::pair<Histogram, Histogram> aggregate_histograms(const std::vector<TrajectoryRecord>& records);

struct CmiPoint {
    uint32_t d_c = 0;
    double mean = 0.0;
    double se = 0.0;
    uint32_t n = 0;
};

// Mean (and standard error) of the peak-snapshot CMI per requested buffer
// size; every record must carry every requested d_C.
std::vector<CmiPoint> cmi_profile(const std::vector<TrajectoryRecord>& records,
                                  const std::vector<uint32_t>& d_c_list);

struct PointAggregate {
    uint32_t L = 0, W = 0, T = 0;
    double p = 0.0;
    uint32_t n_requested = 0, n_completed = 0, n_aborted = 0, n_failed = 0;
    // Indexed by 0-based column; completed trajectories only.
    std::vector<double> mean_s_op, se_s_op;
    double mean_peak = 0.0, se_peak = 0.0;
    double mean_t_peak = 0.0;  // 1-based, as serialized
    double mean_m_over_n = 0.0;
    double mean_w_b = 0.0;
    Histogram hist_c, hist_d;
    std::vector<CmiPoint> cmi;
    double abort_fraction = 0.0;  // n_aborted / (n_completed + n_aborted)
    double tvd_bound = 0.0;  // (n_completed + n_aborted) * T * exp(-lambda); 0 without cutoff
};

PointAggregate aggregate_point(uint32_t L, uint32_t W, uint32_t T, double p, uint32_t n_requested,
                               const BatchResult& batch, const std::vector<uint32_t>& cmi_buffers,
                               const std::optional<CutoffPolicy>& cutoff);

struct SweepResult {
    std::vector<PointAggregate> points;
    std::vector<std::string> point_dirs;  // relative to out_dir, same order
};

// Runs every grid point and writes per-point curve.csv, hist_c.csv,
// hist_d.csv, cmi.csv, point.json (plus records.jsonl when dump_records) under
// out_dir/<point>, and a top-level sweep.json manifest.
SweepResult run_sweep(const SweepConfig& config);

std::string point_dir_name(uint32_t L, uint32_t W, uint32_t T, double p);
void write_point_aggregate(const std::string& dir, const PointAggregate& agg);
PointAggregate read_point_aggregate(const std::string& dir);

// Shortest round-tripping decimal form (std::to_chars), used for every CSV
// cell and directory name so reruns are byte-identical.
std::string format_double(double v);

}  // namespace sebd
