#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sebd/clipped.hpp"
#include "sebd/geometry.hpp"
#include "sebd/tableau.hpp"

namespace sebd {

// Abort rule for SEBD sampling: stop the sweep the first time the recorded
// S_op exceeds lambda*T/(eta*p) bits, i.e. chi_cutoff = 2^(lambda*T/(eta*p)).
struct CutoffPolicy {
    double lambda = 10.0;
    double eta = 21.3;
    double epsilon = 1e-3;  // target TVD, used by the policy evaluator

    // +infinity when p == 0 (noiseless sweeps are never aborted).
    double threshold_bits(uint32_t T, double p) const;
};

struct TrajectoryRecord {
    uint64_t seed = 0;
    uint32_t L = 0, W = 0, T = 0;
    double p = 0.0;
    std::vector<std::vector<uint8_t>> bits;  // bits[t][r], one entry per sampled column
    std::vector<int> s_op_curve;             // pre-measurement S_op per processed column
    int s_op_peak = 0;
    uint32_t t_peak = 0;  // 0-based column of the earliest running maximum
    double m_over_n_at_peak = 0.0;
    uint32_t w_b_at_peak = 0;  // strip width in columns at the peak snapshot
    std::vector<GenStat> gen_stats_at_peak;
    std::vector<std::pair<uint32_t, double>> cmi_at_peak;  // (d_C rows, CMI bits)
    bool aborted = false;
    uint32_t abort_column = 0;  // 0-based, valid only when aborted
};

// One trajectory per line; columns, t_peak and abort_column are 1-based in the
// serialized form, bits are hex-packed per column (row 0 = least significant).
std::string record_to_json_line(const TrajectoryRecord& rec);
TrajectoryRecord record_from_json_line(const std::string& line);

// Boundary strip of the SEBD sweep: the conditional state of the active
// columns [next_column, next_column + width), stored row-major so the
// half-length row cut is contiguous. Gates are replayed from the light cone
// of each column; every (qubit, layer) noise slot is processed exactly once
// across the whole sweep, with an order-independent counter-based coin.
class BoundaryStrip {
  public:
    BoundaryStrip(const CircuitGeometry& geom, uint64_t meas_seed, uint64_t noise_seed);

    // Phases 1-3 for column t: grow the strip to the light cone, replay new
    // gates and noise slots in layer order, and return the pre-measurement
    // S_op across the half-length row cut. Columns must arrive in order.
    int advance(uint32_t t, double noise_p);
    // Phases 4-5: measure column t top to bottom, then discard it.
    std::vector<uint8_t> measure_column(uint32_t t);
    // advance + measure_column.
    std::vector<uint8_t> step(uint32_t t, double noise_p);

    int last_s_op() const { return last_s_op_; }
    const MixedTableau& tableau() const { return tab_; }
    uint32_t width() const { return col_hi_ - col_lo_; }
    uint32_t next_column() const { return col_lo_; }
    uint64_t noise_slots_processed() const { return noise_slots_; }

  private:
    void append_column();
    uint32_t local_index(uint32_t r, uint32_t c) const;

    const CircuitGeometry* geom_;
    uint64_t noise_seed_;
    MixedTableau tab_;
    uint32_t L_, W_;
    uint32_t col_lo_ = 0, col_hi_ = 0;
    bool advanced_ = false;
    int last_s_op_ = 0;
    uint64_t noise_slots_ = 0;
    std::vector<std::vector<char>> gate_done_;  // [layer][edge index]
    std::vector<char> noise_done_;              // [(r*W + c)*T + layer]
};

// Full SEBD sweep over all W columns. Peak-column statistics (generator
// endpoints, M/N, CMI for the requested centered row buffers) are taken from
// a snapshot of the strip cached whenever S_op reaches a new running maximum.
// Deterministic given (geom, p, seed).
TrajectoryRecord run_trajectory(const CircuitGeometry& geom, double p, uint64_t seed,
                                const std::vector<uint32_t>& cmi_buffers = {});

// Same sweep, but aborts (recorded, not thrown) the first time the
// pre-measurement S_op exceeds policy.threshold_bits(T, p).
TrajectoryRecord run_trajectory_with_cutoff(const CircuitGeometry& geom, double p, uint64_t seed,
                                            const CutoffPolicy& policy,
                                            const std::vector<uint32_t>& cmi_buffers = {});

}  // namespace sebd
