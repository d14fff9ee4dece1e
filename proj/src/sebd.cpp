#include "sebd/sebd.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sebd/rng.hpp"

namespace sebd {

double CutoffPolicy::threshold_bits(uint32_t T, double p) const {
    if (p <= 0.0) return std::numeric_limits<double>::infinity();
    return lambda * double(T) / (eta * p);
}

BoundaryStrip::BoundaryStrip(const CircuitGeometry& geom, uint64_t meas_seed, uint64_t noise_seed)
    : geom_(&geom),
      noise_seed_(noise_seed),
      tab_(MixedTableau::new_zero_state(0, meas_seed)),
      L_(geom.num_rows()),
      W_(geom.num_cols()) {
    gate_done_.resize(geom.depth());
    for (uint32_t l = 0; l < geom.depth(); ++l) gate_done_[l].assign(geom.layer(l).size(), 0);
    noise_done_.assign(size_t(L_) * W_ * geom.depth(), 0);
}

uint32_t BoundaryStrip::local_index(uint32_t r, uint32_t c) const {
    return r * width() + (c - col_lo_);
}

void BoundaryStrip::append_column() {
    const uint32_t w = width();
    tab_.append_qubits_zero(L_);  // new sites L*w .. L*w+L-1 are rows of the new column
    std::vector<uint32_t> perm(tab_.num_qubits());
    for (uint32_t r = 0; r < L_; ++r) {
        for (uint32_t cc = 0; cc < w; ++cc) perm[r * w + cc] = r * (w + 1) + cc;
        perm[size_t(L_) * w + r] = r * (w + 1) + w;
    }
    tab_.permute_sites(perm);
    ++col_hi_;
}

int BoundaryStrip::advance(uint32_t t, double noise_p) {
    if (t >= W_ || t != col_lo_ || advanced_)
        throw std::invalid_argument("BoundaryStrip: columns must be sampled in order 0..W-1");
    advanced_ = true;
    LightCone cone = geom_->past_light_cone(t);
    uint32_t max_col = t;
    for (const auto& [r, c] : cone.qubits) max_col = std::max(max_col, c);
    while (col_hi_ <= max_col) append_column();

    // Replay in layer order: a layer's new gates first, then its noise slots.
    // Gates and noise touching columns already discarded were necessarily
    // processed while sampling those columns (anything acting on column s
    // lies in the cone of column s), so the done-marks skip them here.
    size_t gi = 0, ni = 0;
    for (uint32_t l = 0; l < geom_->depth(); ++l) {
        for (; gi < cone.gates.size() && cone.gates[gi].layer == l; ++gi) {
            const ConeGate& cg = cone.gates[gi];
            if (gate_done_[l][cg.edge_index]) continue;
            gate_done_[l][cg.edge_index] = 1;
            const GridEdge& ed = geom_->layer(l)[cg.edge_index];
            if (ed.c1 < col_lo_ || ed.c1 >= col_hi_ || ed.c2 < col_lo_ || ed.c2 >= col_hi_)
                throw std::logic_error("BoundaryStrip: cone gate outside the active strip");
            tab_.apply_two_qubit(geom_->gate(l, cg.edge_index), local_index(ed.r1, ed.c1),
                                 local_index(ed.r2, ed.c2));
        }
        for (; ni < cone.noise.size() && cone.noise[ni].layer == l; ++ni) {
            const ConeNoise& nz = cone.noise[ni];
            const size_t key = (size_t(nz.r) * W_ + nz.c) * geom_->depth() + l;
            if (noise_done_[key]) continue;
            noise_done_[key] = 1;
            ++noise_slots_;
            if (nz.c < col_lo_ || nz.c >= col_hi_)
                throw std::logic_error("BoundaryStrip: cone noise outside the active strip");
            if (noise_coin(noise_seed_, nz.r * W_ + nz.c, l, noise_p))
                tab_.trace_replace_mixed(local_index(nz.r, nz.c));
        }
    }

    last_s_op_ = operator_entanglement(to_clipped_gauge(tab_), (L_ / 2) * width());
    return last_s_op_;
}

std::vector<uint8_t> BoundaryStrip::measure_column(uint32_t t) {
    if (t != col_lo_ || col_hi_ <= t || !advanced_)
        throw std::invalid_argument("BoundaryStrip: measure_column out of order");
    advanced_ = false;
    const uint32_t w = width();
    std::vector<uint8_t> out(L_);
    for (uint32_t r = 0; r < L_; ++r) out[r] = tab_.measure_z(r * w) ? 1 : 0;
    // Descending rows keep the remaining sites' indices valid; the natural
    // index shift leaves the tableau row-major at width w-1.
    for (uint32_t r = L_; r-- > 0;) tab_.discard_qubit(r * w);
    ++col_lo_;
    return out;
}

std::vector<uint8_t> BoundaryStrip::step(uint32_t t, double noise_p) {
    advance(t, noise_p);
    return measure_column(t);
}

namespace {

TrajectoryRecord run_impl(const CircuitGeometry& geom, double p, uint64_t seed,
                          const std::vector<uint32_t>& cmi_buffers, const CutoffPolicy* policy) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("run_trajectory: p must lie in [0,1]");
    TrajectoryRecord rec;
    rec.seed = seed;
    rec.L = geom.num_rows();
    rec.W = geom.num_cols();
    rec.T = geom.depth();
    rec.p = p;
    for (uint32_t dc : cmi_buffers)
        if (dc + 2 > rec.L)
            throw std::invalid_argument("run_trajectory: CMI buffer leaves no rows for A and B");

    BoundaryStrip strip(geom, derive_seed(seed, 1), derive_seed(seed, 2));
    const double threshold =
        policy ? policy->threshold_bits(rec.T, p) : std::numeric_limits<double>::infinity();

    MixedTableau snapshot = MixedTableau::new_zero_state(0);
    uint32_t snapshot_w = 0;
    int best = -1;
    for (uint32_t t = 0; t < rec.W; ++t) {
        const int s = strip.advance(t, p);
        rec.s_op_curve.push_back(s);
        if (s > best) {
            best = s;
            rec.t_peak = t;
            snapshot = strip.tableau();
            snapshot_w = strip.width();
        }
        if (double(s) > threshold) {
            rec.aborted = true;
            rec.abort_column = t;
            break;
        }
        rec.bits.push_back(strip.measure_column(t));
    }
    rec.s_op_peak = best;

    const ClippedGenerators cg = to_clipped_gauge(snapshot);
    rec.w_b_at_peak = snapshot_w;
    rec.m_over_n_at_peak =
        snapshot.num_qubits() ? double(snapshot.num_generators()) / snapshot.num_qubits() : 0.0;
    rec.gen_stats_at_peak = generator_stats(cg);
    for (uint32_t dc : cmi_buffers) {
        const uint32_t a_rows = (rec.L - dc) / 2;
        const Partition tri =
            Partition::tripartition(a_rows * snapshot_w, (a_rows + dc) * snapshot_w);
        rec.cmi_at_peak.emplace_back(dc, double(cmi_clipped(cg, tri)));
    }
    return rec;
}

std::string pack_bits_hex(const std::vector<uint8_t>& bits) {
    const size_t digits = (bits.size() + 3) / 4;
    std::string out(digits, '0');
    for (size_t r = 0; r < bits.size(); ++r)
        if (bits[r]) {
            // row 0 is the least significant bit; the string is MSB-first
            size_t digit = digits - 1 - r / 4;
            char& ch = out[digit];
            int v = (ch <= '9' ? ch - '0' : ch - 'a' + 10) | (1 << (r % 4));
            ch = v < 10 ? char('0' + v) : char('a' + v - 10);
        }
    return out;
}

std::vector<uint8_t> unpack_bits_hex(const std::string& hex, uint32_t n_bits) {
    if (hex.size() != (n_bits + 3) / 4)
        throw std::runtime_error("record parse: hex column has wrong length");
    std::vector<uint8_t> bits(n_bits, 0);
    for (uint32_t r = 0; r < n_bits; ++r) {
        char ch = hex[hex.size() - 1 - r / 4];
        int v;
        if (ch >= '0' && ch <= '9')
            v = ch - '0';
        else if (ch >= 'a' && ch <= 'f')
            v = ch - 'a' + 10;
        else
            throw std::runtime_error("record parse: bad hex digit");
        bits[r] = (v >> (r % 4)) & 1;
    }
    return bits;
}

}  // namespace

TrajectoryRecord run_trajectory(const CircuitGeometry& geom, double p, uint64_t seed,
                                const std::vector<uint32_t>& cmi_buffers) {
    return run_impl(geom, p, seed, cmi_buffers, nullptr);
}

TrajectoryRecord run_trajectory_with_cutoff(const CircuitGeometry& geom, double p, uint64_t seed,
                                            const CutoffPolicy& policy,
                                            const std::vector<uint32_t>& cmi_buffers) {
    if (policy.lambda < 0.0 || policy.eta <= 0.0)
        throw std::invalid_argument("run_trajectory_with_cutoff: need lambda >= 0 and eta > 0");
    return run_impl(geom, p, seed, cmi_buffers, &policy);
}

std::string record_to_json_line(const TrajectoryRecord& rec) {
    nlohmann::json j;
    j["seed"] = rec.seed;
    j["L"] = rec.L;
    j["W"] = rec.W;
    j["T"] = rec.T;
    j["p"] = rec.p;
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& column : rec.bits) cols.push_back(pack_bits_hex(column));
    j["bits"] = std::move(cols);
    j["s_op_curve"] = rec.s_op_curve;
    j["s_op_peak"] = rec.s_op_peak;
    j["t_peak"] = rec.t_peak + 1;
    j["m_over_n_at_peak"] = rec.m_over_n_at_peak;
    j["w_b_at_peak"] = rec.w_b_at_peak;
    nlohmann::json stats = nlohmann::json::array();
    for (const auto& gs : rec.gen_stats_at_peak) stats.push_back({gs.com, gs.len});
    j["gen_stats"] = std::move(stats);
    nlohmann::json cmis = nlohmann::json::array();
    for (const auto& [dc, v] : rec.cmi_at_peak) cmis.push_back({dc, v});
    j["cmi_at_peak"] = std::move(cmis);
    j["aborted"] = rec.aborted;
    if (rec.aborted) j["abort_column"] = rec.abort_column + 1;
    return j.dump();
}

TrajectoryRecord record_from_json_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("record parse: ") + e.what());
    }
    TrajectoryRecord rec;
    try {
        rec.seed = j.at("seed").get<uint64_t>();
        rec.L = j.at("L").get<uint32_t>();
        rec.W = j.at("W").get<uint32_t>();
        rec.T = j.at("T").get<uint32_t>();
        rec.p = j.at("p").get<double>();
        for (const auto& hex : j.at("bits"))
            rec.bits.push_back(unpack_bits_hex(hex.get<std::string>(), rec.L));
        rec.s_op_curve = j.at("s_op_curve").get<std::vector<int>>();
        rec.s_op_peak = j.at("s_op_peak").get<int>();
        rec.t_peak = j.at("t_peak").get<uint32_t>() - 1;
        rec.m_over_n_at_peak = j.at("m_over_n_at_peak").get<double>();
        rec.w_b_at_peak = j.at("w_b_at_peak").get<uint32_t>();
        for (const auto& gs : j.at("gen_stats"))
            rec.gen_stats_at_peak.push_back({gs.at(0).get<double>(), gs.at(1).get<uint32_t>()});
        for (const auto& cm : j.at("cmi_at_peak"))
            rec.cmi_at_peak.emplace_back(cm.at(0).get<uint32_t>(), cm.at(1).get<double>());
        rec.aborted = j.at("aborted").get<bool>();
        if (rec.aborted) rec.abort_column = j.at("abort_column").get<uint32_t>() - 1;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("record parse: ") + e.what());
    }
    return rec;
}

}  // namespace sebd
