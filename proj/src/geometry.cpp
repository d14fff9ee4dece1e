#include "sebd/geometry.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <string>

namespace sebd {

CircuitGeometry::CircuitGeometry(uint32_t L, uint32_t W, uint32_t T, uint64_t gate_seed)
    : L_(L), W_(W), T_(T), seed_(gate_seed) {
    if (L < 2 || W < 2)
        throw std::invalid_argument("CircuitGeometry: need L >= 2 and W >= 2, got L=" +
                                    std::to_string(L) + " W=" + std::to_string(W));
    layers_.resize(T);
    for (uint32_t l = 0; l < T; ++l) {
        auto& edges = layers_[l];
        switch (l % 4) {
            case 0:  // vertical, even starting row
                for (uint32_t r = 0; r + 1 < L; r += 2)
                    for (uint32_t c = 0; c < W; ++c) edges.push_back({r, c, r + 1, c});
                break;
            case 1:  // vertical, odd starting row
                for (uint32_t r = 1; r + 1 < L; r += 2)
                    for (uint32_t c = 0; c < W; ++c) edges.push_back({r, c, r + 1, c});
                break;
            case 2:  // horizontal, odd starting column
                for (uint32_t c = 1; c + 1 < W; c += 2)
                    for (uint32_t r = 0; r < L; ++r) edges.push_back({r, c, r, c + 1});
                break;
            default:  // horizontal, even starting column
                for (uint32_t c = 0; c + 1 < W; c += 2)
                    for (uint32_t r = 0; r < L; ++r) edges.push_back({r, c, r, c + 1});
                break;
        }
    }
    std::mt19937_64 rng(gate_seed);
    gates_.resize(T);
    for (uint32_t l = 0; l < T; ++l) {
        gates_[l].reserve(layers_[l].size());
        for (size_t e = 0; e < layers_[l].size(); ++e)
            gates_[l].push_back(random_two_qubit_clifford(rng));
    }
}

LightCone CircuitGeometry::past_light_cone(uint32_t t) const {
    if (t >= W_)
        throw std::invalid_argument("past_light_cone: column " + std::to_string(t) +
                                    " out of range for W=" + std::to_string(W_));
    // in_set holds the qubits whose state at the current time slice can still
    // influence column t; we sweep from the final slice backwards.
    std::vector<char> in_set(size_t(L_) * W_, 0);
    for (uint32_t r = 0; r < L_; ++r) in_set[size_t(r) * W_ + t] = 1;

    std::vector<std::vector<ConeGate>> gates_by_layer(T_);
    std::vector<std::vector<ConeNoise>> noise_by_layer(T_);
    for (uint32_t l = T_; l-- > 0;) {
        // The noise slot after layer l sees the post-gate slice, i.e. the
        // current set. Noise on any other qubit is a trace-preserving channel
        // acting outside every later cone gate, so it drops out of the
        // marginal on column t and can be skipped exactly.
        for (uint32_t r = 0; r < L_; ++r)
            for (uint32_t c = 0; c < W_; ++c)
                if (in_set[size_t(r) * W_ + c]) noise_by_layer[l].push_back({r, c, l});
        // Edges within one layer are disjoint, so membership can be decided
        // against the pre-layer set for all of them at once.
        const auto& edges = layers_[l];
        for (uint32_t e = 0; e < edges.size(); ++e) {
            const GridEdge& ed = edges[e];
            if (in_set[size_t(ed.r1) * W_ + ed.c1] || in_set[size_t(ed.r2) * W_ + ed.c2])
                gates_by_layer[l].push_back({l, e});
        }
        for (const ConeGate& g : gates_by_layer[l]) {
            const GridEdge& ed = edges[g.edge_index];
            in_set[size_t(ed.r1) * W_ + ed.c1] = 1;
            in_set[size_t(ed.r2) * W_ + ed.c2] = 1;
        }
    }

    LightCone cone;
    for (uint32_t r = 0; r < L_; ++r)
        for (uint32_t c = 0; c < W_; ++c)
            if (in_set[size_t(r) * W_ + c]) cone.qubits.emplace_back(r, c);
    for (uint32_t l = 0; l < T_; ++l) {
        cone.gates.insert(cone.gates.end(), gates_by_layer[l].begin(), gates_by_layer[l].end());
        cone.noise.insert(cone.noise.end(), noise_by_layer[l].begin(), noise_by_layer[l].end());
    }
    return cone;
}

uint32_t CircuitGeometry::cone_width(uint32_t t) const {
    LightCone cone = past_light_cone(t);
    uint32_t max_col = t;
    for (const auto& [r, c] : cone.qubits) max_col = std::max(max_col, c);
    return max_col - t + 1;
}

}  // namespace sebd
