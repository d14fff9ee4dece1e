#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sebd/clifford.hpp"

namespace sebd {

// One nearest-neighbor edge of the L x W grid; (r1,c1) is the gate's first
// site. Rows and columns are 0-based internally.
struct GridEdge {
    uint32_t r1, c1, r2, c2;
};

struct ConeGate {
    uint32_t layer;
    uint32_t edge_index;  // into CircuitGeometry::layer(layer)
};

struct ConeNoise {
    uint32_t r, c, layer;  // noise slot directly after `layer`'s gates
};

// Past light cone of one lattice column: the qubits, gates, and noise slots
// that can influence its measurement outcomes. Gates and noise come sorted by
// ascending layer (gates by edge index, noise row-major within a layer).
struct LightCone {
    std::vector<std::pair<uint32_t, uint32_t>> qubits;  // (r, c), row-major order
    std::vector<ConeGate> gates;
    std::vector<ConeNoise> noise;
};

// Brickwork circuit on an open L x W grid, T layers deep, cycling with period
// 4: vertical edges starting at even rows, vertical at odd rows, horizontal
// starting at odd columns, horizontal at even columns (0-based). Putting the
// even-column matching last makes the light cone of the leftmost column grow
// by one column per horizontal layer, giving strip width T/2 + 1 at depth T.
// The random gate table is drawn up front in layer-major edge order, so gate
// identities are independent of the order in which a sampler reaches them.
class CircuitGeometry {
  public:
    CircuitGeometry(uint32_t L, uint32_t W, uint32_t T, uint64_t gate_seed);

    uint32_t num_rows() const { return L_; }
    uint32_t num_cols() const { return W_; }
    uint32_t depth() const { return T_; }
    uint64_t gate_seed() const { return seed_; }

    const std::vector<GridEdge>& layer(uint32_t l) const { return layers_.at(l); }
    const TwoQubitClifford& gate(uint32_t layer, uint32_t edge_index) const {
        return gates_.at(layer).at(edge_index);
    }

    LightCone past_light_cone(uint32_t t) const;  // t: 0-based column
    // Number of strip columns [t .. rightmost cone column] when sampling t.
    uint32_t cone_width(uint32_t t) const;

  private:
    uint32_t L_, W_, T_;
    uint64_t seed_;
    std::vector<std::vector<GridEdge>> layers_;
    std::vector<std::vector<TwoQubitClifford>> gates_;
};

}  // namespace sebd
