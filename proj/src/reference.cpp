#include "sebd/reference.hpp"

#include "sebd/rng.hpp"
#include "sebd/tableau.hpp"

namespace sebd {

std::vector<std::vector<uint8_t>> sample_full_lattice_seeds(const CircuitGeometry& geom, double p,
                                                            uint64_t meas_seed,
                                                            uint64_t noise_seed) {
    const uint32_t L = geom.num_rows(), W = geom.num_cols();
    MixedTableau tab = MixedTableau::new_zero_state(L * W, meas_seed);
    for (uint32_t l = 0; l < geom.depth(); ++l) {
        const auto& edges = geom.layer(l);
        for (uint32_t e = 0; e < edges.size(); ++e) {
            const GridEdge& ed = edges[e];
            tab.apply_two_qubit(geom.gate(l, e), ed.r1 * W + ed.c1, ed.r2 * W + ed.c2);
        }
        for (uint32_t q = 0; q < L * W; ++q)
            if (noise_coin(noise_seed, q, l, p)) tab.trace_replace_mixed(q);
    }
    std::vector<std::vector<uint8_t>> bits(W, std::vector<uint8_t>(L));
    for (uint32_t t = 0; t < W; ++t)
        for (uint32_t r = 0; r < L; ++r) bits[t][r] = tab.measure_z(r * W + t) ? 1 : 0;
    return bits;
}

std::vector<std::vector<uint8_t>> sample_full_lattice(const CircuitGeometry& geom, double p,
                                                      uint64_t seed) {
    return sample_full_lattice_seeds(geom, p, derive_seed(seed, 1), derive_seed(seed, 2));
}

}  // namespace sebd
