#pragma once

#include <cstdint>
#include <vector>

#include "sebd/geometry.hpp"

namespace sebd {

// Full-lattice oracle for the boundary strip: simulates all L*W qubits layer
// by layer, fires the same counter-based noise coin for every (qubit, layer)
// pair, then measures column by column (rows top to bottom) with the same
// measurement coin stream. Because each measurement consumes one coin exactly
// when its outcome is random, a correct strip reproduces these bits exactly.
// Returns bits[t][r] for column t, row r.
std::vector<std::vector<uint8_t>> sample_full_lattice_seeds(const CircuitGeometry& geom, double p,
                                                            uint64_t meas_seed,
                                                            uint64_t noise_seed);

// Seed split matching run_trajectory: meas = derive(seed, 1), noise = derive(seed, 2).
std::vector<std::vector<uint8_t>> sample_full_lattice(const CircuitGeometry& geom, double p,
                                                      uint64_t seed);

}  // namespace sebd
