#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sebd/pauli.hpp"

namespace sebd {

// A two-qubit Clifford gate, represented by its conjugation action on the
// generators X1, Z1, X2, Z2. The symplectic part (720 elements of Sp(4,2),
// found by brute force over all binary 4x4 matrices) lives in a shared table;
// a gate adds one sign bit per generator image, 720 * 16 = 11520 gates total.
//
// 4-bit Pauli codes used throughout: bit0 = x1, bit1 = z1, bit2 = x2, bit3 = z2.
struct TwoQubitClifford {
    uint16_t sp_index = 0;
    uint8_t signs = 0;  // bit k negates the image of generator k

    static TwoQubitClifford identity();

    // Signed image of generator k (0 = X1, 1 = Z1, 2 = X2, 3 = Z2).
    PauliString image(int k) const;

    // Conjugates the 4-bit input code: returns (output code, sign flip).
    std::pair<uint8_t, bool> conjugate(uint8_t in) const;
};

struct SpElement {
    uint8_t images[4];   // images of X1, Z1, X2, Z2 with + signs
    uint8_t conj[16];    // per input code: low 4 bits = output code, bit 4 = base sign
};

// The full Sp(4,2) table (720 elements); built once, thread-safe.
const std::vector<SpElement>& sp_table();

// Uniform over all 11520 two-qubit Cliffords (mod global phase).
TwoQubitClifford random_two_qubit_clifford(std::mt19937_64& rng);

// Deterministic enumeration handle for exhaustive tests: idx < 11520.
TwoQubitClifford clifford_from_index(uint32_t idx);

inline constexpr uint32_t kNumSymplectic4 = 720;
inline constexpr uint32_t kNumTwoQubitCliffords = 11520;

}  // namespace sebd
