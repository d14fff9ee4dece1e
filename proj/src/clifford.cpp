#include "sebd/clifford.hpp"

#include <bit>
#include <stdexcept>

#include "sebd/rng.hpp"

namespace sebd {

namespace {

// Symplectic product of two 4-bit Pauli codes: 1 means anticommute.
int symp(uint8_t u, uint8_t v) {
    const int x1u = u & 1, z1u = (u >> 1) & 1, x2u = (u >> 2) & 1, z2u = (u >> 3) & 1;
    const int x1v = v & 1, z1v = (v >> 1) & 1, x2v = (v >> 2) & 1, z2v = (v >> 3) & 1;
    return ((x1u & z1v) ^ (z1u & x1v) ^ (x2u & z2v) ^ (z2u & x2v));
}

PauliString pauli_from_code(uint8_t code, bool minus = false) {
    PauliString p(2);
    p.set_x(0, code & 1);
    p.set_z(0, code & 2);
    p.set_x(1, code & 4);
    p.set_z(1, code & 8);
    if (minus) p.set_phase_pow(2);
    return p;
}

SpElement make_element(uint8_t r0, uint8_t r1, uint8_t r2, uint8_t r3) {
    SpElement e{};
    e.images[0] = r0;
    e.images[1] = r1;
    e.images[2] = r2;
    e.images[3] = r3;
    for (uint8_t in = 0; in < 16; ++in) {
        // input operator = i^delta * X1^xa Z1^za X2^xb Z2^zb, delta = #Y in input
        PauliString p = PauliString::identity(2);
        for (int k = 0; k < 4; ++k)
            if (in >> k & 1) p.mul_inplace(pauli_from_code(e.images[k]));
        const int delta = ((in & 1) && (in & 2)) + ((in & 4) && (in & 8));
        const int phase = (p.phase_pow() + delta) & 3;
        if (phase & 1)
            throw std::logic_error("clifford: conjugated Pauli acquired an imaginary phase");
        const uint8_t out = static_cast<uint8_t>((p.x(0) ? 1 : 0) | (p.z(0) ? 2 : 0) |
                                                 (p.x(1) ? 4 : 0) | (p.z(1) ? 8 : 0));
        e.conj[in] = static_cast<uint8_t>(out | ((phase == 2) << 4));
    }
    return e;
}

std::vector<SpElement> build_sp_table() {
    std::vector<SpElement> table;
    table.reserve(kNumSymplectic4);
    for (uint32_t m = 0; m < (1u << 16); ++m) {
        const uint8_t r0 = m & 15, r1 = (m >> 4) & 15, r2 = (m >> 8) & 15, r3 = (m >> 12) & 15;
        if (symp(r0, r1) != 1 || symp(r2, r3) != 1) continue;
        if (symp(r0, r2) || symp(r0, r3) || symp(r1, r2) || symp(r1, r3)) continue;
        table.push_back(make_element(r0, r1, r2, r3));
    }
    if (table.size() != kNumSymplectic4)
        throw std::logic_error("clifford: Sp(4,2) enumeration produced " +
                               std::to_string(table.size()) + " elements, expected 720");
    return table;
}

}  // namespace

const std::vector<SpElement>& sp_table() {
    static const std::vector<SpElement> table = build_sp_table();
    return table;
}

TwoQubitClifford TwoQubitClifford::identity() {
    const auto& table = sp_table();
    for (uint16_t i = 0; i < table.size(); ++i) {
        const auto& im = table[i].images;
        if (im[0] == 1 && im[1] == 2 && im[2] == 4 && im[3] == 8) return {i, 0};
    }
    throw std::logic_error("clifford: identity element missing from table");
}

PauliString TwoQubitClifford::image(int k) const {
    if (k < 0 || k > 3) throw std::invalid_argument("clifford: image index must be 0..3");
    return pauli_from_code(sp_table()[sp_index].images[k], (signs >> k) & 1);
}

std::pair<uint8_t, bool> TwoQubitClifford::conjugate(uint8_t in) const {
    const uint8_t packed = sp_table()[sp_index].conj[in & 15];
    const bool flip = ((packed >> 4) ^ std::popcount(static_cast<unsigned>(in & signs))) & 1;
    return {static_cast<uint8_t>(packed & 15), flip};
}

TwoQubitClifford random_two_qubit_clifford(std::mt19937_64& rng) {
    TwoQubitClifford g;
    g.sp_index = static_cast<uint16_t>(bounded_uniform(rng, kNumSymplectic4));
    g.signs = static_cast<uint8_t>(rng() & 15);
    return g;
}

TwoQubitClifford clifford_from_index(uint32_t idx) {
    if (idx >= kNumTwoQubitCliffords)
        throw std::invalid_argument("clifford: index out of range");
    return {static_cast<uint16_t>(idx / 16), static_cast<uint8_t>(idx % 16)};
}

}  // namespace sebd
