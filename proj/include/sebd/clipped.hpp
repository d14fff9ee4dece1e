#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sebd/pauli.hpp"
#include "sebd/tableau.hpp"

namespace sebd {

// Generator set rewritten in the clipped gauge: at most two generators start
// and at most two end at any site, with independent local actions where they
// share an endpoint. Endpoints are 0-based sites.
struct ClippedGenerators {
    uint32_t n_sites = 0;
    std::vector<PauliString> rows;
    std::vector<std::pair<uint32_t, uint32_t>> endpoints;  // (x_l, x_r) per row
};

// Contiguous partition of the 1D chain: A = [0, a_end), C = [a_end, c_end),
// B = [c_end, n). Bipartitions have an empty buffer (a_end == c_end).
struct Partition {
    uint32_t a_end = 0;
    uint32_t c_end = 0;
    static Partition bipartition(uint32_t cut) { return {cut, cut}; }
    static Partition tripartition(uint32_t a_end, uint32_t c_end) { return {a_end, c_end}; }
};

// Two-sweep gauge fixing. Left sweep: site-major elimination of the 2-bit
// local actions so at most two rows keep their left endpoint per site. Right
// sweep: same from the right, eliminating each row only with pivots whose
// left endpoint is >= its own, which provably leaves every left endpoint in
// place. Rows come out sorted by (x_l, x_r).
ClippedGenerators to_clipped_gauge(const MixedTableau& state);

// S_op across A = sites [0, cut): the number of generators crossing the cut
// (x_l < cut <= x_r). Equal to I(A:B) in bits for stabilizer states.
int operator_entanglement(const ClippedGenerators& cg, uint32_t cut);

// Count of generators with x_l in A and x_r in B of a buffered tripartition.
int cmi_clipped(const ClippedGenerators& cg, const Partition& tri);

// S(rho_X) = |X| - M_X with M_X = M - rank of the generators restricted to
// the complement of X (sign-free). X is any strictly increasing site list.
double entropy_region(const MixedTableau& state, const std::vector<uint32_t>& region);

// I(A:B) = S_A + S_B - S_AB; A and B must be disjoint.
double mutual_information(const MixedTableau& state, const std::vector<uint32_t>& a,
                          const std::vector<uint32_t>& b);

// I(A:B|C) = S_AC + S_CB - S_C - S_ACB; blocks must be pairwise disjoint.
double cmi(const MixedTableau& state, const std::vector<uint32_t>& a,
           const std::vector<uint32_t>& c, const std::vector<uint32_t>& b);

// Center-of-mass / length statistics per generator. Centers use 1-based site
// coordinates (matching reported observables) and may be half-integers.
struct GenStat {
    double com = 0.0;
    uint32_t len = 0;
};
std::vector<GenStat> generator_stats(const ClippedGenerators& cg);

}  // namespace sebd
