#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sebd/clifford.hpp"
#include "sebd/pauli.hpp"

namespace sebd {

// Sign-tracking row echelon form over the site-major symplectic columns.
// Rows keep strictly increasing lead columns; eliminations are Pauli
// multiplications, so the i-power bookkeeping rides along with the GF(2)
// arithmetic. Used for deterministic measurement signs and membership tests.
class PauliEchelon {
  public:
    PauliEchelon() = default;
    explicit PauliEchelon(const std::vector<PauliString>& gens);

    void add(PauliString g);
    // Eliminates every pivot lead from t in one ascending pass; true when the
    // bits vanish, i.e. t was in the span up to phase (read t.phase_pow()).
    bool reduce(PauliString& t) const;
    const std::vector<PauliString>& rows() const { return rows_; }

  private:
    std::vector<PauliString> rows_;
};

// Mixed stabilizer state rho = 2^{M-N} prod_j (I + g_j)/2 on N qubits, held
// as the generator list G = {g_1..g_M} alone: no destabilizer rows, since M
// fluctuates under noise and measurement. Deterministic measurement signs are
// recovered by on-the-fly elimination instead. M = N iff the state is pure.
//
// The tableau owns the measurement coin stream (seeded at construction);
// noise coins are supplied by the caller so they can be counter-based.
class MixedTableau {
  public:
    MixedTableau() = default;  // zero qubits, zero generators
    static MixedTableau new_zero_state(uint32_t n, uint64_t meas_seed = 0);

    uint32_t num_qubits() const { return n_; }
    uint32_t num_generators() const { return static_cast<uint32_t>(gens_.size()); }
    bool is_pure() const { return gens_.size() == n_; }
    const std::vector<PauliString>& generators() const { return gens_; }

    // Adds k fresh |0> qubits at the end of the site order.
    void append_qubits_zero(uint32_t k);
    void apply_two_qubit(const TwoQubitClifford& gate, uint32_t a, uint32_t b);
    // Projective Z measurement; random outcomes use the internal stream.
    bool measure_z(uint32_t q);
    // rho -> tr_q(rho) (x) I_q/2; afterwards no generator touches q.
    void trace_replace_mixed(uint32_t q);
    // Removes a site that is in a Z-eigenstate or maximally mixed; throws
    // std::invalid_argument when q is still correlated with the rest.
    void discard_qubit(uint32_t q);
    // With probability p trace-replaces q. Always draws one coin from rng.
    bool noise_event(uint32_t q, double p, std::mt19937_64& rng);
    // new_of_old[q] gives the new position of site q.
    void permute_sites(const std::vector<uint32_t>& new_of_old);

    // Throws std::logic_error when a representation invariant is broken.
    void check_invariants() const;

    // "N M" header plus one "+/-[IXYZ]+" line per generator; bit-exact.
    std::string to_text() const;
    static MixedTableau from_text(const std::string& text, uint64_t meas_seed = 0);

  private:
    uint32_t n_ = 0;
    std::vector<PauliString> gens_;
    std::mt19937_64 rng_{0};
};

}  // namespace sebd
