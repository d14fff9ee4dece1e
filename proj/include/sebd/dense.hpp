#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sebd/clifford.hpp"
#include "sebd/tableau.hpp"

namespace sebd {

// Dense density-matrix oracle, hard-capped at 6 qubits (the doubled space is
// then 4096-dimensional). Site 0 is the most significant tensor factor.
// Correctness reference only; never used inside production sampling loops.
class DenseState {
  public:
    explicit DenseState(uint32_t n);  // |0..0><0..0|
    // rho = 2^{M-N} prod_k (I + g_k)/2.
    static DenseState from_tableau(const MixedTableau& t);

    uint32_t num_qubits() const { return n_; }
    const Eigen::MatrixXcd& matrix() const { return rho_; }

    // Throws std::logic_error unless Hermitian, unit trace, PSD (>= -1e-10).
    void check_valid() const;

    // u acts on the listed sites, sites[0] most significant within u.
    void apply_unitary_on(const Eigen::MatrixXcd& u, const std::vector<uint32_t>& sites);
    void apply_two_qubit(const TwoQubitClifford& gate, uint32_t a, uint32_t b);
    // Projects onto the Z_q = (-1)^outcome branch and renormalizes; returns
    // the branch probability. Throws std::runtime_error on a ~0 branch.
    double project_z(uint32_t q, bool outcome);
    void trace_replace(uint32_t q);  // rho -> tr_q(rho) (x) I_q/2, same N
    void discard(uint32_t q);        // rho -> tr_q(rho), N-1, sites reindexed

    // Reduced density matrix on the region (strictly increasing sites).
    Eigen::MatrixXcd reduced(const std::vector<uint32_t>& region) const;

  private:
    uint32_t n_ = 0;
    Eigen::MatrixXcd rho_;
};

// Von Neumann entropy of the reduced state on the region, in bits.
double entropy_dense(const DenseState& s, const std::vector<uint32_t>& region);

// Operator entanglement of rho across A = sites [0, cut): vectorize rho,
// normalize by tr[rho^2], trace the doubled space over B, entropy in bits.
double operator_entanglement_dense(const DenseState& s, uint32_t cut);

// The 4x4 unitary realizing the gate's conjugation action (up to global
// phase), reconstructed from the stabilizers of its Choi state.
Eigen::MatrixXcd to_unitary(const TwoQubitClifford& gate);

}  // namespace sebd
