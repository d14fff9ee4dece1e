#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sebd {

// Signed Pauli string on n sites, bit-packed 64 sites per word.
// The represented operator is i^phase * prod_k sigma_k where sigma_k is the
// Hermitian single-site Pauli picked by (x_k, z_k):
//   (0,0) = I   (1,0) = X   (0,1) = Z   (1,1) = Y
// and phase is a power of i (0..3). Stabilizer generators always carry an
// even phase (+1 or -1); odd powers only appear transiently in products.
//
// Sites are 0-based throughout the C++ API. Rendered text and serialized
// records use 1-based site conventions where site positions appear.
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(uint32_t n_sites)
        : n_(n_sites), xw_(words(n_sites), 0), zw_(words(n_sites), 0) {}

    static PauliString identity(uint32_t n_sites) { return PauliString(n_sites); }
    static PauliString z_at(uint32_t n_sites, uint32_t q, bool minus = false);
    static PauliString x_at(uint32_t n_sites, uint32_t q, bool minus = false);
    // Parses "[+-[i]]?[IXYZ]*", e.g. "+XIZ", "-YY", "XZ".
    static PauliString from_label(const std::string& text);

    uint32_t num_sites() const { return n_; }
    uint8_t phase_pow() const { return phase_; }
    void set_phase_pow(uint8_t k) { phase_ = k & 3; }
    bool is_hermitian() const { return (phase_ & 1) == 0; }
    // True when the sign is -1 (phase power 2); only meaningful for Hermitian strings.
    bool is_negative() const { return phase_ == 2; }

    bool x(uint32_t q) const { return (xw_[q >> 6] >> (q & 63)) & 1; }
    bool z(uint32_t q) const { return (zw_[q >> 6] >> (q & 63)) & 1; }
    void set_x(uint32_t q, bool v);
    void set_z(uint32_t q, bool v);

    // All (x, z) bits zero; the phase is ignored.
    bool is_identity_bits() const;

    // Symplectic inner product == 0.
    bool commutes(const PauliString& other) const;

    // this := this * other, with exact i-power bookkeeping.
    void mul_inplace(const PauliString& other);
    PauliString operator*(const PauliString& other) const {
        PauliString r = *this;
        r.mul_inplace(other);
        return r;
    }

    // (first, last) 0-based support sites; nullopt for identity bits.
    std::optional<std::pair<uint32_t, uint32_t>> support_bounds() const;

    // Smallest set column in site-major (x_q, z_q) interleaved order:
    // column 2q selects x_q, column 2q+1 selects z_q. UINT32_MAX for identity.
    uint32_t lead_column() const;

    void append_identity_sites(uint32_t k);
    void remove_site(uint32_t q);
    // new_of_old[q] gives the new position of site q; must be a permutation.
    PauliString permuted(const std::vector<uint32_t>& new_of_old) const;
    // Keeps only the listed sites (strictly increasing); the phase is
    // discarded because restrictions feed sign-free GF(2) ranks.
    PauliString restricted(const std::vector<uint32_t>& region) const;

    // "+XXZI" style; imaginary phases render as "+i"/"-i" prefixes.
    std::string str() const;

    bool operator==(const PauliString&) const = default;

    const std::vector<uint64_t>& x_words() const { return xw_; }
    const std::vector<uint64_t>& z_words() const { return zw_; }

    static uint32_t words(uint32_t n_sites) { return (n_sites + 63) >> 6; }

  private:
    uint32_t n_ = 0;
    uint8_t phase_ = 0;
    std::vector<uint64_t> xw_, zw_;
};

}  // namespace sebd
