#pragma once

#include <cstdint>
#include <vector>

#include "sebd/pauli.hpp"

namespace sebd {

// Dense GF(2) matrix, bit-packed row-major (64 columns per word). All row
// operations cost O(cols / 64) words.
class Gf2Matrix {
  public:
    Gf2Matrix() = default;
    Gf2Matrix(uint32_t rows, uint32_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) >> 6), bits_(size_t(rows) * wpr_, 0) {}

    // One row per generator over the region's concatenated (x | z) bits:
    // columns [0, |region|) hold x bits, columns [|region|, 2|region|) hold z
    // bits. Phases are dropped (ranks are sign-free).
    static Gf2Matrix restriction(const std::vector<PauliString>& gens,
                                 const std::vector<uint32_t>& region);

    uint32_t rows() const { return rows_; }
    uint32_t cols() const { return cols_; }

    bool get(uint32_t r, uint32_t c) const;
    void set(uint32_t r, uint32_t c, bool v);
    void xor_rows(uint32_t dst, uint32_t src);
    void swap_rows(uint32_t a, uint32_t b);

    // Rank by in-place elimination on a copy.
    uint32_t rank() const;

  private:
    uint32_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> bits_;
};

inline uint32_t gf2_rank(const Gf2Matrix& m) { return m.rank(); }

}  // namespace sebd
