#include "sebd/gf2.hpp"

#include <stdexcept>

namespace sebd {

Gf2Matrix Gf2Matrix::restriction(const std::vector<PauliString>& gens,
                                 const std::vector<uint32_t>& region) {
    const uint32_t k = static_cast<uint32_t>(region.size());
    Gf2Matrix m(static_cast<uint32_t>(gens.size()), 2 * k);
    for (uint32_t r = 0; r < gens.size(); ++r) {
        const PauliString p = gens[r].restricted(region);  // validates region
        for (uint32_t i = 0; i < k; ++i) {
            if (p.x(i)) m.set(r, i, true);
            if (p.z(i)) m.set(r, k + i, true);
        }
    }
    return m;
}

bool Gf2Matrix::get(uint32_t r, uint32_t c) const {
    if (r >= rows_ || c >= cols_) throw std::invalid_argument("gf2: index out of range");
    return (bits_[size_t(r) * wpr_ + (c >> 6)] >> (c & 63)) & 1;
}

void Gf2Matrix::set(uint32_t r, uint32_t c, bool v) {
    if (r >= rows_ || c >= cols_) throw std::invalid_argument("gf2: index out of range");
    uint64_t& w = bits_[size_t(r) * wpr_ + (c >> 6)];
    const uint64_t m = 1ULL << (c & 63);
    if (v) w |= m; else w &= ~m;
}

void Gf2Matrix::xor_rows(uint32_t dst, uint32_t src) {
    if (dst >= rows_ || src >= rows_) throw std::invalid_argument("gf2: row out of range");
    uint64_t* d = &bits_[size_t(dst) * wpr_];
    const uint64_t* s = &bits_[size_t(src) * wpr_];
    for (uint32_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
}

void Gf2Matrix::swap_rows(uint32_t a, uint32_t b) {
    if (a >= rows_ || b >= rows_) throw std::invalid_argument("gf2: row out of range");
    if (a == b) return;
    for (uint32_t w = 0; w < wpr_; ++w)
        std::swap(bits_[size_t(a) * wpr_ + w], bits_[size_t(b) * wpr_ + w]);
}

uint32_t Gf2Matrix::rank() const {
    Gf2Matrix m = *this;
    uint32_t rank = 0;
    for (uint32_t c = 0; c < cols_ && rank < rows_; ++c) {
        uint32_t pivot = UINT32_MAX;
        for (uint32_t r = rank; r < rows_; ++r) {
            if (m.get(r, c)) {
                pivot = r;
                break;
            }
        }
        if (pivot == UINT32_MAX) continue;
        m.swap_rows(rank, pivot);
        for (uint32_t r = pivot + 1; r < rows_; ++r)
            if (m.get(r, c)) m.xor_rows(r, rank);
        ++rank;
    }
    return rank;
}

}  // namespace sebd
