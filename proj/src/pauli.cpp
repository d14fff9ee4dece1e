#include "sebd/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace sebd {

namespace {

void check_site(uint32_t q, uint32_t n) {
    if (q >= n)
        throw std::invalid_argument("pauli: site index " + std::to_string(q) +
                                    " out of range for " + std::to_string(n) + " sites");
}

}  // namespace

PauliString PauliString::z_at(uint32_t n_sites, uint32_t q, bool minus) {
    check_site(q, n_sites);
    PauliString p(n_sites);
    p.set_z(q, true);
    if (minus) p.phase_ = 2;
    return p;
}

PauliString PauliString::x_at(uint32_t n_sites, uint32_t q, bool minus) {
    check_site(q, n_sites);
    PauliString p(n_sites);
    p.set_x(q, true);
    if (minus) p.phase_ = 2;
    return p;
}

PauliString PauliString::from_label(const std::string& text) {
    size_t i = 0;
    uint8_t phase = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        if (text[i] == '-') phase = 2;
        ++i;
        if (i < text.size() && text[i] == 'i') {
            phase = (phase + 1) & 3;
            ++i;
        }
    }
    PauliString p(static_cast<uint32_t>(text.size() - i));
    p.phase_ = phase;
    for (uint32_t q = 0; i < text.size(); ++i, ++q) {
        switch (text[i]) {
            case 'I': break;
            case 'X': p.set_x(q, true); break;
            case 'Z': p.set_z(q, true); break;
            case 'Y': p.set_x(q, true); p.set_z(q, true); break;
            default:
                throw std::invalid_argument("pauli: bad character '" +
                                            std::string(1, text[i]) + "' in label");
        }
    }
    return p;
}

void PauliString::set_x(uint32_t q, bool v) {
    check_site(q, n_);
    const uint64_t m = 1ULL << (q & 63);
    if (v) xw_[q >> 6] |= m; else xw_[q >> 6] &= ~m;
}

void PauliString::set_z(uint32_t q, bool v) {
    check_site(q, n_);
    const uint64_t m = 1ULL << (q & 63);
    if (v) zw_[q >> 6] |= m; else zw_[q >> 6] &= ~m;
}

bool PauliString::is_identity_bits() const {
    for (size_t w = 0; w < xw_.size(); ++w)
        if (xw_[w] | zw_[w]) return false;
    return true;
}

bool PauliString::commutes(const PauliString& other) const {
    if (n_ != other.n_)
        throw std::invalid_argument("pauli: commutes() on mismatched lengths");
    // parity(popcount(a) + popcount(b)) == parity(popcount(a ^ b)), so the
    // symplectic product folds into one accumulator word.
    uint64_t acc = 0;
    for (size_t w = 0; w < xw_.size(); ++w)
        acc ^= (xw_[w] & other.zw_[w]) ^ (zw_[w] & other.xw_[w]);
    return (std::popcount(acc) & 1) == 0;
}

void PauliString::mul_inplace(const PauliString& other) {
    if (n_ != other.n_)
        throw std::invalid_argument("pauli: multiply on mismatched lengths");
    // Per-site phase exponent of i in sigma_p * sigma_q (Aaronson-Gottesman g):
    //   +1 for X*Y, Y*Z, Z*X; -1 for X*Z, Y*X, Z*Y; 0 otherwise.
    int64_t plus = 0, minus = 0;
    for (size_t w = 0; w < xw_.size(); ++w) {
        const uint64_t a = xw_[w], b = zw_[w];
        const uint64_t c = other.xw_[w], d = other.zw_[w];
        const uint64_t p1 = (a & ~b & c & d) | (a & b & ~c & d) | (~a & b & c & ~d);
        const uint64_t m1 = (a & ~b & ~c & d) | (a & b & c & ~d) | (~a & b & c & d);
        plus += std::popcount(p1);
        minus += std::popcount(m1);
        xw_[w] = a ^ c;
        zw_[w] = b ^ d;
    }
    phase_ = static_cast<uint8_t>((phase_ + other.phase_ + ((plus - minus) % 4) + 4) & 3);
}

std::optional<std::pair<uint32_t, uint32_t>> PauliString::support_bounds() const {
    uint32_t first = UINT32_MAX, last = 0;
    for (size_t w = 0; w < xw_.size(); ++w) {
        const uint64_t m = xw_[w] | zw_[w];
        if (m) {
            first = static_cast<uint32_t>((w << 6) + std::countr_zero(m));
            break;
        }
    }
    if (first == UINT32_MAX) return std::nullopt;
    for (size_t w = xw_.size(); w-- > 0;) {
        const uint64_t m = xw_[w] | zw_[w];
        if (m) {
            last = static_cast<uint32_t>((w << 6) + 63 - std::countl_zero(m));
            break;
        }
    }
    return std::make_pair(first, last);
}

uint32_t PauliString::lead_column() const {
    const auto sb = support_bounds();
    if (!sb) return UINT32_MAX;
    const uint32_t q = sb->first;
    return 2 * q + (x(q) ? 0 : 1);
}

void PauliString::append_identity_sites(uint32_t k) {
    n_ += k;
    xw_.resize(words(n_), 0);
    zw_.resize(words(n_), 0);
}

void PauliString::remove_site(uint32_t q) {
    check_site(q, n_);
    PauliString out(n_ - 1);
    out.phase_ = phase_;
    for (uint32_t s = 0; s < n_; ++s) {
        if (s == q) continue;
        const uint32_t d = s < q ? s : s - 1;
        if (x(s)) out.set_x(d, true);
        if (z(s)) out.set_z(d, true);
    }
    *this = std::move(out);
}

PauliString PauliString::permuted(const std::vector<uint32_t>& new_of_old) const {
    if (new_of_old.size() != n_)
        throw std::invalid_argument("pauli: permutation length mismatch");
    PauliString out(n_);
    out.phase_ = phase_;
    for (uint32_t q = 0; q < n_; ++q) {
        const uint32_t d = new_of_old[q];
        check_site(d, n_);
        if (x(q)) out.set_x(d, true);
        if (z(q)) out.set_z(d, true);
    }
    return out;
}

PauliString PauliString::restricted(const std::vector<uint32_t>& region) const {
    PauliString out(static_cast<uint32_t>(region.size()));
    uint32_t prev = UINT32_MAX;
    for (uint32_t i = 0; i < region.size(); ++i) {
        const uint32_t q = region[i];
        check_site(q, n_);
        if (prev != UINT32_MAX && q <= prev)
            throw std::invalid_argument("pauli: region must be strictly increasing");
        prev = q;
        if (x(q)) out.set_x(i, true);
        if (z(q)) out.set_z(i, true);
    }
    return out;
}

std::string PauliString::str() const {
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    std::string s = prefix[phase_];
    s.reserve(s.size() + n_);
    for (uint32_t q = 0; q < n_; ++q) {
        const int code = (x(q) ? 1 : 0) | (z(q) ? 2 : 0);
        s += "IXZY"[code];
    }
    return s;
}

}  // namespace sebd
