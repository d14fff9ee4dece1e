#include "sebd/tableau.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sebd/gf2.hpp"
#include "sebd/rng.hpp"

namespace sebd {

PauliEchelon::PauliEchelon(const std::vector<PauliString>& gens) {
    for (const auto& g : gens) add(g);
}

void PauliEchelon::add(PauliString g) {
    while (true) {
        const uint32_t l = g.lead_column();
        if (l == UINT32_MAX) return;  // dependent row, nothing new
        auto it = std::lower_bound(
            rows_.begin(), rows_.end(), l,
            [](const PauliString& r, uint32_t col) { return r.lead_column() < col; });
        if (it == rows_.end() || it->lead_column() != l) {
            rows_.insert(it, std::move(g));
            return;
        }
        g.mul_inplace(*it);  // cancels the lead; the new lead is strictly larger
    }
}

bool PauliEchelon::reduce(PauliString& t) const {
    for (const auto& r : rows_) {
        const uint32_t l = r.lead_column();
        const uint32_t site = l >> 1;
        if ((l & 1) ? t.z(site) : t.x(site)) t.mul_inplace(r);
    }
    return t.is_identity_bits();
}

MixedTableau MixedTableau::new_zero_state(uint32_t n, uint64_t meas_seed) {
    MixedTableau t;
    t.n_ = n;
    t.rng_.seed(meas_seed);
    t.gens_.reserve(n);
    for (uint32_t q = 0; q < n; ++q) t.gens_.push_back(PauliString::z_at(n, q));
    return t;
}

void MixedTableau::append_qubits_zero(uint32_t k) {
    const uint32_t n0 = n_;
    for (auto& g : gens_) g.append_identity_sites(k);
    n_ += k;
    for (uint32_t i = 0; i < k; ++i) gens_.push_back(PauliString::z_at(n_, n0 + i));
}

void MixedTableau::apply_two_qubit(const TwoQubitClifford& gate, uint32_t a, uint32_t b) {
    if (a >= n_ || b >= n_) throw std::invalid_argument("apply_two_qubit: site out of range");
    if (a == b) throw std::invalid_argument("apply_two_qubit: sites must differ");
    for (auto& g : gens_) {
        const uint8_t in = static_cast<uint8_t>((g.x(a) ? 1 : 0) | (g.z(a) ? 2 : 0) |
                                                (g.x(b) ? 4 : 0) | (g.z(b) ? 8 : 0));
        if (!in) continue;
        const auto [out, flip] = gate.conjugate(in);
        g.set_x(a, out & 1);
        g.set_z(a, out & 2);
        g.set_x(b, out & 4);
        g.set_z(b, out & 8);
        if (flip) g.set_phase_pow(g.phase_pow() ^ 2);
    }
}

bool MixedTableau::measure_z(uint32_t q) {
    if (q >= n_) throw std::invalid_argument("measure_z: site out of range");

    // (a) Anticommuting generators are exactly those with an X component at q.
    size_t first = SIZE_MAX;
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (!gens_[i].x(q)) continue;
        if (first == SIZE_MAX) {
            first = i;
        } else {
            gens_[i].mul_inplace(gens_[first]);
        }
    }
    if (first != SIZE_MAX) {
        const bool outcome = rng_() & 1;
        gens_[first] = PauliString::z_at(n_, q, outcome);
        return outcome;
    }

    // (b) Everything commutes with Z_q. A literal +/-Z_q row decides outright;
    // otherwise membership needs a sign-tracked reduction.
    bool touched = false;
    for (const auto& g : gens_) {
        if (!g.z(q)) continue;
        touched = true;
        const auto sb = g.support_bounds();
        if (sb->first == q && sb->second == q) return g.is_negative();
    }
    if (touched) {
        PauliString t = PauliString::z_at(n_, q);
        if (PauliEchelon(gens_).reduce(t)) return t.phase_pow() == 2;
    }

    // (c) Z_q is not in the group: fair coin, one more generator.
    const bool outcome = rng_() & 1;
    gens_.push_back(PauliString::z_at(n_, q, outcome));
    return outcome;
}

void MixedTableau::trace_replace_mixed(uint32_t q) {
    if (q >= n_) throw std::invalid_argument("trace_replace_mixed: site out of range");

    // Leave at most one row with an X component at q ...
    size_t px = SIZE_MAX;
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (!gens_[i].x(q)) continue;
        if (px == SIZE_MAX) {
            px = i;
        } else {
            gens_[i].mul_inplace(gens_[px]);
        }
    }
    // ... and at most one further row with only Z at q, then drop both.
    size_t pz = SIZE_MAX;
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (i == px || !gens_[i].z(q)) continue;
        if (pz == SIZE_MAX) {
            pz = i;
        } else {
            gens_[i].mul_inplace(gens_[pz]);
        }
    }
    if (px != SIZE_MAX && pz != SIZE_MAX && px < pz) std::swap(px, pz);
    if (px != SIZE_MAX) gens_.erase(gens_.begin() + static_cast<ptrdiff_t>(px));
    if (pz != SIZE_MAX) gens_.erase(gens_.begin() + static_cast<ptrdiff_t>(pz));
}

void MixedTableau::discard_qubit(uint32_t q) {
    if (q >= n_) throw std::invalid_argument("discard_qubit: site out of range");
    for (const auto& g : gens_)
        if (g.x(q))
            throw std::invalid_argument("discard_qubit: site has X support, still correlated");

    // Reduce to a single row carrying Z at q.
    size_t pivot = SIZE_MAX;
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (!gens_[i].z(q)) continue;
        if (pivot == SIZE_MAX) {
            pivot = i;
        } else {
            gens_[i].mul_inplace(gens_[pivot]);
        }
    }
    if (pivot != SIZE_MAX) {
        const auto sb = gens_[pivot].support_bounds();
        if (!(sb->first == q && sb->second == q)) {
            // The pivot straddles other sites; the site is discardable only
            // if the group still contains +/-Z_q outright.
            PauliString t = PauliString::z_at(n_, q);
            if (!PauliEchelon(gens_).reduce(t))
                throw std::invalid_argument("discard_qubit: site still correlated");
            gens_[pivot] = PauliString::z_at(n_, q, t.phase_pow() == 2);
        }
        gens_.erase(gens_.begin() + static_cast<ptrdiff_t>(pivot));
    }
    // A site no generator touches is maximally mixed: removing it is tr_q.
    for (auto& g : gens_) g.remove_site(q);
    n_ -= 1;
}

bool MixedTableau::noise_event(uint32_t q, double p, std::mt19937_64& rng) {
    if (q >= n_) throw std::invalid_argument("noise_event: site out of range");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("noise_event: p outside [0,1]");
    const bool applied = uniform_double(rng) < p;
    if (applied) trace_replace_mixed(q);
    return applied;
}

void MixedTableau::permute_sites(const std::vector<uint32_t>& new_of_old) {
    for (auto& g : gens_) g = g.permuted(new_of_old);
}

void MixedTableau::check_invariants() const {
    if (gens_.size() > n_) throw std::logic_error("tableau: more generators than qubits");
    for (const auto& g : gens_) {
        if (g.num_sites() != n_) throw std::logic_error("tableau: generator width mismatch");
        if (!g.is_hermitian()) throw std::logic_error("tableau: generator has imaginary phase");
        if (g.is_identity_bits()) throw std::logic_error("tableau: identity generator");
    }
    for (size_t i = 0; i < gens_.size(); ++i)
        for (size_t j = i + 1; j < gens_.size(); ++j)
            if (!gens_[i].commutes(gens_[j]))
                throw std::logic_error("tableau: generators anticommute");
    if (!gens_.empty()) {
        std::vector<uint32_t> all(n_);
        std::iota(all.begin(), all.end(), 0u);
        if (Gf2Matrix::restriction(gens_, all).rank() != gens_.size())
            throw std::logic_error("tableau: generators dependent over GF(2)");
    }
}

std::string MixedTableau::to_text() const {
    std::string out = std::to_string(n_) + " " + std::to_string(gens_.size()) + "\n";
    for (const auto& g : gens_) {
        if (!g.is_hermitian()) throw std::logic_error("tableau: generator has imaginary phase");
        out += g.str();
        out += '\n';
    }
    return out;
}

MixedTableau MixedTableau::from_text(const std::string& text, uint64_t meas_seed) {
    std::istringstream in(text);
    uint64_t n = 0, m = 0;
    if (!(in >> n >> m)) throw std::runtime_error("tableau snapshot: bad header");
    MixedTableau t;
    t.n_ = static_cast<uint32_t>(n);
    t.rng_.seed(meas_seed);
    std::string line;
    std::getline(in, line);  // rest of the header line
    for (uint64_t i = 0; i < m; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("tableau snapshot: truncated");
        PauliString g = PauliString::from_label(line);
        if (g.num_sites() != t.n_)
            throw std::runtime_error("tableau snapshot: generator width mismatch");
        if (!g.is_hermitian())
            throw std::runtime_error("tableau snapshot: imaginary generator phase");
        t.gens_.push_back(std::move(g));
    }
    return t;
}

}  // namespace sebd
