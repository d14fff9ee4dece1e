#include "doctest.h"

#include <array>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "sebd/clifford.hpp"
#include "sebd/pauli.hpp"
#include "sebd/rng.hpp"

using sebd::clifford_from_index;
using sebd::kNumSymplectic4;
using sebd::kNumTwoQubitCliffords;
using sebd::PauliString;
using sebd::random_two_qubit_clifford;
using sebd::sp_table;
using sebd::TwoQubitClifford;

namespace {

// The Hermitian two-site Pauli named by a 4-bit code (bit0=x1 bit1=z1 bit2=x2 bit3=z2).
PauliString canon(uint8_t code) {
    PauliString p(2);
    p.set_x(0, code & 1);
    p.set_z(0, code & 2);
    p.set_x(1, code & 4);
    p.set_z(1, code & 8);
    return p;
}

uint8_t code_of(const PauliString& p) {
    return static_cast<uint8_t>((p.x(0) ? 1 : 0) | (p.z(0) ? 2 : 0) | (p.x(1) ? 4 : 0) |
                                (p.z(1) ? 8 : 0));
}

int num_y(uint8_t code) {
    return (((code & 3) == 3) ? 1 : 0) + (((code & 12) == 12) ? 1 : 0);
}

// Finds the symplectic element with the given unsigned generator images.
uint16_t find_sp(uint8_t x1, uint8_t z1, uint8_t x2, uint8_t z2) {
    const auto& table = sp_table();
    for (uint16_t i = 0; i < table.size(); ++i) {
        const auto& im = table[i].images;
        if (im[0] == x1 && im[1] == z1 && im[2] == x2 && im[3] == z2) return i;
    }
    REQUIRE(false);
    return 0;
}

}  // namespace

TEST_SUITE("clifford") {

TEST_CASE("the group has exactly 720 symplectic elements and 11520 gates") {
    CHECK(sp_table().size() == 720);
    CHECK(kNumSymplectic4 == 720);
    CHECK(kNumTwoQubitCliffords == 11520);
}

TEST_CASE("every element satisfies the symplectic conditions, rechecked independently") {
    std::set<std::array<uint8_t, 4>> seen;
    for (const auto& e : sp_table()) {
        std::vector<PauliString> img;
        for (int k = 0; k < 4; ++k) img.push_back(canon(e.images[k]));
        // X'/Z' anticommute within a site's pair and commute across pairs.
        CHECK(!img[0].commutes(img[1]));
        CHECK(!img[2].commutes(img[3]));
        CHECK(img[0].commutes(img[2]));
        CHECK(img[0].commutes(img[3]));
        CHECK(img[1].commutes(img[2]));
        CHECK(img[1].commutes(img[3]));
        for (int k = 0; k < 4; ++k) CHECK(!img[k].is_identity_bits());
        seen.insert({e.images[0], e.images[1], e.images[2], e.images[3]});
    }
    CHECK(seen.size() == 720);
}

TEST_CASE("the identity gate fixes every Pauli") {
    const auto id = TwoQubitClifford::identity();
    CHECK(id.signs == 0);
    for (uint8_t in = 0; in < 16; ++in) {
        const auto [out, flip] = id.conjugate(in);
        CHECK(out == in);
        CHECK(!flip);
    }
    CHECK(id.image(0) == PauliString::from_label("XI"));
    CHECK(id.image(1) == PauliString::from_label("ZI"));
    CHECK(id.image(2) == PauliString::from_label("IX"));
    CHECK(id.image(3) == PauliString::from_label("IZ"));
}

TEST_CASE("conjugation matches the explicit signed generator-product expansion") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_two_qubit_clifford(rng);
        for (uint8_t in = 0; in < 16; ++in) {
            PauliString prod = PauliString::identity(2);
            for (int k = 0; k < 4; ++k)
                if (in >> k & 1) prod.mul_inplace(g.image(k));
            const int phase = (prod.phase_pow() + num_y(in)) & 3;
            REQUIRE((phase & 1) == 0);
            const auto [out, flip] = g.conjugate(in);
            CHECK(out == code_of(prod));
            CHECK(flip == (phase == 2));
        }
    }
}

TEST_CASE("conjugation is a signed group homomorphism") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        const auto g = random_two_qubit_clifford(rng);
        const uint8_t a = rng() & 15, b = rng() & 15;
        const auto [ao, as] = g.conjugate(a);
        const auto [bo, bs] = g.conjugate(b);
        const auto [po, ps] = g.conjugate(a ^ b);
        CHECK(po == (ao ^ bo));
        // P_a P_b = i^k P_{a^b} and P_a' P_b' = i^k' P_{a'^b'}; the signed images
        // must reproduce the same relation: k + 2*s_ab == k' + 2*(s_a + s_b) mod 4.
        const int k = (canon(a) * canon(b)).phase_pow();
        const int kp = (canon(ao) * canon(bo)).phase_pow();
        CHECK(((k + 2 * ps) & 3) == ((kp + 2 * (as + bs)) & 3));
    }
}

TEST_CASE("conjugation preserves the commutation structure") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_two_qubit_clifford(rng);
        for (uint8_t a = 0; a < 16; ++a)
            for (uint8_t b = 0; b < 16; ++b)
                CHECK(canon(a).commutes(canon(b)) ==
                      canon(g.conjugate(a).first).commutes(canon(g.conjugate(b).first)));
    }
}

TEST_CASE("sign bits negate exactly the chosen generator images") {
    for (int k = 0; k < 4; ++k) {
        TwoQubitClifford g = TwoQubitClifford::identity();
        g.signs = static_cast<uint8_t>(1u << k);
        for (int j = 0; j < 4; ++j) {
            CHECK(g.image(j).is_negative() == (j == k));
            const auto [out, flip] = g.conjugate(static_cast<uint8_t>(1u << j));
            CHECK(out == (1u << j));
            CHECK(flip == (j == k));
        }
    }
}

TEST_CASE("CNOT conjugations match hand-computed images") {
    // X1 -> X1X2, Z1 -> Z1, X2 -> X2, Z2 -> Z1Z2.
    const TwoQubitClifford cnot{find_sp(5, 2, 4, 10), 0};
    CHECK(cnot.conjugate(3) == std::pair<uint8_t, bool>{7, false});    // Y1 -> +Y1X2
    CHECK(cnot.conjugate(12) == std::pair<uint8_t, bool>{14, false});  // Y2 -> +Z1Y2
    CHECK(cnot.conjugate(6) == std::pair<uint8_t, bool>{6, false});    // Z1X2 -> +Z1X2
    CHECK(cnot.conjugate(9) == std::pair<uint8_t, bool>{15, true});    // X1Z2 -> -Y1Y2
}

TEST_CASE("SWAP exchanges the two sites") {
    const TwoQubitClifford swap{find_sp(4, 8, 1, 2), 0};
    for (uint8_t in = 0; in < 16; ++in) {
        const uint8_t swapped = static_cast<uint8_t>(((in & 3) << 2) | ((in >> 2) & 3));
        CHECK(swap.conjugate(in) == std::pair<uint8_t, bool>{swapped, false});
    }
}

TEST_CASE("index round trips cover all gates and out-of-range throws") {
    std::set<std::pair<uint16_t, uint8_t>> seen;
    for (uint32_t idx = 0; idx < kNumTwoQubitCliffords; ++idx) {
        const auto g = clifford_from_index(idx);
        CHECK(g.sp_index < kNumSymplectic4);
        seen.insert({g.sp_index, g.signs});
    }
    CHECK(seen.size() == kNumTwoQubitCliffords);
    CHECK_THROWS_AS(clifford_from_index(kNumTwoQubitCliffords), std::invalid_argument);
    CHECK_THROWS_AS(TwoQubitClifford::identity().image(4), std::invalid_argument);
}

TEST_CASE("random draws are deterministic per seed and roughly uniform") {
    std::mt19937_64 a(99), b(99);
    for (int i = 0; i < 100; ++i) {
        const auto ga = random_two_qubit_clifford(a);
        const auto gb = random_two_qubit_clifford(b);
        CHECK(ga.sp_index == gb.sp_index);
        CHECK(ga.signs == gb.signs);
    }

    std::mt19937_64 rng(100);
    std::vector<int> sp_counts(720, 0), sign_counts(16, 0);
    const int n = 72000;
    for (int i = 0; i < n; ++i) {
        const auto g = random_two_qubit_clifford(rng);
        ++sp_counts[g.sp_index];
        ++sign_counts[g.signs];
    }
    for (int c : sp_counts) {  // mean 100, sd 10
        CHECK(c > 40);
        CHECK(c < 180);
    }
    for (int c : sign_counts) {  // mean 4500, sd ~67
        CHECK(c > 4000);
        CHECK(c < 5000);
    }
}

}  // TEST_SUITE
