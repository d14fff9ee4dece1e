#include "doctest.h"

#include <random>

#include "sebd/pauli.hpp"
#include "support/oracles.hpp"

using sebd::PauliString;

TEST_SUITE("pauli") {

TEST_CASE("single-site products carry the right i powers") {
    auto X = PauliString::from_label("X");
    auto Z = PauliString::from_label("Z");
    auto Y = PauliString::from_label("Y");
    CHECK((X * Z).str() == "-iY");
    CHECK((Z * X).str() == "+iY");
    CHECK((X * Y).str() == "+iZ");
    CHECK((Y * X).str() == "-iZ");
    CHECK((Z * Y).str() == "-iX");
    CHECK((Y * Z).str() == "+iX");
    CHECK((X * X).str() == "+I");
    CHECK((Y * Y).str() == "+I");
}

TEST_CASE("XX times ZZ is -YY") {
    auto a = PauliString::from_label("XX");
    auto b = PauliString::from_label("ZZ");
    CHECK((a * b).str() == "-YY");
    // cross-check against dense 4x4 matrices
    Eigen::MatrixXcd d = oracles::dense_pauli(a) * oracles::dense_pauli(b);
    CHECK((d - oracles::dense_pauli(a * b)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multiply agrees with dense matrices on small strings") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 300; ++it) {
        const uint32_t n = 1 + rng() % 4;
        auto a = oracles::random_pauli(rng, n, true);
        auto b = oracles::random_pauli(rng, n, true);
        Eigen::MatrixXcd prod = oracles::dense_pauli(a) * oracles::dense_pauli(b);
        CHECK((prod - oracles::dense_pauli(a * b)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("multiply agrees with the per-site reference across word boundaries") {
    std::mt19937_64 rng(12);
    for (uint32_t n : {1u, 5u, 63u, 64u, 65u, 130u, 1000u}) {
        for (int it = 0; it < 40; ++it) {
            auto a = oracles::random_pauli(rng, n, true);
            auto b = oracles::random_pauli(rng, n, true);
            CHECK(a * b == oracles::slow_multiply(a, b));
        }
    }
}

TEST_CASE("multiplication is associative including phases") {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 200; ++it) {
        const uint32_t n = 1 + rng() % 80;
        auto a = oracles::random_pauli(rng, n, true);
        auto b = oracles::random_pauli(rng, n, true);
        auto c = oracles::random_pauli(rng, n, true);
        CHECK((a * b) * c == a * (b * c));
    }
}

TEST_CASE("commutes matches product order sensitivity") {
    std::mt19937_64 rng(14);
    for (int it = 0; it < 300; ++it) {
        const uint32_t n = 1 + rng() % 100;
        auto a = oracles::random_pauli(rng, n);
        auto b = oracles::random_pauli(rng, n);
        CHECK(a.commutes(b) == (a * b == b * a));
    }
}

TEST_CASE("support bounds") {
    CHECK(PauliString::from_label("IXZI").support_bounds() == std::pair<uint32_t, uint32_t>{1, 2});
    CHECK(PauliString::from_label("IIII").support_bounds() == std::nullopt);
    CHECK(PauliString::from_label("Y").support_bounds() == std::pair<uint32_t, uint32_t>{0, 0});
    CHECK(!PauliString::identity(0).support_bounds().has_value());

    // support of a product is contained in the union of supports
    std::mt19937_64 rng(15);
    for (int it = 0; it < 200; ++it) {
        const uint32_t n = 2 + rng() % 120;
        auto a = oracles::random_pauli(rng, n);
        auto b = oracles::random_pauli(rng, n);
        auto sa = a.support_bounds(), sb = b.support_bounds(), sp = (a * b).support_bounds();
        if (!sp) continue;
        uint32_t lo = UINT32_MAX, hi = 0;
        if (sa) { lo = sa->first; hi = sa->second; }
        if (sb) { lo = std::min(lo, sb->first); hi = std::max(hi, sb->second); }
        CHECK(sp->first >= lo);
        CHECK(sp->second <= hi);
    }
}

TEST_CASE("lead column follows site-major x-before-z order") {
    CHECK(PauliString::from_label("IXZ").lead_column() == 2);
    CHECK(PauliString::from_label("IZX").lead_column() == 3);
    CHECK(PauliString::from_label("IYI").lead_column() == 2);
    CHECK(PauliString::from_label("III").lead_column() == UINT32_MAX);
}

TEST_CASE("text round trip is bit exact") {
    std::mt19937_64 rng(16);
    for (int it = 0; it < 200; ++it) {
        const uint32_t n = rng() % 90;
        auto p = oracles::random_pauli(rng, n, true);
        CHECK(PauliString::from_label(p.str()) == p);
    }
    CHECK(PauliString::from_label("XIZY").str() == "+XIZY");
    CHECK(PauliString::from_label("-YY").str() == "-YY");
}

TEST_CASE("restriction gathers bits and drops the phase") {
    auto p = PauliString::from_label("-IXZI");
    auto r = p.restricted({1, 2});
    CHECK(r.num_sites() == 2);
    CHECK(r.phase_pow() == 0);
    CHECK(r.x(0));
    CHECK(!r.z(0));
    CHECK(!r.x(1));
    CHECK(r.z(1));
}

TEST_CASE("permutation round trips and keeps the phase") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 50; ++it) {
        const uint32_t n = 1 + rng() % 70;
        auto p = oracles::random_pauli(rng, n, true);
        std::vector<uint32_t> perm(n);
        for (uint32_t i = 0; i < n; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<uint32_t> inv(n);
        for (uint32_t i = 0; i < n; ++i) inv[perm[i]] = i;
        CHECK(p.permuted(perm).permuted(inv) == p);
        CHECK(p.permuted(perm).phase_pow() == p.phase_pow());
    }
}

TEST_CASE("site insertion and removal") {
    auto p = PauliString::from_label("-XZY");
    p.append_identity_sites(2);
    CHECK(p.str() == "-XZYII");
    p.remove_site(1);
    CHECK(p.str() == "-XYII");
    p.remove_site(3);
    CHECK(p.str() == "-XYI");
}

TEST_CASE("degenerate and error cases") {
    auto e = PauliString::identity(0);
    CHECK(e.str() == "+");
    CHECK(e.commutes(e));
    CHECK((e * e).str() == "+");

    CHECK_THROWS_AS(PauliString::from_label("XQ"), std::invalid_argument);
    CHECK_THROWS_AS(PauliString::z_at(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(PauliString::from_label("XX").commutes(PauliString::from_label("X")),
                    std::invalid_argument);
    CHECK_THROWS_AS(PauliString::from_label("XZ").restricted({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(PauliString::from_label("XZ").restricted({2}), std::invalid_argument);
}

}  // TEST_SUITE
