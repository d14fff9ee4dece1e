#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sebd/dense.hpp"
#include "sebd/pauli.hpp"
#include "sebd/tableau.hpp"
#include "support/oracles.hpp"

using sebd::DenseState;
using sebd::MixedTableau;
using sebd::PauliEchelon;
using sebd::PauliString;

namespace {

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

std::set<std::string> gen_strings(const MixedTableau& t) {
    std::set<std::string> out;
    for (const auto& g : t.generators()) out.insert(g.str());
    return out;
}

}  // namespace

TEST_SUITE("tableau") {

TEST_CASE("new_zero_state lays down one +Z per qubit") {
    const auto t3 = MixedTableau::new_zero_state(3);
    CHECK(t3.num_qubits() == 3);
    CHECK(t3.num_generators() == 3);
    CHECK(t3.is_pure());
    CHECK(gen_strings(t3) == std::set<std::string>{"+ZII", "+IZI", "+IIZ"});

    const auto t1 = MixedTableau::new_zero_state(1);
    CHECK(gen_strings(t1) == std::set<std::string>{"+Z"});

    const auto t0 = MixedTableau::new_zero_state(0);
    CHECK(t0.num_qubits() == 0);
    CHECK(t0.num_generators() == 0);
    t0.check_invariants();
}

TEST_CASE("append_qubits_zero adds fresh |0> sites at the end") {
    auto t = MixedTableau::new_zero_state(0);
    t.append_qubits_zero(2);
    CHECK(gen_strings(t) == std::set<std::string>{"+ZI", "+IZ"});

    auto bell = MixedTableau::from_text("2 2\n+XX\n+ZZ\n");
    bell.append_qubits_zero(1);
    CHECK(bell.num_qubits() == 3);
    CHECK(bell.num_generators() == 3);
    CHECK(bell.is_pure());
    CHECK(gen_strings(bell) == std::set<std::string>{"+XXI", "+ZZI", "+IIZ"});
    bell.check_invariants();
}

TEST_CASE("apply_two_qubit reproduces textbook conjugations") {
    auto t = MixedTableau::new_zero_state(2);
    t.apply_two_qubit(oracles::cnot_gate(), 0, 1);
    CHECK(gen_strings(t) == std::set<std::string>{"+ZI", "+ZZ"});

    auto bell = MixedTableau::new_zero_state(2);
    bell.apply_two_qubit(oracles::hadamard_on_first(), 0, 1);
    bell.apply_two_qubit(oracles::cnot_gate(), 0, 1);
    CHECK(gen_strings(bell) == std::set<std::string>{"+XX", "+ZZ"});

    CHECK_THROWS_AS(t.apply_two_qubit(oracles::cnot_gate(), 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(t.apply_two_qubit(oracles::cnot_gate(), 0, 2), std::invalid_argument);
}

TEST_CASE("random gates match the dense 2-qubit conjugation") {
    std::mt19937_64 rng(51);
    for (int it = 0; it < 50; ++it) {
        auto t = oracles::random_mixed_tableau(rng, 2, 8);
        auto d = DenseState::from_tableau(t);
        const auto g = sebd::random_two_qubit_clifford(rng);
        t.apply_two_qubit(g, 0, 1);
        d.apply_two_qubit(g, 0, 1);
        CHECK(max_diff(DenseState::from_tableau(t).matrix(), d.matrix()) < 1e-9);
        t.check_invariants();
    }
}

TEST_CASE("measure_z case (a): random outcome collapses to a literal Z row") {
    auto t = MixedTableau::new_zero_state(2);
    t.apply_two_qubit(oracles::hadamard_on_first(), 0, 1);  // |+>|0>
    const bool b = t.measure_z(0);
    const std::string want = (b ? "-ZI" : "+ZI");
    CHECK(gen_strings(t) == std::set<std::string>{want, "+IZ"});
    CHECK(t.measure_z(0) == b);  // projective repeatability
    CHECK(t.measure_z(0) == b);

    // 50/50 statistics across fresh |+> states.
    int ones = 0;
    const int shots = 10000;
    for (int s = 0; s < shots; ++s) {
        auto p = MixedTableau::new_zero_state(2, 1000 + s);
        p.apply_two_qubit(oracles::hadamard_on_first(), 0, 1);
        ones += p.measure_z(0);
    }
    CHECK(std::abs(ones - shots / 2) < 3 * std::sqrt(shots * 0.25));
}

TEST_CASE("measure_z on a Bell pair correlates the two sites") {
    int ones = 0;
    const int shots = 10000;
    for (int s = 0; s < shots; ++s) {
        auto t = MixedTableau::from_text("2 2\n+XX\n+ZZ\n", 500 + s);
        const bool b = t.measure_z(0);
        ones += b;
        const std::string sign = b ? "-" : "+";
        // Post-group generated by {(-1)^b Z1, (-1)^b Z2}.
        PauliEchelon ech(t.generators());
        PauliString z1 = PauliString::z_at(2, 0, b);
        PauliString z2 = PauliString::z_at(2, 1, b);
        CHECK((ech.reduce(z1) && z1.phase_pow() == 0));
        CHECK((ech.reduce(z2) && z2.phase_pow() == 0));
        CHECK(t.measure_z(1) == b);
    }
    CHECK(std::abs(ones - shots / 2) < 3 * std::sqrt(shots * 0.25));
}

TEST_CASE("measure_z case (b): deterministic outcome leaves the state alone") {
    auto t = MixedTableau::from_text("1 1\n+Z\n");
    CHECK(t.measure_z(0) == false);
    CHECK(gen_strings(t) == std::set<std::string>{"+Z"});

    auto m = MixedTableau::from_text("1 1\n-Z\n");
    CHECK(m.measure_z(0) == true);

    // Z2 is in the group only as a product: {+ZZ, +ZI} -> +IZ, {-ZZ, +ZI} -> -IZ.
    auto prod = MixedTableau::from_text("2 2\n+ZZ\n+ZI\n");
    CHECK(prod.measure_z(1) == false);
    CHECK(gen_strings(prod) == std::set<std::string>{"+ZZ", "+ZI"});
    auto nprod = MixedTableau::from_text("2 2\n-ZZ\n+ZI\n");
    CHECK(nprod.measure_z(1) == true);
    auto nnprod = MixedTableau::from_text("2 2\n-ZZ\n-ZI\n");
    CHECK(nnprod.measure_z(1) == false);
}

TEST_CASE("measure_z case (c): an untouched or mixed qubit grows the group") {
    auto t = MixedTableau::from_text("2 1\n+ZI\n", 7);
    const bool b = t.measure_z(1);
    CHECK(t.num_generators() == 2);
    const std::string want = (b ? "-IZ" : "+IZ");
    CHECK(gen_strings(t).count(want) == 1);
    CHECK(t.measure_z(1) == b);

    int ones = 0;
    const int shots = 10000;
    for (int s = 0; s < shots; ++s) {
        auto m = MixedTableau::from_text("1 0\n", 9000 + s);
        ones += m.measure_z(0);
    }
    CHECK(std::abs(ones - shots / 2) < 3 * std::sqrt(shots * 0.25));
}

TEST_CASE("trace_replace_mixed wipes a site and is idempotent") {
    auto z = MixedTableau::new_zero_state(1);
    z.trace_replace_mixed(0);
    CHECK(z.num_generators() == 0);
    CHECK(z.num_qubits() == 1);

    auto bell = MixedTableau::from_text("2 2\n+XX\n+ZZ\n");
    bell.trace_replace_mixed(0);
    CHECK(bell.num_generators() == 0);

    auto g = MixedTableau::from_text("3 3\n+XXX\n+ZZI\n+IZZ\n");
    g.trace_replace_mixed(1);
    CHECK(gen_strings(g) == std::set<std::string>{"+ZIZ"});
    g.trace_replace_mixed(1);
    CHECK(gen_strings(g) == std::set<std::string>{"+ZIZ"});
    g.check_invariants();
}

TEST_CASE("trace_replace_mixed keeps only group elements trivial at the site") {
    // Independent oracle: enumerate all group elements of random 4-qubit
    // states and keep those acting trivially at q; ranks must match.
    std::mt19937_64 rng(52);
    for (int it = 0; it < 30; ++it) {
        const uint32_t n = 3 + rng() % 2;
        const uint32_t q = rng() % n;
        auto t = oracles::random_mixed_tableau(rng, n);
        const auto before = DenseState::from_tableau(t);
        auto d = before;
        d.trace_replace(q);
        t.trace_replace_mixed(q);
        t.check_invariants();
        for (const auto& g : t.generators()) {
            CHECK(!g.x(q));
            CHECK(!g.z(q));
        }
        CHECK(max_diff(DenseState::from_tableau(t).matrix(), d.matrix()) < 1e-9);
    }
}

TEST_CASE("discard_qubit removes product sites and reindexes") {
    auto t = MixedTableau::from_text("2 2\n+ZI\n+IZ\n");
    t.discard_qubit(0);
    CHECK(t.num_qubits() == 1);
    CHECK(gen_strings(t) == std::set<std::string>{"+Z"});

    // Deterministically measured site whose Z appears only as a product.
    auto prod = MixedTableau::from_text("2 2\n-ZZ\n+ZI\n");
    prod.discard_qubit(1);
    CHECK(gen_strings(prod) == std::set<std::string>{"+Z"});
    auto prod2 = MixedTableau::from_text("2 2\n-ZZ\n-ZI\n");
    prod2.discard_qubit(1);
    CHECK(gen_strings(prod2) == std::set<std::string>{"-Z"});

    // A maximally mixed site can always be dropped.
    auto mixed = MixedTableau::from_text("2 1\n+ZI\n");
    mixed.discard_qubit(1);
    CHECK(gen_strings(mixed) == std::set<std::string>{"+Z"});

    auto bell = MixedTableau::from_text("2 2\n+XX\n+ZZ\n");
    CHECK_THROWS_AS(bell.discard_qubit(0), std::invalid_argument);
    auto corr = MixedTableau::from_text("2 1\n+ZZ\n");
    CHECK_THROWS_AS(corr.discard_qubit(1), std::invalid_argument);
}

TEST_CASE("measure-then-discard dismantles any state without disturbing the rest") {
    std::mt19937_64 rng(53);
    for (int it = 0; it < 40; ++it) {
        auto t = oracles::random_mixed_tableau(rng, 4);
        auto d = DenseState::from_tableau(t);
        while (t.num_qubits() > 0) {
            const bool b = t.measure_z(0);
            d.project_z(0, b);
            t.discard_qubit(0);
            d.discard(0);
            t.check_invariants();
            CHECK(max_diff(DenseState::from_tableau(t).matrix(), d.matrix()) < 1e-9);
        }
        CHECK(t.num_qubits() == 0);
        CHECK(t.num_generators() == 0);
    }
}

TEST_CASE("noise_event applies the channel with the stated frequency") {
    std::mt19937_64 rng(54);
    auto t = MixedTableau::new_zero_state(1);
    for (int i = 0; i < 100; ++i) CHECK(!t.noise_event(0, 0.0, rng));
    CHECK(t.num_generators() == 1);

    auto all = MixedTableau::new_zero_state(5);
    for (uint32_t q = 0; q < 5; ++q) CHECK(all.noise_event(q, 1.0, rng));
    CHECK(all.num_generators() == 0);

    int applied = 0;
    const int shots = 10000;
    for (int s = 0; s < shots; ++s) {
        auto m = MixedTableau::new_zero_state(1);
        applied += m.noise_event(0, 0.3, rng);
    }
    CHECK(std::abs(applied - shots * 0.3) < 3 * std::sqrt(shots * 0.3 * 0.7));

    CHECK_THROWS_AS(t.noise_event(0, -0.1, rng), std::invalid_argument);
    CHECK_THROWS_AS(t.noise_event(0, 1.1, rng), std::invalid_argument);
}

TEST_CASE("mixed operation sequences track the dense oracle exactly") {
    std::mt19937_64 rng(55);
    for (int seq = 0; seq < 60; ++seq) {
        const uint32_t n = 2 + rng() % 3;
        auto t = MixedTableau::new_zero_state(n, rng());
        auto d = DenseState::from_tableau(t);
        for (int op = 0; op < 25; ++op) {
            const uint64_t kind = rng() % 5;
            const uint32_t a = static_cast<uint32_t>(rng() % n);
            if (kind == 3) {
                const bool b = t.measure_z(a);
                d.project_z(a, b);
            } else if (kind == 4) {
                t.trace_replace_mixed(a);
                d.trace_replace(a);
            } else {
                uint32_t b = static_cast<uint32_t>(rng() % n);
                while (b == a) b = static_cast<uint32_t>(rng() % n);
                const auto g = sebd::random_two_qubit_clifford(rng);
                t.apply_two_qubit(g, a, b);
                d.apply_two_qubit(g, a, b);
            }
            t.check_invariants();
            d.check_valid();
            CHECK(max_diff(DenseState::from_tableau(t).matrix(), d.matrix()) < 1e-9);
        }
    }
}

TEST_CASE("snapshots round-trip bit-exactly") {
    std::mt19937_64 rng(56);
    for (int it = 0; it < 25; ++it) {
        const auto t = oracles::random_mixed_tableau(rng, 1 + rng() % 6);
        const std::string text = t.to_text();
        const auto back = MixedTableau::from_text(text);
        CHECK(back.to_text() == text);
        CHECK(back.generators() == t.generators());
        CHECK(back.num_qubits() == t.num_qubits());
    }
    CHECK(MixedTableau::from_text("0 0\n").to_text() == "0 0\n");
    CHECK(MixedTableau::from_text("3 1\n-XYZ\n").to_text() == "3 1\n-XYZ\n");

    CHECK_THROWS_AS(MixedTableau::from_text("garbage"), std::runtime_error);
    CHECK_THROWS_AS(MixedTableau::from_text("2 2\n+XX\n"), std::runtime_error);
    CHECK_THROWS_AS(MixedTableau::from_text("3 1\n+XX\n"), std::runtime_error);
    CHECK_THROWS_AS(MixedTableau::from_text("2 1\n+iXX\n"), std::runtime_error);
}

TEST_CASE("permute_sites relabels coherently") {
    auto t = MixedTableau::from_text("2 1\n+XZ\n");
    t.permute_sites({1, 0});
    CHECK(gen_strings(t) == std::set<std::string>{"+ZX"});

    std::mt19937_64 rng(57);
    for (int it = 0; it < 20; ++it) {
        const uint32_t n = 2 + rng() % 4;
        auto s = oracles::random_mixed_tableau(rng, n);
        const auto orig = s.generators();
        std::vector<uint32_t> perm(n);
        for (uint32_t q = 0; q < n; ++q) perm[q] = q;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<uint32_t> inv(n);
        for (uint32_t q = 0; q < n; ++q) inv[perm[q]] = q;
        s.permute_sites(perm);
        s.check_invariants();
        s.permute_sites(inv);
        CHECK(s.generators() == orig);
    }
}

TEST_CASE("echelon membership reduction tracks signs") {
    const auto ghz = MixedTableau::from_text("3 3\n+XXX\n+ZZI\n+IZZ\n");
    PauliEchelon ech(ghz.generators());
    PauliString pos = PauliString::from_label("+ZIZ");
    CHECK(ech.reduce(pos));
    CHECK(pos.phase_pow() == 0);
    PauliString neg = PauliString::from_label("-ZIZ");
    CHECK(ech.reduce(neg));
    CHECK(neg.phase_pow() == 2);
    PauliString out = PauliString::from_label("+ZII");
    CHECK(!ech.reduce(out));
}

TEST_CASE("check_invariants flags corrupted states") {
    CHECK_THROWS_AS(MixedTableau::from_text("2 2\n+XI\n+ZI\n").check_invariants(),
                    std::logic_error);
    CHECK_THROWS_AS(MixedTableau::from_text("2 2\n+ZI\n+ZI\n").check_invariants(),
                    std::logic_error);
    CHECK_THROWS_AS(MixedTableau::from_text("1 2\n+Z\n+X\n").check_invariants(),
                    std::logic_error);
    CHECK_THROWS_AS(MixedTableau::from_text("2 1\n+II\n").check_invariants(),
                    std::logic_error);
}

}  // TEST_SUITE
