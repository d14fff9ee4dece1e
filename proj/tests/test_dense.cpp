#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "sebd/clifford.hpp"
#include "sebd/dense.hpp"
#include "sebd/tableau.hpp"
#include "support/oracles.hpp"

using sebd::DenseState;
using sebd::entropy_dense;
using sebd::MixedTableau;
using sebd::operator_entanglement_dense;
using sebd::PauliString;
using sebd::to_unitary;

namespace {

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

MixedTableau bell_pair() {
    auto t = MixedTableau::new_zero_state(2);
    t.apply_two_qubit(oracles::hadamard_on_first(), 0, 1);
    t.apply_two_qubit(oracles::cnot_gate(), 0, 1);
    return t;
}

MixedTableau ghz3() {
    auto t = MixedTableau::new_zero_state(3);
    t.apply_two_qubit(oracles::hadamard_on_first(), 0, 1);
    t.apply_two_qubit(oracles::cnot_gate(), 0, 1);
    t.apply_two_qubit(oracles::cnot_gate(), 1, 2);
    return t;
}

}  // namespace

TEST_SUITE("dense") {

TEST_CASE("from_tableau reproduces hand-built density matrices") {
    const auto zp = DenseState::from_tableau(MixedTableau::from_text("1 1\n+Z\n"));
    Eigen::MatrixXcd want(2, 2);
    want << 1, 0, 0, 0;
    CHECK(max_diff(zp.matrix(), want) < 1e-12);

    const auto mixed = DenseState::from_tableau(MixedTableau::from_text("1 0\n"));
    CHECK(max_diff(mixed.matrix(), Eigen::MatrixXcd::Identity(2, 2) / 2.0) < 1e-12);

    const auto bell = DenseState::from_tableau(MixedTableau::from_text("2 2\n+XX\n+ZZ\n"));
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(4, 4);
    proj(0, 0) = proj(0, 3) = proj(3, 0) = proj(3, 3) = 0.5;
    CHECK(max_diff(bell.matrix(), proj) < 1e-12);
}

TEST_CASE("from_tableau agrees with the independent projector product") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 40; ++it) {
        const uint32_t n = 1 + rng() % 4;
        const auto t = oracles::random_mixed_tableau(rng, n);
        const uint64_t dim = 1ull << n;
        Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(dim, dim);
        for (const auto& g : t.generators()) {
            const Eigen::MatrixXcd p =
                (Eigen::MatrixXcd::Identity(dim, dim) + oracles::dense_pauli(g)) / 2.0;
            want = (want * p).eval();
        }
        want /= want.trace().real();
        const auto d = DenseState::from_tableau(t);
        CHECK(max_diff(d.matrix(), want) < 1e-12);
        d.check_valid();
    }
}

TEST_CASE("unitary reconstruction realizes the conjugation table on matrices") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = sebd::random_two_qubit_clifford(rng);
        const Eigen::MatrixXcd u = to_unitary(g);
        CHECK(max_diff(u * u.adjoint(), Eigen::MatrixXcd::Identity(4, 4)) < 1e-9);
        for (uint8_t in = 1; in < 16; ++in) {
            PauliString p(2);
            p.set_x(0, in & 1);
            p.set_z(0, in & 2);
            p.set_x(1, in & 4);
            p.set_z(1, in & 8);
            const auto [out, flip] = g.conjugate(in);
            PauliString q(2);
            q.set_x(0, out & 1);
            q.set_z(0, out & 2);
            q.set_x(1, out & 4);
            q.set_z(1, out & 8);
            const Eigen::MatrixXcd lhs = u * oracles::dense_pauli(p) * u.adjoint();
            const Eigen::MatrixXcd rhs = (flip ? -1.0 : 1.0) * oracles::dense_pauli(q);
            CHECK(max_diff(lhs, rhs) < 1e-9);
        }
    }
}

TEST_CASE("CNOT unitary matches the canonical matrix up to global phase") {
    const Eigen::MatrixXcd u = to_unitary(oracles::cnot_gate());
    Eigen::MatrixXcd cnot = Eigen::MatrixXcd::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    const std::complex<double> phase = u(0, 0);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-9);
    CHECK(max_diff(u / phase, cnot) < 1e-9);
}

TEST_CASE("apply_unitary_on embeds with the right site order") {
    DenseState d(2);  // |00>
    Eigen::MatrixXcd x(2, 2);
    x << 0, 1, 1, 0;
    d.apply_unitary_on(x, {0});
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(4, 4);
    want(2, 2) = 1;  // |10>
    CHECK(max_diff(d.matrix(), want) < 1e-12);

    // CNOT applied through the reversed site list equals SWAP * CNOT * SWAP.
    std::mt19937_64 rng(43);
    for (int it = 0; it < 20; ++it) {
        auto t = oracles::random_mixed_tableau(rng, 2, 10);
        auto a = DenseState::from_tableau(t);
        auto b = DenseState::from_tableau(t);
        a.apply_unitary_on(to_unitary(oracles::cnot_gate()), {1, 0});
        const Eigen::MatrixXcd s = to_unitary(oracles::swap_gate());
        b.apply_unitary_on(s * to_unitary(oracles::cnot_gate()) * s, {0, 1});
        CHECK(max_diff(a.matrix(), b.matrix()) < 1e-9);
    }
}

TEST_CASE("project_z renormalizes the selected branch") {
    auto plus = DenseState::from_tableau(MixedTableau::from_text("1 1\n+X\n"));
    const double prob = plus.project_z(0, false);
    CHECK(prob == doctest::Approx(0.5).epsilon(1e-12));
    Eigen::MatrixXcd want(2, 2);
    want << 1, 0, 0, 0;
    CHECK(max_diff(plus.matrix(), want) < 1e-12);

    auto zero = DenseState::from_tableau(MixedTableau::from_text("1 1\n+Z\n"));
    CHECK_THROWS_AS(zero.project_z(0, true), std::runtime_error);
}

TEST_CASE("trace_replace yields the partial trace tensored with I/2") {
    auto bell = DenseState::from_tableau(bell_pair());
    bell.trace_replace(0);
    CHECK(max_diff(bell.matrix(), Eigen::MatrixXcd::Identity(4, 4) / 4.0) < 1e-12);

    std::mt19937_64 rng(44);
    for (int it = 0; it < 20; ++it) {
        const uint32_t n = 2 + rng() % 3;
        const uint32_t q = rng() % n;
        auto d = DenseState::from_tableau(oracles::random_mixed_tableau(rng, n));
        auto copy = d;
        copy.trace_replace(q);
        // Independent route: discard q, then re-tensor I/2 back at position q.
        std::vector<uint32_t> rest;
        for (uint32_t s = 0; s < n; ++s)
            if (s != q) rest.push_back(s);
        const Eigen::MatrixXcd traced = d.reduced(rest);
        Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(1ull << n, 1ull << n);
        const uint32_t low = n - 1 - q;
        for (uint64_t r = 0; r < (1ull << (n - 1)); ++r)
            for (uint64_t c = 0; c < (1ull << (n - 1)); ++c)
                for (uint64_t b = 0; b < 2; ++b) {
                    const uint64_t rf = ((r >> low) << (low + 1)) | (b << low) |
                                        (r & ((1ull << low) - 1));
                    const uint64_t cf = ((c >> low) << (low + 1)) | (b << low) |
                                        (c & ((1ull << low) - 1));
                    want(rf, cf) = traced(r, c) / 2.0;
                }
        CHECK(max_diff(copy.matrix(), want) < 1e-12);
    }
}

TEST_CASE("discard is the partial trace over the dropped site") {
    std::mt19937_64 rng(45);
    for (int it = 0; it < 20; ++it) {
        const uint32_t n = 2 + rng() % 3;
        const uint32_t q = rng() % n;
        auto d = DenseState::from_tableau(oracles::random_mixed_tableau(rng, n));
        std::vector<uint32_t> rest;
        for (uint32_t s = 0; s < n; ++s)
            if (s != q) rest.push_back(s);
        const Eigen::MatrixXcd want = d.reduced(rest);
        d.discard(q);
        CHECK(d.num_qubits() == n - 1);
        CHECK(max_diff(d.matrix(), want) < 1e-12);
    }
}

TEST_CASE("entropy of hand-picked states") {
    const auto bell = DenseState::from_tableau(bell_pair());
    CHECK(entropy_dense(bell, {0, 1}) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(entropy_dense(bell, {0}) == doctest::Approx(1.0).epsilon(1e-9));

    const auto mixed = DenseState::from_tableau(MixedTableau::from_text("1 0\n"));
    CHECK(entropy_dense(mixed, {0}) == doctest::Approx(1.0).epsilon(1e-9));

    const auto g = DenseState::from_tableau(ghz3());
    CHECK(entropy_dense(g, {0, 1}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(entropy_dense(g, {1, 2}) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(entropy_dense(g, {0, 1, 2}) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("operator entanglement of hand-picked states") {
    const auto bell = DenseState::from_tableau(bell_pair());
    CHECK(operator_entanglement_dense(bell, 1) == doctest::Approx(2.0).epsilon(1e-9));

    const auto mixed = DenseState::from_tableau(MixedTableau::from_text("2 0\n"));
    CHECK(operator_entanglement_dense(mixed, 1) == doctest::Approx(0.0).epsilon(1e-9));

    // Degenerate cuts carry no operator entanglement.
    CHECK(operator_entanglement_dense(bell, 0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(operator_entanglement_dense(bell, 2) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("product states have zero operator entanglement across the split") {
    std::mt19937_64 rng(46);
    for (int it = 0; it < 25; ++it) {
        // Two independently scrambled halves that never interact.
        auto t = MixedTableau::new_zero_state(4, rng());
        for (int i = 0; i < 12; ++i) {
            t.apply_two_qubit(sebd::random_two_qubit_clifford(rng), 0, 1);
            t.apply_two_qubit(sebd::random_two_qubit_clifford(rng), 2, 3);
            if (rng() % 3 == 0) t.trace_replace_mixed(rng() % 4);
        }
        const auto d = DenseState::from_tableau(t);
        CHECK(operator_entanglement_dense(d, 2) < 1e-9);
    }
}

TEST_CASE("size and argument errors") {
    CHECK_THROWS_AS(DenseState(7), std::invalid_argument);
    auto big = MixedTableau::new_zero_state(7);
    CHECK_THROWS_AS(DenseState::from_tableau(big), std::invalid_argument);
    const DenseState d(2);
    CHECK_THROWS_AS(operator_entanglement_dense(d, 3), std::invalid_argument);
    CHECK_THROWS_AS(d.reduced({1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(d.reduced({2}), std::invalid_argument);
    DenseState e(2);
    CHECK_THROWS_AS(e.apply_unitary_on(Eigen::MatrixXcd::Identity(2, 2), {0, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(e.apply_unitary_on(Eigen::MatrixXcd::Identity(2, 2), {0, 0}),
                    std::invalid_argument);
}

}  // TEST_SUITE
