#include "sebd/dense.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace sebd {

namespace {

constexpr uint32_t kMaxQubits = 6;
constexpr double kEigClip = 1e-12;

uint64_t bit_of(uint64_t index, uint32_t site, uint32_t n) {
    return (index >> (n - 1 - site)) & 1;
}

Eigen::Matrix2cd site_matrix(bool x, bool z) {
    const std::complex<double> i(0.0, 1.0);
    Eigen::Matrix2cd m;
    if (!x && !z)
        m << 1, 0, 0, 1;
    else if (x && !z)
        m << 0, 1, 1, 0;
    else if (!x && z)
        m << 1, 0, 0, -1;
    else
        m << 0, -i, i, 0;
    return m;
}

Eigen::MatrixXcd dense_pauli(const PauliString& p) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (uint32_t q = 0; q < p.num_sites(); ++q)
        out = Eigen::kroneckerProduct(out, site_matrix(p.x(q), p.z(q))).eval();
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return ipow[p.phase_pow()] * out;
}

Eigen::MatrixXcd dense_from_generators(uint32_t n, const std::vector<PauliString>& gens) {
    const uint64_t dim = 1ull << n;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& g : gens) {
        const Eigen::MatrixXcd proj =
            (Eigen::MatrixXcd::Identity(dim, dim) + dense_pauli(g)) / 2.0;
        rho = (rho * proj).eval();
    }
    const double tr = rho.trace().real();
    if (tr <= 0.0) throw std::logic_error("dense oracle: projector product has zero trace");
    return rho / tr;
}

double spectrum_entropy_bits(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam > kEigClip) s -= lam * std::log2(lam);
    }
    return s;
}

}  // namespace

DenseState::DenseState(uint32_t n) : n_(n) {
    if (n > kMaxQubits) throw std::invalid_argument("dense oracle: more than 6 qubits");
    const uint64_t dim = 1ull << n;
    rho_ = Eigen::MatrixXcd::Zero(dim, dim);
    rho_(0, 0) = 1.0;
}

DenseState DenseState::from_tableau(const MixedTableau& t) {
    DenseState d(t.num_qubits());
    d.rho_ = dense_from_generators(t.num_qubits(), t.generators());
    return d;
}

void DenseState::check_valid() const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::logic_error("dense oracle: matrix not Hermitian");
    if (std::abs(rho_.trace().real() - 1.0) > 1e-10 || std::abs(rho_.trace().imag()) > 1e-10)
        throw std::logic_error("dense oracle: trace not 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::logic_error("dense oracle: matrix not positive semidefinite");
}

void DenseState::apply_unitary_on(const Eigen::MatrixXcd& u, const std::vector<uint32_t>& sites) {
    const uint32_t k = static_cast<uint32_t>(sites.size());
    if (k == 0 || k > n_) throw std::invalid_argument("apply_unitary_on: bad site count");
    for (uint32_t j = 0; j < k; ++j) {
        if (sites[j] >= n_) throw std::invalid_argument("apply_unitary_on: site out of range");
        for (uint32_t l = j + 1; l < k; ++l)
            if (sites[j] == sites[l])
                throw std::invalid_argument("apply_unitary_on: repeated site");
    }
    const uint64_t sub_dim = 1ull << k;
    if (u.rows() != static_cast<Eigen::Index>(sub_dim) ||
        u.cols() != static_cast<Eigen::Index>(sub_dim))
        throw std::invalid_argument("apply_unitary_on: unitary size mismatch");

    const uint64_t dim = 1ull << n_;
    Eigen::MatrixXcd ufull = Eigen::MatrixXcd::Zero(dim, dim);
    for (uint64_t col = 0; col < dim; ++col) {
        uint64_t sub_c = 0;
        for (uint32_t j = 0; j < k; ++j) sub_c = (sub_c << 1) | bit_of(col, sites[j], n_);
        for (uint64_t sub_r = 0; sub_r < sub_dim; ++sub_r) {
            uint64_t row = col;
            for (uint32_t j = 0; j < k; ++j) {
                const uint64_t mask = 1ull << (n_ - 1 - sites[j]);
                if ((sub_r >> (k - 1 - j)) & 1)
                    row |= mask;
                else
                    row &= ~mask;
            }
            ufull(row, col) = u(sub_r, sub_c);
        }
    }
    rho_ = (ufull * rho_ * ufull.adjoint()).eval();
}

void DenseState::apply_two_qubit(const TwoQubitClifford& gate, uint32_t a, uint32_t b) {
    apply_unitary_on(to_unitary(gate), {a, b});
}

double DenseState::project_z(uint32_t q, bool outcome) {
    if (q >= n_) throw std::invalid_argument("project_z: site out of range");
    const uint64_t dim = 1ull << n_;
    Eigen::MatrixXcd p = rho_;
    for (uint64_t r = 0; r < dim; ++r)
        for (uint64_t c = 0; c < dim; ++c)
            if (bit_of(r, q, n_) != static_cast<uint64_t>(outcome) ||
                bit_of(c, q, n_) != static_cast<uint64_t>(outcome))
                p(r, c) = 0.0;
    const double prob = p.trace().real();
    if (prob < 1e-12) throw std::runtime_error("project_z: zero-probability branch");
    rho_ = p / prob;
    return prob;
}

void DenseState::trace_replace(uint32_t q) {
    if (q >= n_) throw std::invalid_argument("trace_replace: site out of range");
    Eigen::MatrixXcd acc = rho_;
    for (const auto [x, z] : {std::pair{true, false}, {false, true}, {true, true}}) {
        PauliString p(n_);
        p.set_x(q, x);
        p.set_z(q, z);
        const Eigen::MatrixXcd pm = dense_pauli(p);
        acc += pm * rho_ * pm;
    }
    rho_ = acc / 4.0;
}

void DenseState::discard(uint32_t q) {
    if (q >= n_) throw std::invalid_argument("discard: site out of range");
    const uint32_t m = n_ - 1;
    const uint64_t dm = 1ull << m;
    const auto insert_bit = [&](uint64_t idx, uint64_t b) {
        const uint64_t low_bits = m - q;  // sites q..m-1 of the reduced index
        const uint64_t high = idx >> low_bits;
        const uint64_t low = idx & ((1ull << low_bits) - 1);
        return (high << (low_bits + 1)) | (b << low_bits) | low;
    };
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dm, dm);
    for (uint64_t r = 0; r < dm; ++r)
        for (uint64_t c = 0; c < dm; ++c)
            for (uint64_t b = 0; b < 2; ++b)
                out(r, c) += rho_(insert_bit(r, b), insert_bit(c, b));
    rho_ = out;
    n_ = m;
}

Eigen::MatrixXcd DenseState::reduced(const std::vector<uint32_t>& region) const {
    for (size_t j = 0; j < region.size(); ++j) {
        if (region[j] >= n_) throw std::invalid_argument("reduced: site out of range");
        if (j && region[j] <= region[j - 1])
            throw std::invalid_argument("reduced: region must be strictly increasing");
    }
    std::vector<uint32_t> env;
    for (uint32_t q = 0, j = 0; q < n_; ++q) {
        if (j < region.size() && region[j] == q)
            ++j;
        else
            env.push_back(q);
    }
    const uint32_t k = static_cast<uint32_t>(region.size());
    const auto compose = [&](uint64_t keep, uint64_t rest) {
        uint64_t full = 0;
        for (uint32_t j = 0; j < k; ++j)
            full |= ((keep >> (k - 1 - j)) & 1) << (n_ - 1 - region[j]);
        for (uint32_t j = 0; j < env.size(); ++j)
            full |= ((rest >> (env.size() - 1 - j)) & 1) << (n_ - 1 - env[j]);
        return full;
    };
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(1ull << k, 1ull << k);
    for (uint64_t r = 0; r < (1ull << k); ++r)
        for (uint64_t c = 0; c < (1ull << k); ++c)
            for (uint64_t e = 0; e < (1ull << env.size()); ++e)
                out(r, c) += rho_(compose(r, e), compose(c, e));
    return out;
}

double entropy_dense(const DenseState& s, const std::vector<uint32_t>& region) {
    return spectrum_entropy_bits(s.reduced(region));
}

double operator_entanglement_dense(const DenseState& s, uint32_t cut) {
    const uint32_t n = s.num_qubits();
    if (cut > n) throw std::invalid_argument("operator_entanglement_dense: bad cut");
    const uint64_t da = 1ull << cut, db = 1ull << (n - cut);
    Eigen::MatrixXcd k(da * da, db * db);
    const auto& rho = s.matrix();
    for (uint64_t ra = 0; ra < da; ++ra)
        for (uint64_t ca = 0; ca < da; ++ca)
            for (uint64_t rb = 0; rb < db; ++rb)
                for (uint64_t cb = 0; cb < db; ++cb)
                    k(ra * da + ca, rb * db + cb) = rho(ra * db + rb, ca * db + cb);
    const double purity = k.squaredNorm();  // tr[rho^2]
    if (purity < 1e-15) throw std::runtime_error("operator entanglement: zero purity");
    if (k.rows() <= k.cols())
        return spectrum_entropy_bits((k * k.adjoint()) / purity);
    return spectrum_entropy_bits((k.adjoint() * k) / purity);
}

Eigen::MatrixXcd to_unitary(const TwoQubitClifford& gate) {
    // Choi state of the gate: 4-qubit pure stabilizer state with generators
    // img(P) (x) P^T for P in {X1, Z1, X2, Z2}; P^T = P since none contain Y.
    static const uint8_t codes[4] = {1, 2, 4, 8};
    std::vector<PauliString> gens;
    for (int k = 0; k < 4; ++k) {
        const PauliString img = gate.image(k);
        PauliString g(4);
        g.set_x(0, img.x(0));
        g.set_z(0, img.z(0));
        g.set_x(1, img.x(1));
        g.set_z(1, img.z(1));
        g.set_x(2, codes[k] & 1);
        g.set_z(2, codes[k] & 2);
        g.set_x(3, codes[k] & 4);
        g.set_z(3, codes[k] & 8);
        g.set_phase_pow(img.phase_pow());
        gens.push_back(g);
    }
    const Eigen::MatrixXcd choi = dense_from_generators(4, gens);

    Eigen::Index best = 0;
    choi.diagonal().real().maxCoeff(&best);
    const Eigen::VectorXcd u = choi.col(best) / std::sqrt(choi(best, best).real());
    Eigen::MatrixXcd out(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index m = 0; m < 4; ++m) out(i, m) = 2.0 * u(i * 4 + m);
    if ((out * out.adjoint() - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-9)
        throw std::logic_error("to_unitary: reconstruction is not unitary");
    return out;
}

}  // namespace sebd
