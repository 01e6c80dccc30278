#include "doctest.h"

#include <cmath>
#include <numbers>

#include "gedanken/channels.hpp"
#include "gedanken/errors.hpp"
#include "oracles.hpp"

using namespace gedanken;
using namespace gedanken::channels;
using qstate::CanonicalKind;
using qstate::canonical_state;
using qstate::Vector;

namespace {

StateVector ket(CanonicalKind kind) { return canonical_state(kind, {"X"}); }

DensityOperator random_density(const qstate::Labels& labels, Rng& rng) {
    const std::size_t n = labels.size();
    Matrix m = Matrix::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
    double total = 0.0;
    std::vector<double> w(3);
    for (auto& x : w) {
        x = rng.uniform();
        total += x;
    }
    for (double x : w) {
        const auto p = qstate::haar_random_state(n, rng, labels);
        m += (x / total) * p.amplitudes() * p.amplitudes().adjoint();
    }
    return {labels, m};
}

}  // namespace

TEST_CASE("identity channel leaves rho unchanged") {
    Rng rng(1);
    const auto rho = random_density({"a", "b"}, rng);
    const auto out = apply_channel(KrausChannel::identity({"a", "b"}), rho);
    CHECK(oracle::max_abs(out.matrix() - rho.matrix()) <= 1e-14);

    const auto partial = apply_channel(KrausChannel::identity({"b"}), rho);
    CHECK(partial.labels() == rho.labels());
    CHECK(oracle::max_abs(partial.matrix() - rho.matrix()) <= 1e-14);
}

TEST_CASE("incomplete Kraus set is rejected") {
    Matrix p0 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    CHECK_THROWS_AS(KrausChannel({"q"}, {"q"}, {p0}), ValidationError);
}

TEST_CASE("fully depolarizing channel sends |0><0| to I/2") {
    const auto rho = DensityOperator::from_pure(canonical_state(CanonicalKind::up, {"q"}));
    const auto out = apply_channel(depolarizing("q", 1.0), rho);

    // Direct Kraus sum with the four Pauli/2 operators.
    Matrix paulis[4] = {qstate::gates::identity(2), qstate::gates::pauli_x(), qstate::gates::pauli_y(),
                        qstate::gates::pauli_z()};
    Matrix expected = Matrix::Zero(2, 2);
    for (const auto& p : paulis) {
        expected += (p / 2.0) * rho.matrix() * (p / 2.0).adjoint();
    }
    CHECK(oracle::max_abs(expected - 0.5 * oracle::eye(2)) <= 1e-15);
    CHECK(oracle::max_abs(out.matrix() - expected) <= 1e-14);
}

TEST_CASE("channel on a sub-register matches the full-matrix Kraus sum") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rho = random_density({"a", "b", "c"}, rng);
        const auto ch = random_channel({"c", "a"}, 3, rng);
        const auto out = apply_channel(ch, rho);
        Matrix expected = Matrix::Zero(8, 8);
        for (const auto& k : ch.kraus_ops()) {
            const Matrix full = oracle::embed(k, 3, {2, 0});
            expected += full * rho.matrix() * full.adjoint();
        }
        CHECK(oracle::max_abs(out.matrix() - expected) <= 1e-12);
    }
}

TEST_CASE("apply_channel preserves trace and positivity on random channels") {
    Rng rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rho = random_density({"a", "b"}, rng);
        const std::size_t n_kraus = 1 + rng.next_u64() % 4;
        const auto ch = random_channel({"a"}, n_kraus, rng);
        const auto out = apply_channel(ch, rho);
        CHECK(std::abs(out.matrix().trace() - qstate::Complex(1.0)) <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(out.matrix());
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("Bell measure-and-discard is a complete Kraus channel with a classical record") {
    Rng rng(13);
    const auto phi = qstate::haar_random_state(1, rng, {"C"});
    const auto ch = bell_measure_and_discard("A", phi, {"m0", "m1"});
    CHECK(ch.completeness_defect() <= 1e-12);
    const auto rho = DensityOperator::from_pure(canonical_state(CanonicalKind::singlet, {"A", "B"}));
    const auto out = apply_channel(ch, rho);
    CHECK(out.labels() == qstate::Labels{"B", "m0", "m1"});
    // Record is uniform over the four outcomes.
    const auto record = qstate::partial_trace(out, {"m0", "m1"});
    for (Eigen::Index k = 0; k < 4; ++k) {
        CHECK(std::abs(record.matrix()(k, k).real() - 0.25) <= 1e-12);
    }
}

TEST_CASE("apply_channel label errors") {
    const auto rho = DensityOperator::from_pure(canonical_state(CanonicalKind::singlet, {"A", "B"}));
    CHECK_THROWS_AS(apply_channel(KrausChannel::identity({"Z"}), rho), LabelError);
    Rng rng(0);
    const auto ch = bell_measure_and_discard("A", canonical_state(CanonicalKind::up, {"C"}), {"B", "m"});
    CHECK_THROWS_AS(apply_channel(ch, rho), LabelError);
}

// ---------------------------------------------------------------------------

TEST_CASE("basis copier clones the computational basis") {
    const auto copier = basis_copier();
    CHECK(clone_fidelity(copier, ket(CanonicalKind::up)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(clone_fidelity(copier, ket(CanonicalKind::down)) == doctest::Approx(1.0).epsilon(1e-14));

    const auto xy0 = clone_output_xy(copier, ket(CanonicalKind::up));
    CHECK(std::abs(xy0.matrix()(0, 0).real() - 1.0) < 1e-14);
    const auto xy1 = clone_output_xy(copier, ket(CanonicalKind::down));
    CHECK(std::abs(xy1.matrix()(3, 3).real() - 1.0) < 1e-14);
}

TEST_CASE("basis copier on |+> produces a Bell pair, not |+,+>") {
    // Hand expansion: CNOT (|0>+|1>)|0>/sqrt2 = (|00>+|11>)/sqrt2, and
    // <++|(|00>+|11>)/sqrt2 = (1/2)(2/sqrt2) = 1/sqrt2.
    const double h = 1.0 / std::sqrt(2.0);
    Vector bell_xy(4);
    bell_xy << h, 0, 0, h;
    Vector plus(2);
    plus << h, h;
    const double by_hand = std::norm(oracle::kron(plus, plus).dot(bell_xy));
    CHECK(std::abs(by_hand - 0.5) < 1e-15);

    const auto copier = basis_copier();
    const auto out = copier.evolve(ket(CanonicalKind::plus));
    const Vector expected = oracle::kron(bell_xy, Vector(Vector::Unit(2, 0)));
    CHECK(oracle::max_abs(out.amplitudes() - expected) < 1e-15);
    CHECK(std::abs(clone_fidelity(copier, ket(CanonicalKind::plus)) - by_hand) <= 1e-12);
}

TEST_CASE("apparatus register size is configurable") {
    for (std::size_t m = 1; m <= kMaxApparatusQubits; ++m) {
        const auto copier = basis_copier(m);
        CHECK(copier.m_qubits() == m);
        CHECK(clone_fidelity(copier, ket(CanonicalKind::down)) == doctest::Approx(1.0));
        CHECK(clone_fidelity(copier, ket(CanonicalKind::plus)) == doctest::Approx(0.5));
        const auto apparatus = apparatus_state(copier, ket(CanonicalKind::plus));
        CHECK(apparatus.labels().size() == m);
    }
    CHECK_THROWS_AS(basis_copier(0), ValidationError);
    CHECK_THROWS_AS(basis_copier(5), ValidationError);
}

TEST_CASE("clone_fidelity rejects multi-qubit inputs") {
    CHECK_THROWS_AS(clone_fidelity(basis_copier(), canonical_state(CanonicalKind::singlet)), LabelError);
}

TEST_CASE("CloneCandidate validation") {
    const auto y = canonical_state(CanonicalKind::up, {"Y"});
    const auto m = canonical_state(CanonicalKind::up, {"M"});
    CHECK_THROWS_AS(CloneCandidate(Matrix::Identity(4, 4), y, m), ValidationError);
    CHECK_THROWS_AS(CloneCandidate(2.0 * Matrix::Identity(8, 8), y, m), ValidationError);
    CHECK_NOTHROW(CloneCandidate(Matrix::Identity(8, 8), y, m));
}

TEST_CASE("linearity witness on the basis copier") {
    const auto copier = basis_copier();
    const auto zero = ket(CanonicalKind::up);
    const auto one = ket(CanonicalKind::down);

    const auto degenerate = linearity_witness(copier, zero, one, 1.0, 0.0);
    CHECK(degenerate.actual_output_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(degenerate.violation);
    CHECK_FALSE(degenerate.vacuous);

    const double h = 1.0 / std::sqrt(2.0);
    const auto balanced = linearity_witness(copier, zero, one, h, h);
    CHECK(std::abs(balanced.actual_output_fidelity - 0.5) <= 1e-12);
    CHECK(balanced.violation);
    CHECK(fidelity(balanced.superposed_input, ket(CanonicalKind::plus)) == doctest::Approx(1.0));

    const auto other = linearity_witness(copier, zero, one, 0.0, 1.0);
    CHECK(other.actual_output_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(other.violation);

    CHECK_THROWS_AS(linearity_witness(copier, zero, one, 1.0, 1.0), ValidationError);
}

TEST_CASE("linearity witness matches the cross-term expansion for general coefficients") {
    // For the basis copier the output is alpha|00> + beta|11>, while the
    // would-be clone is alpha^2|00> + alpha beta|01> + beta alpha|10> + beta^2|11>.
    Rng rng(21);
    const auto copier = basis_copier();
    for (int i = 0; i < 100; ++i) {
        const double theta = std::numbers::pi / 2.0 * rng.uniform();
        const qstate::Complex alpha = std::polar(std::cos(theta), 2.0 * std::numbers::pi * rng.uniform());
        const qstate::Complex beta = std::polar(std::sin(theta), 2.0 * std::numbers::pi * rng.uniform());
        Vector actual(4);
        actual << alpha, 0, 0, beta;
        Vector clone(4);
        clone << alpha * alpha, alpha * beta, beta * alpha, beta * beta;
        const double expected = std::norm(clone.dot(actual));

        const auto report = linearity_witness(copier, ket(CanonicalKind::up), ket(CanonicalKind::down), alpha, beta);
        CHECK(std::abs(report.actual_output_fidelity - expected) <= 1e-12);
        const bool non_degenerate = std::abs(alpha) > 1e-6 && std::abs(beta) > 1e-6;
        CHECK(report.violation == non_degenerate);
    }
}

TEST_CASE("linearity witness flags vacuous inputs") {
    const double h = 1.0 / std::sqrt(2.0);
    const auto report = linearity_witness(basis_copier(), ket(CanonicalKind::plus), ket(CanonicalKind::minus), h, h);
    CHECK(report.vacuous);
}

TEST_CASE("targeted candidate clones orthogonal pairs exactly") {
    Rng rng(31);
    for (int i = 0; i < 50; ++i) {
        const auto a = qstate::haar_random_state(1, rng, {"X"});
        const Vector perp{{-std::conj(a[1]), std::conj(a[0])}};
        const StateVector b({"X"}, perp);
        const auto psi_a = qstate::haar_random_state(1, rng, {"M0"});
        const auto psi_b = qstate::haar_random_state(1, rng, {"M0"});
        const auto candidate = targeted_clone_candidate(a, b, psi_a, psi_b);
        const auto check = check_clone_dichotomy(candidate, a, b);
        CHECK(check.both_cloned);
        CHECK(check.consistent);
    }
}

TEST_CASE("no candidate clones a non-orthogonal, distinct pair") {
    Rng rng(32);
    int found = 0;
    for (int i = 0; i < 500; ++i) {
        const auto a = qstate::haar_random_state(1, rng, {"X"});
        const auto b = qstate::haar_random_state(1, rng, {"X"});
        const std::size_t m = 1 + rng.next_u64() % 2;
        const auto candidate = targeted_clone_candidate(a, b, qstate::haar_random_state(m, rng),
                                                        qstate::haar_random_state(m, rng));
        const auto check = check_clone_dichotomy(candidate, a, b);
        CHECK(check.consistent);
        found += check.both_cloned ? 1 : 0;
    }
    CHECK(found == 0);
}

TEST_CASE("clone fidelity is continuous in the input on the basis copier") {
    Rng rng(33);
    const auto copier = basis_copier();
    for (int i = 0; i < 200; ++i) {
        const auto a = qstate::haar_random_state(1, rng, {"X"});
        const double eps = 1e-3 * rng.uniform();
        Vector nudged = a.amplitudes();
        nudged(0) += eps * qstate::Complex(rng.normal(), rng.normal());
        nudged.normalize();
        const StateVector b({"X"}, nudged);
        const double dist = (a.amplitudes() - b.amplitudes()).norm();
        CHECK(std::abs(clone_fidelity(copier, a) - clone_fidelity(copier, b)) <= 10.0 * dist + 1e-15);
    }
}

// ---------------------------------------------------------------------------

TEST_CASE("no-signaling gap for the singlet") {
    const auto rho = DensityOperator::from_pure(canonical_state(CanonicalKind::singlet, {"A", "B"}));
    Rng rng(41);

    std::vector<KrausChannel> measure_ops;
    for (int i = 0; i < 10; ++i) {
        measure_ops.push_back(
            bell_measure_and_discard("A", qstate::haar_random_state(1, rng, {"C"}), {"m0", "m1"}));
    }
    CHECK(no_signaling_gap(rho, measure_ops, {"B"}) <= 1e-10);

    std::vector<KrausChannel> unitary_ops;
    for (int i = 0; i < 10; ++i) {
        unitary_ops.push_back(KrausChannel::unitary({"A"}, qstate::haar_random_unitary(2, rng)));
    }
    CHECK(no_signaling_gap(rho, unitary_ops, {"B"}) <= 1e-12);
}

TEST_CASE("no-signaling gap detects a channel that touches Bob") {
    const auto rho = DensityOperator::from_pure(canonical_state(CanonicalKind::singlet, {"A", "B"}));
    CHECK_THROWS_AS(no_signaling_gap(rho, {KrausChannel::identity({"B"})}, {"B"}), LocalityError);
    CHECK_THROWS_AS(no_signaling_gap(rho, {KrausChannel::identity({"A", "B"})}, {"B"}), LocalityError);
    CHECK_THROWS_AS(no_signaling_gap(rho, {}, {}), DegenerateError);
}
