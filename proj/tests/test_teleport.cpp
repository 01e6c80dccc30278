#include "doctest.h"

#include <cmath>

#include "gedanken/channels.hpp"
#include "gedanken/errors.hpp"
#include "gedanken/teleport.hpp"
#include "oracles.hpp"

using namespace gedanken;
using namespace gedanken::teleport;
using qstate::CanonicalKind;
using qstate::canonical_state;
using qstate::Vector;

namespace {

bool is_pauli_type(const Matrix& u) {
    const Matrix paulis[4] = {qstate::gates::identity(2), qstate::gates::pauli_z(), qstate::gates::pauli_x(),
                              qstate::gates::pauli_x() * qstate::gates::pauli_z()};
    for (const auto& p : paulis) {
        // |tr(P^dagger U)| = 2 iff U = e^{i theta} P
        if (std::abs(std::abs((p.adjoint() * u).trace()) - 2.0) < 1e-10) {
            return true;
        }
    }
    return false;
}

void certify_on_random_inputs(const EntangledResource& resource, Rng& rng) {
    for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < 20; ++i) {
            const auto phi = qstate::haar_random_state(1, rng, {"C"});
            const Vector b = oracle::bob_conditional(phi.amplitudes(), resource.state().amplitudes(), k);
            const Vector out = resource.correction(static_cast<std::size_t>(k)) * b;
            CHECK(std::norm(phi.amplitudes().dot(out)) / out.squaredNorm() >= 1.0 - 1e-9);
        }
    }
}

}  // namespace

TEST_CASE("singlet corrections are Pauli-type and certified") {
    const auto resource = derive_corrections(canonical_state(CanonicalKind::singlet));
    for (const auto& u : resource.corrections()) {
        CHECK(qstate::unitarity_defect(u) <= 1e-10);
        CHECK(is_pauli_type(u));
    }
    Rng rng(1);
    certify_on_random_inputs(resource, rng);
}

TEST_CASE("phi_plus corrections are Pauli-type and certified") {
    const auto resource = derive_corrections(canonical_state(CanonicalKind::phi_plus));
    for (const auto& u : resource.corrections()) {
        CHECK(is_pauli_type(u));
    }
    Rng rng(2);
    certify_on_random_inputs(resource, rng);
}

TEST_CASE("random maximally entangled resources yield working tables") {
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto resource = derive_corrections(random_maximally_entangled_state(rng));
        certify_on_random_inputs(resource, rng);
    }
}

TEST_CASE("non-maximally entangled resources are rejected") {
    CHECK_THROWS_AS(derive_corrections(qstate::StateVector::basis({"A", "B"}, 0)), EntanglementError);
    Vector partial(4);
    partial << std::sqrt(0.6), 0, 0, std::sqrt(0.4);
    CHECK_THROWS_AS(derive_corrections(qstate::StateVector({"A", "B"}, partial)), EntanglementError);
    CHECK_THROWS_AS(derive_corrections(canonical_state(CanonicalKind::up)), LabelError);
}

TEST_CASE("bell_measurement outcomes and post-states") {
    Rng rng(4);
    const auto resource = derive_corrections(canonical_state(CanonicalKind::singlet));
    std::array<int, 4> counts{};
    for (int i = 0; i < 400; ++i) {
        const auto phi = qstate::haar_random_state(1, rng, {"C"});
        const auto joint = qstate::tensor(phi, resource.state());
        const auto [message, post] = bell_measurement(joint, rng);
        REQUIRE(message.bits < 4);
        ++counts[message.bits];

        const auto b = qstate::project_out(post, {"C", "A"}, qstate::bell_vectors()[message.bits]);
        const auto corrected = qstate::apply_unitary(resource.correction(message.bits), b, {"B"});
        CHECK(qstate::fidelity(corrected.relabeled({"C"}), phi) >= 1.0 - 1e-9);
    }
    for (int c : counts) {
        CHECK(c > 50);  // 100 expected each; 5 sigma is ~43
    }

    const auto wrong = qstate::tensor(canonical_state(CanonicalKind::up, {"C"}), canonical_state(CanonicalKind::singlet, {"A", "X"}));
    CHECK_THROWS_AS(bell_measurement(wrong, rng), LabelError);
}

TEST_CASE("run_teleportation transfers the state exactly") {
    Rng rng(5);
    const auto resource = derive_corrections(canonical_state(CanonicalKind::singlet));
    const auto t0 = run_teleportation(canonical_state(CanonicalKind::up), resource, rng);
    CHECK(t0.output_fidelity >= 1.0 - 1e-9);
    CHECK(qstate::fidelity(t0.output_b.relabeled({"C"}), canonical_state(CanonicalKind::up, {"C"})) >= 1.0 - 1e-9);
    CHECK(std::abs(t0.outcome_probability - 0.25) <= 1e-10);

    double worst = 1.0;
    for (int i = 0; i < 100; ++i) {
        const auto phi = qstate::haar_random_state(1, rng);
        worst = std::min(worst, run_teleportation(phi, resource, rng).output_fidelity);
    }
    CHECK(worst >= 1.0 - 1e-9);
}

TEST_CASE("post-measurement (C, A) state does not depend on the input") {
    const auto resource = derive_corrections(canonical_state(CanonicalKind::singlet));
    Rng source(6);
    for (int i = 0; i < 50; ++i) {
        const auto phi1 = qstate::haar_random_state(1, source);
        const auto phi2 = qstate::haar_random_state(1, source);
        const std::uint64_t seed = source.next_u64();
        Rng r1(seed);
        Rng r2(seed);
        const auto t1 = run_teleportation(phi1, resource, r1);
        const auto t2 = run_teleportation(phi2, resource, r2);
        REQUIRE(t1.message.bits == t2.message.bits);  // uniform outcomes + shared seed
        const auto m1 = qstate::partial_trace(qstate::DensityOperator::from_pure(t1.post_measurement), {"C", "A"});
        const auto m2 = qstate::partial_trace(qstate::DensityOperator::from_pure(t2.post_measurement), {"C", "A"});
        const qstate::StateVector bell({"C", "A"}, qstate::bell_vectors()[t1.message.bits]);
        CHECK(qstate::fidelity(m1, bell) >= 1.0 - 1e-9);
        CHECK(qstate::fidelity(m2, bell) >= 1.0 - 1e-9);
    }
}

TEST_CASE("outcome distribution is uniform for maximally entangled resources") {
    Rng rng(7);
    const auto singlet = derive_corrections(canonical_state(CanonicalKind::singlet));
    const auto p0 = outcome_distribution(canonical_state(CanonicalKind::up), singlet);
    for (int k = 0; k < 4; ++k) {
        const double oracle_p = oracle::bell_outcome_probability(Vector::Unit(2, 0), singlet.state().amplitudes(), k);
        CHECK(std::abs(oracle_p - 0.25) <= 1e-12);
        CHECK(std::abs(p0[static_cast<std::size_t>(k)] - oracle_p) <= 1e-12);
    }
    for (int i = 0; i < 200; ++i) {
        const auto resource = i % 2 ? singlet : derive_corrections(random_maximally_entangled_state(rng));
        const auto phi = qstate::haar_random_state(1, rng);
        const auto p = outcome_distribution(phi, resource);
        double total = 0.0;
        for (double x : p) {
            CHECK(std::abs(x - 0.25) <= 1e-10);
            total += x;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("Alice learns nothing: KL divergence between outcome distributions") {
    Rng rng(8);
    const auto resource = derive_corrections(canonical_state(CanonicalKind::singlet));
    for (int i = 0; i < 200; ++i) {
        const auto p = outcome_distribution(qstate::haar_random_state(1, rng), resource);
        const auto q = outcome_distribution(qstate::haar_random_state(1, rng), resource);
        double kl = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            kl += p[k] * std::log(p[k] / q[k]);
        }
        CHECK(std::abs(kl) <= 1e-9);
    }
}

TEST_CASE("Bob's outcome-averaged marginal is I/2 before the message") {
    Rng rng(9);
    const auto resource = derive_corrections(canonical_state(CanonicalKind::singlet));
    for (int i = 0; i < 50; ++i) {
        const auto phi = qstate::haar_random_state(1, rng, {"C"});
        const auto joint = qstate::tensor(phi, resource.state());
        // Average over outcomes with Born weights = the measure-and-discard channel.
        const auto basis = bell_basis();
        Matrix avg = Matrix::Zero(2, 2);
        for (const auto& proj : basis.projectors()) {
            const Vector v = qstate::apply_operator(proj, joint.amplitudes(), joint.labels(), {"C", "A"});
            const auto rho = oracle::reduce(v * v.adjoint(), 3, {2});
            avg += rho;
        }
        const qstate::DensityOperator bob({"B"}, avg);
        const qstate::DensityOperator mixed({"B"}, 0.5 * qstate::gates::identity(2));
        CHECK(qstate::trace_distance(bob, mixed) <= 1e-10);
    }
}

TEST_CASE("verification measurement") {
    Rng rng(10);
    const auto resource = derive_corrections(canonical_state(CanonicalKind::singlet));
    const auto phi = qstate::haar_random_state(1, rng, {"C"});
    const auto joint = qstate::tensor(phi, resource.state());
    CHECK(verification_measurement(joint, "C", phi) >= 1.0 - 1e-12);

    const auto t = run_teleportation(phi, resource, rng);
    CHECK(verification_measurement(t.output_b, "B", phi) >= 1.0 - 1e-9);

    const Vector perp{{-std::conj(phi[1]), std::conj(phi[0])}};
    CHECK(verification_measurement(joint, "C", qstate::StateVector({"r"}, perp)) <= 1e-12);
    CHECK_THROWS_AS(verification_measurement(joint, "Q", phi), LabelError);
    CHECK_THROWS_AS(verification_measurement(joint, "C", resource.state()), LabelError);
}

TEST_CASE("identical seeds give identical transcripts") {
    const auto resource = derive_corrections(canonical_state(CanonicalKind::singlet));
    Rng a(11);
    Rng b(11);
    for (int i = 0; i < 20; ++i) {
        const auto pa = qstate::haar_random_state(1, a);
        const auto pb = qstate::haar_random_state(1, b);
        const auto ta = run_teleportation(pa, resource, a);
        const auto tb = run_teleportation(pb, resource, b);
        CHECK(ta.message.bits == tb.message.bits);
        CHECK(ta.output_b.amplitudes() == tb.output_b.amplitudes());
        CHECK(ta.post_measurement.amplitudes() == tb.post_measurement.amplitudes());
    }
}

TEST_CASE("teleportation marginal ties to the no-signaling gap") {
    Rng rng(12);
    const auto rho = qstate::DensityOperator::from_pure(canonical_state(CanonicalKind::singlet, {"A", "B"}));
    std::vector<channels::KrausChannel> ops;
    for (int i = 0; i < 5; ++i) {
        ops.push_back(channels::bell_measure_and_discard("A", qstate::haar_random_state(1, rng, {"C"}), {"m0", "m1"}));
    }
    CHECK(channels::no_signaling_gap(rho, ops, {"B"}) <= 1e-10);
}
