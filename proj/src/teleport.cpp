#include "gedanken/teleport.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "gedanken/errors.hpp"

namespace gedanken::teleport {

using qstate::Complex;
using qstate::DensityOperator;
using qstate::Vector;

namespace {

// Inputs whose fidelity-1 images pin a 2x2 linear map down to a phase.
std::array<Vector, 4> spanning_inputs() {
    const double h = std::numbers::sqrt2 / 2.0;
    std::array<Vector, 4> v;
    v[0] = Vector::Unit(2, 0);
    v[1] = Vector::Unit(2, 1);
    v[2] = Vector::Constant(2, h);
    v[3].resize(2);
    v[3] << h, Complex(0.0, h);
    return v;
}

// Bob's unnormalized conditional map for outcome k:
// M_k(b, j) = sum_a conj(Bell_k(C=j, A=a)) Psi(A=a, B=b).
Matrix conditional_map(const Vector& bell_k, const Vector& resource) {
    Matrix m(2, 2);
    for (Eigen::Index b = 0; b < 2; ++b) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            Complex acc = 0.0;
            for (Eigen::Index a = 0; a < 2; ++a) {
                acc += std::conj(bell_k(2 * j + a)) * resource(2 * a + b);
            }
            m(b, j) = acc;
        }
    }
    return m;
}

double distance_to_maximally_mixed(const DensityOperator& marginal) {
    const DensityOperator mixed(marginal.labels(), 0.5 * qstate::gates::identity(2));
    return qstate::trace_distance(marginal, mixed);
}

}  // namespace

qstate::ProjectiveBasis bell_basis() {
    const auto bell = qstate::bell_vectors();
    return qstate::ProjectiveBasis::from_vectors({"C", "A"}, bell);
}

EntangledResource derive_corrections(const StateVector& resource_state) {
    if (resource_state.num_qubits() != 2) {
        throw LabelError("entangled resource must be a two-qubit state");
    }
    StateVector state = resource_state.relabeled({"A", "B"});
    const DensityOperator rho = DensityOperator::from_pure(state);
    const double da = distance_to_maximally_mixed(qstate::partial_trace(rho, {"A"}));
    const double db = distance_to_maximally_mixed(qstate::partial_trace(rho, {"B"}));
    if (da > kEntanglementTol || db > kEntanglementTol) {
        throw EntanglementError("resource is not maximally entangled (marginal distance to I/2: " +
                                std::to_string(std::max(da, db)) + ")");
    }

    const auto bell = qstate::bell_vectors();
    const auto probes = spanning_inputs();
    std::array<Matrix, 4> corrections;
    for (std::size_t k = 0; k < bell.size(); ++k) {
        const Matrix m = conditional_map(bell[k], state.amplitudes());
        // M_k = W S V^dagger, so the unitary factor of M_k^-1 is V W^dagger.
        Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        corrections[k] = svd.matrixV() * svd.matrixU().adjoint();

        if (qstate::unitarity_defect(corrections[k]) > qstate::kValidationTol) {
            throw InvariantViolation("derived correction " + std::to_string(k) + " is not unitary");
        }
        for (const auto& phi : probes) {
            const Vector out = corrections[k] * m * phi;
            const double f = std::norm(phi.dot(out)) / out.squaredNorm();
            if (!(f >= 1.0 - kTeleportTol)) {
                throw InvariantViolation("derived correction " + std::to_string(k) +
                                         " fails certification (fidelity " + std::to_string(f) + ")");
            }
        }
    }
    return {std::move(state), std::move(corrections)};
}

StateVector random_maximally_entangled_state(Rng& rng) {
    const StateVector phi_plus = qstate::canonical_state(qstate::CanonicalKind::phi_plus, {"A", "B"});
    const Matrix v = qstate::haar_random_unitary(2, rng);
    const double phase = 2.0 * std::numbers::pi * rng.uniform();
    const StateVector rotated = qstate::apply_unitary(v, phi_plus, {"B"});
    return {rotated.labels(), std::polar(1.0, phase) * rotated.amplitudes()};
}

std::pair<ClassicalMessage, StateVector> bell_measurement(const StateVector& joint, Rng& rng) {
    const std::set<std::string> labels(joint.labels().begin(), joint.labels().end());
    if (joint.num_qubits() != 3 || labels != std::set<std::string>{"A", "B", "C"}) {
        throw LabelError("Bell measurement expects a register of exactly C, A, B");
    }
    auto record = qstate::measure_projective(joint, bell_basis(), rng);
    ClassicalMessage message{static_cast<std::uint8_t>(record.outcome_index), std::nullopt};
    return {message, std::move(record.post_state)};
}

TeleportTranscript run_teleportation(const StateVector& input, const EntangledResource& resource, Rng& rng) {
    if (input.num_qubits() != 1) {
        throw LabelError("teleportation input must be a single qubit");
    }
    const StateVector c = input.relabeled({"C"});
    const StateVector joint = qstate::tensor(c, resource.state());
    const auto probs = qstate::born_probabilities(joint, bell_basis());

    auto [message, post] = bell_measurement(joint, rng);
    const auto bell = qstate::bell_vectors();
    StateVector pre_b = qstate::project_out(post, {"C", "A"}, bell[message.bits]);
    StateVector out_b = qstate::apply_unitary(resource.correction(message.bits), pre_b, {"B"});
    const double f = qstate::fidelity(out_b.relabeled({"C"}), c);
    if (!(f >= 1.0 - kTeleportTol)) {
        throw InvariantViolation("teleportation output fidelity " + std::to_string(f) + " below 1 - 1e-9");
    }
    return TeleportTranscript{
        .input_state = c,
        .resource = resource,
        .message = message,
        .post_measurement = std::move(post),
        .pre_correction_b = std::move(pre_b),
        .output_b = std::move(out_b),
        .output_fidelity = f,
        .outcome_probability = probs[message.bits],
    };
}

std::array<double, 4> outcome_distribution(const StateVector& input, const EntangledResource& resource) {
    if (input.num_qubits() != 1) {
        throw LabelError("teleportation input must be a single qubit");
    }
    const StateVector joint = qstate::tensor(input.relabeled({"C"}), resource.state());
    const auto probs = qstate::born_probabilities(joint, bell_basis());
    return {probs[0], probs[1], probs[2], probs[3]};
}

double verification_measurement(const StateVector& state, const std::string& target, const StateVector& reference) {
    if (reference.num_qubits() != 1) {
        throw LabelError("verification reference must be a single qubit");
    }
    const DensityOperator marginal = qstate::partial_trace(DensityOperator::from_pure(state), {target});
    return qstate::fidelity(marginal, reference.relabeled({target}));
}

}  // namespace gedanken::teleport
