#pragma once

// Teleportation of one qubit C through a shared pair (A, B).
//
// Bell outcomes on (C, A) are indexed 0 = Phi+, 1 = Phi-, 2 = Psi+, 3 = Psi-,
// and the two-bit classical message is that index in binary.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "gedanken/qstate.hpp"
#include "gedanken/relativity.hpp"
#include "gedanken/rng.hpp"

namespace gedanken::teleport {

using qstate::Matrix;
using qstate::StateVector;

inline constexpr double kEntanglementTol = 1e-10;
inline constexpr double kTeleportTol = 1e-9;

/// A maximally entangled pair on (A, B) with its outcome -> correction table.
///
/// Only derive_corrections() builds one, and it certifies every entry before
/// returning, so holding an EntangledResource means the table works.
class EntangledResource {
public:
    const StateVector& state() const { return state_; }
    const std::array<Matrix, 4>& corrections() const { return corrections_; }
    const Matrix& correction(std::size_t outcome) const { return corrections_.at(outcome); }

private:
    friend EntangledResource derive_corrections(const StateVector& resource_state);
    EntangledResource(StateVector state, std::array<Matrix, 4> corrections)
        : state_(std::move(state)), corrections_(std::move(corrections)) {}

    StateVector state_;
    std::array<Matrix, 4> corrections_;
};

struct ClassicalMessage {
    std::uint8_t bits = 0;  // 0..3
    std::optional<relativity::SpacetimeEvent> emitted_at;
};

struct TeleportTranscript {
    StateVector input_state;        // on C
    EntangledResource resource;
    ClassicalMessage message;
    StateVector post_measurement;   // (C, A, B) right after the Bell measurement
    StateVector pre_correction_b;   // Bob's qubit before U_k
    StateVector output_b;           // Bob's qubit after U_k
    double output_fidelity = 0.0;
    double outcome_probability = 0.0;
};

/// Bell-basis projectors on (C, A) in outcome order.
qstate::ProjectiveBasis bell_basis();

/// Solve for the correction unitaries of a maximally entangled two-qubit state.
///
/// For outcome k, Bob's unnormalized conditional state is M_k |phi> for a fixed
/// 2x2 matrix M_k. For a maximally entangled resource M_k is half a unitary;
/// U_k is the unitary factor of M_k^-1. Each U_k is then certified on a
/// spanning set of inputs. Throws EntanglementError if either marginal is more
/// than 1e-10 (trace distance) from I/2.
EntangledResource derive_corrections(const StateVector& resource_state);

/// (I (x) V) |Phi+> for Haar-random V, on labels (A, B).
StateVector random_maximally_entangled_state(Rng& rng);

/// Bell measurement on (C, A) of a (C, A, B) state.
std::pair<ClassicalMessage, StateVector> bell_measurement(const StateVector& joint, Rng& rng);

/// tensor -> Bell measurement -> correction, with every intermediate state
/// recorded. Throws InvariantViolation if the output fidelity misses 1 by more
/// than 1e-9.
TeleportTranscript run_teleportation(const StateVector& input, const EntangledResource& resource, Rng& rng);

/// Exact Born probabilities of the four Bell outcomes.
std::array<double, 4> outcome_distribution(const StateVector& input, const EntangledResource& resource);

/// Probability that the test {|ref><ref|, I - |ref><ref|} on `target` passes.
double verification_measurement(const StateVector& state, const std::string& target, const StateVector& reference);

}  // namespace gedanken::teleport
