#pragma once

// Completely positive maps, cloning candidates, and the no-signaling gap.

#include <complex>
#include <cstddef>
#include <vector>

#include "gedanken/qstate.hpp"
#include "gedanken/rng.hpp"

namespace gedanken::channels {

using qstate::Complex;
using qstate::DensityOperator;
using qstate::Labels;
using qstate::Matrix;
using qstate::StateVector;

/// rho -> sum_k K rho K^dagger, mapping `input_labels` to `output_labels`.
///
/// Each Kraus operator is 2^|out| x 2^|in|. Construction enforces
/// sum_k K^dagger K = I within 1e-10.
class KrausChannel {
public:
    KrausChannel(Labels input_labels, Labels output_labels, std::vector<Matrix> kraus_ops);

    static KrausChannel identity(Labels labels);

    /// Conjugation by a single unitary.
    static KrausChannel unitary(Labels labels, const Matrix& u);

    const Labels& input_labels() const { return input_; }
    const Labels& output_labels() const { return output_; }
    const std::vector<Matrix>& kraus_ops() const { return ops_; }

    /// max|sum K^dagger K - I|.
    double completeness_defect() const;

private:
    Labels input_;
    Labels output_;
    std::vector<Matrix> ops_;
};

/// The channel's input labels must be in rho's register. Output labels replace
/// them: in place when the label lists are identical, otherwise appended after
/// the untouched labels.
DensityOperator apply_channel(const KrausChannel& channel, const DensityOperator& rho);

/// Qubit depolarizing channel rho -> (1-p) rho + p I/2 with Pauli Kraus operators.
KrausChannel depolarizing(const std::string& label, double p);

/// Random CPTP map on `labels` with `n_kraus` operators: the first rows of
/// a Haar unitary on system + environment, cut into blocks.
KrausChannel random_channel(const Labels& labels, std::size_t n_kraus, Rng& rng);

/// Alice's Bell measurement with an ancilla C prepared in `ancilla_state`,
/// followed by discarding C and A. The outcome is kept as a classical record
/// in two fresh qubits `record_labels`. Represented by its Kraus
/// decomposition (never by post-selection), so it is trace preserving.
KrausChannel bell_measure_and_discard(const std::string& target_label, const StateVector& ancilla_state,
                                      const Labels& record_labels);

// ---------------------------------------------------------------------------
// Cloning candidates

/// A proposed copier: a unitary on X (+) Y (+) M started from |0_Y>|0_M>.
///
/// Register labels are "X", "Y", then "M0".."M{m-1}".
class CloneCandidate {
public:
    CloneCandidate(Matrix unitary, StateVector null_y, StateVector null_m);

    const Matrix& unitary() const { return unitary_; }
    const StateVector& null_y() const { return null_y_; }
    const StateVector& null_m() const { return null_m_; }
    std::size_t m_qubits() const { return null_m_.num_qubits(); }

    /// Full register order: X, Y, M0...
    Labels register_labels() const;

    /// U |input_X, 0_Y, 0_M>.
    StateVector evolve(const StateVector& input) const;

private:
    Matrix unitary_;
    StateVector null_y_;
    StateVector null_m_;
};

inline constexpr std::size_t kMaxApparatusQubits = 4;
inline constexpr double kCloneTol = 1e-9;

/// CNOT from X onto Y with an idle apparatus: clones |0> and |1> exactly.
CloneCandidate basis_copier(std::size_t m_qubits = 1);

/// Haar-random unitary on X, Y, M with |0> null states.
CloneCandidate random_clone_candidate(std::size_t m_qubits, Rng& rng);

/// The unitary closest (Frobenius, orthogonal Procrustes) to one sending
/// |a,0,0> -> |a,a,psi_a> and |b,0,0> -> |b,b,psi_b>. It achieves both maps
/// exactly whenever a unitary that does so exists.
CloneCandidate targeted_clone_candidate(const StateVector& a, const StateVector& b, const StateVector& psi_a,
                                        const StateVector& psi_b);

/// <input,input| rho_XY |input,input> with rho_XY the X,Y marginal of the output.
double clone_fidelity(const CloneCandidate& candidate, const StateVector& input);

/// X,Y marginal of the output for the given input.
DensityOperator clone_output_xy(const CloneCandidate& candidate, const StateVector& input);

/// M marginal of the output (the post-copy apparatus state).
DensityOperator apparatus_state(const CloneCandidate& candidate, const StateVector& input);

struct LinearityReport {
    StateVector superposed_input;   // c = (alpha a + beta b) / |alpha a + beta b|
    StateVector predicted_if_cloned;  // |c, c> on X, Y
    double actual_output_fidelity = 0.0;
    bool violation = false;
    double fidelity_a = 0.0;
    double fidelity_b = 0.0;
    // True when the candidate does not clone both a and b; the witness then
    // says nothing about linearity.
    bool vacuous = false;
};

/// Evolve c = alpha a + beta b term by term and compare with |c, c>.
/// Requires |alpha|^2 + |beta|^2 = 1 within 1e-10.
LinearityReport linearity_witness(const CloneCandidate& candidate, const StateVector& a, const StateVector& b,
                                  Complex alpha, Complex beta);

struct DichotomyCheck {
    double fidelity_a = 0.0;
    double fidelity_b = 0.0;
    double overlap = 0.0;  // |<a|b>|
    bool both_cloned = false;
    /// both_cloned implies overlap within `overlap_tol` of 0 or 1.
    bool consistent = true;
};

DichotomyCheck check_clone_dichotomy(const CloneCandidate& candidate, const StateVector& a, const StateVector& b,
                                     double overlap_tol = 1e-4);

// ---------------------------------------------------------------------------
// No-signaling

/// Max pairwise trace distance between Bob's marginals Tr_A[op(rho)] over
/// `alice_ops` plus the do-nothing operation.
double no_signaling_gap(const DensityOperator& initial, const std::vector<KrausChannel>& alice_ops,
                        const Labels& bob_keep);

}  // namespace gedanken::channels
