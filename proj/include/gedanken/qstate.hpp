#pragma once

// Dense few-qubit state algebra.
//
// Conventions used throughout the library:
//   * Big-endian register order: the first label is the most significant bit
//     of an amplitude index, so |x, y, z> has index 4x + 2y + z.
//   * Spin-up is |0>, spin-down is |1>.
//   * States are compared only through fidelity; no global phase is fixed.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gedanken/rng.hpp"

namespace gedanken::qstate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Labels = std::vector<std::string>;

inline constexpr double kValidationTol = 1e-10;
inline constexpr double kEqualityTol = 1e-12;
inline constexpr std::size_t kMaxQubits = 8;

/// Normalized pure state over a labeled register.
class StateVector {
public:
    /// Validates label uniqueness, length 2^n and unit norm (within 1e-10),
    /// then renormalizes exactly.
    StateVector(Labels labels, Vector amplitudes);

    /// Computational basis state |index> on the given register.
    static StateVector basis(Labels labels, std::size_t index);

    const Labels& labels() const { return labels_; }
    const Vector& amplitudes() const { return amplitudes_; }
    std::size_t num_qubits() const { return labels_.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

    /// Same amplitudes under new names; the count must match.
    StateVector relabeled(Labels labels) const;

    double norm() const { return amplitudes_.norm(); }

private:
    Labels labels_;
    Vector amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace operator on a labeled register.
class DensityOperator {
public:
    DensityOperator(Labels labels, Matrix matrix);

    static DensityOperator from_pure(const StateVector& state);

    const Labels& labels() const { return labels_; }
    const Matrix& matrix() const { return matrix_; }
    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

    /// Tr(rho^2).
    double purity() const;

private:
    Labels labels_;
    Matrix matrix_;
};

/// Complete set of orthogonal projectors acting on `targets`.
class ProjectiveBasis {
public:
    ProjectiveBasis(Labels targets, std::vector<Matrix> projectors);

    /// Rank-one projectors onto each vector of an orthonormal basis.
    static ProjectiveBasis from_vectors(Labels targets, std::span<const Vector> vectors);

    const Labels& targets() const { return targets_; }
    const std::vector<Matrix>& projectors() const { return projectors_; }
    std::size_t size() const { return projectors_.size(); }

private:
    Labels targets_;
    std::vector<Matrix> projectors_;
};

struct MeasurementRecord {
    std::size_t outcome_index = 0;
    double probability = 0.0;
    StateVector post_state;
};

enum class CanonicalKind { singlet, phi_plus, phi_minus, psi_plus, up, down, plus, minus };

// ---------------------------------------------------------------------------

StateVector tensor(const StateVector& a, const StateVector& b);

/// Apply U on `targets` (in the order given) and identity elsewhere.
/// Rejects U with max|U^dagger U - I| > 1e-10.
StateVector apply_unitary(const Matrix& unitary, const StateVector& state, const Labels& targets);

/// Apply an arbitrary operator on `targets` without renormalizing.
/// Building block for projections and Kraus actions.
Vector apply_operator(const Matrix& op, const Vector& amplitudes, const Labels& register_labels,
                      const Labels& targets);

/// Contract the `targets` sub-register with the bra <bra| and return the
/// normalized state of the remaining labels. Throws DegenerateError when the
/// overlap vanishes.
StateVector project_out(const StateVector& state, const Labels& targets, const Vector& bra_state);

DensityOperator partial_trace(const DensityOperator& rho, const Labels& keep);

/// |<a|b>|^2. Labels must agree as sets; b is reordered to match a.
double fidelity(const StateVector& a, const StateVector& b);

/// <psi|rho|psi> on matching registers.
double fidelity(const DensityOperator& rho, const StateVector& pure);

/// 0.5 * sum |eigenvalues(rho - sigma)|.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Exact Born probabilities, one per projector.
std::vector<double> born_probabilities(const StateVector& state, const ProjectiveBasis& basis);

MeasurementRecord measure_projective(const StateVector& state, const ProjectiveBasis& basis, Rng& rng);

/// Named states. Single-qubit kinds are labeled {"q"}, two-qubit kinds {"q0", "q1"}.
StateVector canonical_state(CanonicalKind kind);
StateVector canonical_state(CanonicalKind kind, Labels labels);

/// Bell basis of a two-qubit register, big-endian, in the fixed outcome order
/// Phi+, Phi-, Psi+, Psi-.
std::array<Vector, 4> bell_vectors();

/// Haar-distributed pure state: normalized vector of iid standard complex Gaussians.
StateVector haar_random_state(std::size_t n_qubits, Rng& rng);
StateVector haar_random_state(std::size_t n_qubits, Rng& rng, Labels labels);

/// Haar-distributed unitary of the given dimension (QR of a Ginibre matrix
/// with the phase of R's diagonal absorbed).
Matrix haar_random_unitary(std::size_t dim, Rng& rng);

/// max|U^dagger U - I|.
double unitarity_defect(const Matrix& u);

/// Position of each target within `register_labels`; LabelError if absent or repeated.
std::vector<std::size_t> label_positions(const Labels& register_labels, const Labels& targets);

/// Reorder a state's register to `order` (a permutation of its labels).
StateVector reorder(const StateVector& state, const Labels& order);
DensityOperator reorder(const DensityOperator& rho, const Labels& order);

namespace gates {
Matrix identity(std::size_t dim);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();
Matrix cnot();
}  // namespace gates

const char* to_string(CanonicalKind kind);

}  // namespace gedanken::qstate
