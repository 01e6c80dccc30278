#include "gedanken/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "gedanken/errors.hpp"

namespace gedanken::qstate {

namespace {

std::size_t pow2(std::size_t n) { return std::size_t{1} << n; }

void check_register(const Labels& labels) {
    if (labels.empty()) {
        throw DegenerateError("register must have at least one label");
    }
    if (labels.size() > kMaxQubits) {
        throw ValidationError("register exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!seen.insert(l).second) {
            throw LabelError("duplicate label '" + l + "'");
        }
    }
}

std::string join(const Labels& labels) {
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << (i ? "," : "") << labels[i];
    }
    out << ')';
    return out.str();
}

// Bit mask in the full index for the qubit at register position `pos`.
std::size_t bit_of(std::size_t n, std::size_t pos) { return std::size_t{1} << (n - 1 - pos); }

// Scatter the bits of a local index (big-endian over `positions`) into a full index.
std::size_t spread(std::size_t local, std::size_t n, const std::vector<std::size_t>& positions) {
    std::size_t full = 0;
    const std::size_t k = positions.size();
    for (std::size_t j = 0; j < k; ++j) {
        if (local & (std::size_t{1} << (k - 1 - j))) {
            full |= bit_of(n, positions[j]);
        }
    }
    return full;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& positions) {
    std::vector<std::size_t> rest;
    for (std::size_t p = 0; p < n; ++p) {
        if (std::find(positions.begin(), positions.end(), p) == positions.end()) {
            rest.push_back(p);
        }
    }
    return rest;
}

bool same_label_set(const Labels& a, const Labels& b) {
    return a.size() == b.size() && std::set<std::string>(a.begin(), a.end()) ==
                                       std::set<std::string>(b.begin(), b.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(Labels labels, Vector amplitudes)
    : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {
    check_register(labels_);
    if (static_cast<std::size_t>(amplitudes_.size()) != pow2(labels_.size())) {
        throw ValidationError("amplitude vector length " + std::to_string(amplitudes_.size()) +
                              " does not match 2^" + std::to_string(labels_.size()));
    }
    const double n = amplitudes_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kValidationTol) {
        throw ValidationError("state is not normalized (norm " + std::to_string(n) + ")");
    }
    amplitudes_ /= n;
}

StateVector StateVector::basis(Labels labels, std::size_t index) {
    const std::size_t d = pow2(labels.size());
    if (index >= d) {
        throw ValidationError("basis index out of range");
    }
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(d));
    amps(static_cast<Eigen::Index>(index)) = 1.0;
    return {std::move(labels), std::move(amps)};
}

StateVector StateVector::relabeled(Labels labels) const {
    if (labels.size() != labels_.size()) {
        throw LabelError("relabel needs " + std::to_string(labels_.size()) + " labels");
    }
    return {std::move(labels), amplitudes_};
}

// ---------------------------------------------------------------------------
// DensityOperator

DensityOperator::DensityOperator(Labels labels, Matrix matrix)
    : labels_(std::move(labels)), matrix_(std::move(matrix)) {
    // A zero-qubit register is allowed here: it is the 1x1 result of
    // discarding everything, used internally by channels.
    if (!labels_.empty()) {
        check_register(labels_);
    }
    const auto d = static_cast<Eigen::Index>(pow2(labels_.size()));
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw ValidationError("density matrix dimension does not match register " + join(labels_));
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kValidationTol) {
        throw ValidationError("density matrix is not Hermitian");
    }
    if (std::abs(matrix_.trace() - Complex(1.0)) > kValidationTol) {
        throw ValidationError("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(matrix_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -kValidationTol) {
        throw ValidationError("density matrix is not positive semidefinite");
    }
    // Symmetrize away round-off so downstream eigen-solvers see an exact Hermitian input.
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
}

DensityOperator DensityOperator::from_pure(const StateVector& state) {
    const Vector& v = state.amplitudes();
    return {state.labels(), v * v.adjoint()};
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

// ---------------------------------------------------------------------------
// ProjectiveBasis

ProjectiveBasis::ProjectiveBasis(Labels targets, std::vector<Matrix> projectors)
    : targets_(std::move(targets)), projectors_(std::move(projectors)) {
    check_register(targets_);
    if (projectors_.empty()) {
        throw ValidationError("projective basis is empty");
    }
    const auto d = static_cast<Eigen::Index>(pow2(targets_.size()));
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const Matrix& p = projectors_[i];
        if (p.rows() != d || p.cols() != d) {
            throw ValidationError("projector dimension does not match targets " + join(targets_));
        }
        if ((p - p.adjoint()).cwiseAbs().maxCoeff() > kEqualityTol ||
            (p * p - p).cwiseAbs().maxCoeff() > kEqualityTol) {
            throw ValidationError("projector " + std::to_string(i) + " is not an orthogonal projector");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if ((p * projectors_[j]).cwiseAbs().maxCoeff() > kEqualityTol) {
                throw ValidationError("projectors " + std::to_string(j) + " and " + std::to_string(i) +
                                      " are not orthogonal");
            }
        }
        sum += p;
    }
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kEqualityTol) {
        throw ValidationError("projectors do not sum to identity");
    }
}

ProjectiveBasis ProjectiveBasis::from_vectors(Labels targets, std::span<const Vector> vectors) {
    std::vector<Matrix> projectors;
    projectors.reserve(vectors.size());
    for (const auto& v : vectors) {
        projectors.emplace_back(v * v.adjoint());
    }
    return {std::move(targets), std::move(projectors)};
}

// ---------------------------------------------------------------------------
// Register bookkeeping

std::vector<std::size_t> label_positions(const Labels& register_labels, const Labels& targets) {
    std::vector<std::size_t> positions;
    positions.reserve(targets.size());
    for (const auto& t : targets) {
        auto it = std::find(register_labels.begin(), register_labels.end(), t);
        if (it == register_labels.end()) {
            throw LabelError("label '" + t + "' not in register " + join(register_labels));
        }
        auto pos = static_cast<std::size_t>(it - register_labels.begin());
        if (std::find(positions.begin(), positions.end(), pos) != positions.end()) {
            throw LabelError("label '" + t + "' targeted twice");
        }
        positions.push_back(pos);
    }
    return positions;
}

StateVector reorder(const StateVector& state, const Labels& order) {
    if (order.size() != state.num_qubits()) {
        throw LabelError("reorder needs a permutation of " + join(state.labels()));
    }
    // positions[j] = where new qubit j lives in the old register
    const auto positions = label_positions(state.labels(), order);
    const std::size_t n = order.size();
    Vector out(state.amplitudes().size());
    for (std::size_t newi = 0; newi < state.dim(); ++newi) {
        out(static_cast<Eigen::Index>(newi)) = state[spread(newi, n, positions)];
    }
    return {order, std::move(out)};
}

DensityOperator reorder(const DensityOperator& rho, const Labels& order) {
    if (order.size() != rho.labels().size()) {
        throw LabelError("reorder needs a permutation of " + join(rho.labels()));
    }
    const auto positions = label_positions(rho.labels(), order);
    const std::size_t n = order.size();
    std::vector<Eigen::Index> old_index(rho.dim());
    for (std::size_t i = 0; i < old_index.size(); ++i) {
        old_index[i] = static_cast<Eigen::Index>(spread(i, n, positions));
    }
    Matrix out(rho.matrix().rows(), rho.matrix().cols());
    for (std::size_t i = 0; i < old_index.size(); ++i) {
        for (std::size_t j = 0; j < old_index.size(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rho.matrix()(old_index[i], old_index[j]);
        }
    }
    return {order, std::move(out)};
}

// ---------------------------------------------------------------------------
// Operations

StateVector tensor(const StateVector& a, const StateVector& b) {
    for (const auto& l : b.labels()) {
        if (std::find(a.labels().begin(), a.labels().end(), l) != a.labels().end()) {
            throw LabelError("label collision on '" + l + "' in tensor product");
        }
    }
    Labels labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    const auto db = static_cast<Eigen::Index>(b.dim());
    Vector amps(static_cast<Eigen::Index>(a.dim()) * db);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(a.dim()); ++i) {
        amps.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
    }
    return {std::move(labels), std::move(amps)};
}

Vector apply_operator(const Matrix& op, const Vector& amplitudes, const Labels& register_labels,
                      const Labels& targets) {
    const auto positions = label_positions(register_labels, targets);
    const std::size_t n = register_labels.size();
    const std::size_t k = positions.size();
    const auto local_dim = static_cast<Eigen::Index>(pow2(k));
    if (op.rows() != local_dim || op.cols() != local_dim) {
        throw ValidationError("operator dimension " + std::to_string(op.rows()) + " does not match 2^" +
                              std::to_string(k) + " for targets " + join(targets));
    }
    const auto rest = complement(n, positions);
    std::vector<std::size_t> offsets(static_cast<std::size_t>(local_dim));
    for (std::size_t l = 0; l < offsets.size(); ++l) {
        offsets[l] = spread(l, n, positions);
    }

    Vector out(amplitudes.size());
    Vector local(local_dim);
    for (std::size_t r = 0; r < pow2(rest.size()); ++r) {
        const std::size_t base = spread(r, n, rest);
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            local(l) = amplitudes(static_cast<Eigen::Index>(base | offsets[static_cast<std::size_t>(l)]));
        }
        const Vector mapped = op * local;
        for (Eigen::Index l = 0; l < local_dim; ++l) {
            out(static_cast<Eigen::Index>(base | offsets[static_cast<std::size_t>(l)])) = mapped(l);
        }
    }
    return out;
}

double unitarity_defect(const Matrix& u) {
    if (u.rows() != u.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

StateVector apply_unitary(const Matrix& unitary, const StateVector& state, const Labels& targets) {
    if (unitarity_defect(unitary) > kValidationTol) {
        throw ValidationError("matrix is not unitary (defect " + std::to_string(unitarity_defect(unitary)) +
                              ")");
    }
    return {state.labels(), apply_operator(unitary, state.amplitudes(), state.labels(), targets)};
}

StateVector project_out(const StateVector& state, const Labels& targets, const Vector& bra_state) {
    const auto positions = label_positions(state.labels(), targets);
    if (static_cast<std::size_t>(bra_state.size()) != pow2(positions.size())) {
        throw ValidationError("bra dimension does not match targets " + join(targets));
    }
    const std::size_t n = state.num_qubits();
    const auto rest = complement(n, positions);
    if (rest.empty()) {
        throw DegenerateError("project_out would leave an empty register");
    }
    Labels rest_labels;
    for (auto p : rest) {
        rest_labels.push_back(state.labels()[p]);
    }
    Vector out = Vector::Zero(static_cast<Eigen::Index>(pow2(rest.size())));
    for (std::size_t r = 0; r < pow2(rest.size()); ++r) {
        const std::size_t base = spread(r, n, rest);
        Complex acc = 0.0;
        for (std::size_t l = 0; l < pow2(positions.size()); ++l) {
            acc += std::conj(bra_state(static_cast<Eigen::Index>(l))) * state[base | spread(l, n, positions)];
        }
        out(static_cast<Eigen::Index>(r)) = acc;
    }
    const double nrm = out.norm();
    if (nrm < 1e-12) {
        throw DegenerateError("projection onto the given bra vanishes");
    }
    return {std::move(rest_labels), out / nrm};
}

DensityOperator partial_trace(const DensityOperator& rho, const Labels& keep) {
    if (keep.empty()) {
        throw DegenerateError("partial trace needs a non-empty keep set");
    }
    const auto kept = label_positions(rho.labels(), keep);
    const std::size_t n = rho.labels().size();
    const auto traced = complement(n, kept);
    const std::size_t dk = pow2(kept.size());
    const std::size_t dt = pow2(traced.size());

    std::vector<std::size_t> kept_off(dk);
    std::vector<std::size_t> traced_off(dt);
    for (std::size_t i = 0; i < dk; ++i) kept_off[i] = spread(i, n, kept);
    for (std::size_t t = 0; t < dt; ++t) traced_off[t] = spread(t, n, traced);

    const Matrix& m = rho.matrix();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::size_t i = 0; i < dk; ++i) {
        for (std::size_t j = 0; j < dk; ++j) {
            Complex acc = 0.0;
            for (std::size_t t = 0; t < dt; ++t) {
                acc += m(static_cast<Eigen::Index>(kept_off[i] | traced_off[t]),
                         static_cast<Eigen::Index>(kept_off[j] | traced_off[t]));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return {keep, std::move(out)};
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (!same_label_set(a.labels(), b.labels())) {
        throw LabelError("fidelity between registers " + join(a.labels()) + " and " + join(b.labels()));
    }
    const StateVector bb = a.labels() == b.labels() ? b : reorder(b, a.labels());
    return std::clamp(std::norm(a.amplitudes().dot(bb.amplitudes())), 0.0, 1.0);
}

double fidelity(const DensityOperator& rho, const StateVector& pure) {
    if (!same_label_set(rho.labels(), pure.labels())) {
        throw LabelError("fidelity between registers " + join(rho.labels()) + " and " +
                         join(pure.labels()));
    }
    const StateVector p = rho.labels() == pure.labels() ? pure : reorder(pure, rho.labels());
    const Vector& v = p.amplitudes();
    return std::clamp((v.adjoint() * rho.matrix() * v)(0, 0).real(), 0.0, 1.0);
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.labels() != sigma.labels()) {
        throw LabelError("trace distance between registers " + join(rho.labels()) + " and " +
                         join(sigma.labels()));
    }
    const Matrix diff = rho.matrix() - sigma.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(diff, Eigen::EigenvaluesOnly);
    return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

std::vector<double> born_probabilities(const StateVector& state, const ProjectiveBasis& basis) {
    std::vector<double> probs;
    probs.reserve(basis.size());
    for (const auto& p : basis.projectors()) {
        const Vector projected = apply_operator(p, state.amplitudes(), state.labels(), basis.targets());
        probs.push_back(projected.squaredNorm());
    }
    return probs;
}

MeasurementRecord measure_projective(const StateVector& state, const ProjectiveBasis& basis, Rng& rng) {
    const auto probs = born_probabilities(state, basis);
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t outcome = probs.size() - 1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cumulative += probs[i];
        if (u < cumulative) {
            outcome = i;
            break;
        }
    }
    // Guard the tail against round-off landing on a zero-probability outcome.
    while (probs[outcome] <= 1e-12 && outcome > 0) {
        --outcome;
    }
    Vector projected = apply_operator(basis.projectors()[outcome], state.amplitudes(), state.labels(),
                                      basis.targets());
    const double p = projected.squaredNorm();
    projected /= std::sqrt(p);
    return {outcome, p, StateVector(state.labels(), std::move(projected))};
}

// ---------------------------------------------------------------------------
// Named and random states

StateVector canonical_state(CanonicalKind kind) {
    switch (kind) {
        case CanonicalKind::up:
        case CanonicalKind::down:
        case CanonicalKind::plus:
        case CanonicalKind::minus:
            return canonical_state(kind, {"q"});
        default:
            return canonical_state(kind, {"q0", "q1"});
    }
}

StateVector canonical_state(CanonicalKind kind, Labels labels) {
    const double h = std::numbers::sqrt2 / 2.0;
    Vector v;
    switch (kind) {
        case CanonicalKind::up: v = Vector::Unit(2, 0); break;
        case CanonicalKind::down: v = Vector::Unit(2, 1); break;
        case CanonicalKind::plus: v = Vector::Constant(2, h); break;
        case CanonicalKind::minus:
            v.resize(2);
            v << h, -h;
            break;
        case CanonicalKind::phi_plus:
            v = Vector::Zero(4);
            v(0) = h;
            v(3) = h;
            break;
        case CanonicalKind::phi_minus:
            v = Vector::Zero(4);
            v(0) = h;
            v(3) = -h;
            break;
        case CanonicalKind::psi_plus:
            v = Vector::Zero(4);
            v(1) = h;
            v(2) = h;
            break;
        case CanonicalKind::singlet:
            v = Vector::Zero(4);
            v(1) = h;
            v(2) = -h;
            break;
    }
    if (static_cast<std::size_t>(v.size()) != pow2(labels.size())) {
        throw LabelError(std::string("canonical state '") + to_string(kind) + "' needs " +
                         std::to_string(v.size() == 2 ? 1 : 2) + " labels");
    }
    return {std::move(labels), std::move(v)};
}

std::array<Vector, 4> bell_vectors() {
    const double h = std::numbers::sqrt2 / 2.0;
    std::array<Vector, 4> out;
    for (auto& v : out) {
        v = Vector::Zero(4);
    }
    out[0](0) = h;  // Phi+
    out[0](3) = h;
    out[1](0) = h;  // Phi-
    out[1](3) = -h;
    out[2](1) = h;  // Psi+
    out[2](2) = h;
    out[3](1) = h;  // Psi-
    out[3](2) = -h;
    return out;
}

StateVector haar_random_state(std::size_t n_qubits, Rng& rng) {
    Labels labels;
    for (std::size_t i = 0; i < n_qubits; ++i) {
        labels.push_back(n_qubits == 1 ? "q" : "q" + std::to_string(i));
    }
    return haar_random_state(n_qubits, rng, std::move(labels));
}

StateVector haar_random_state(std::size_t n_qubits, Rng& rng, Labels labels) {
    if (n_qubits == 0) {
        throw DegenerateError("haar_random_state needs at least one qubit");
    }
    if (labels.size() != n_qubits) {
        throw LabelError("haar_random_state: label count does not match qubit count");
    }
    if (n_qubits > kMaxQubits) {
        throw ValidationError("register exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    Vector v(static_cast<Eigen::Index>(pow2(n_qubits)));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        v(i) = Complex(re, im);
    }
    v.normalize();
    return {std::move(labels), std::move(v)};
}

Matrix haar_random_unitary(std::size_t dim, Rng& rng) {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix g(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
        const Complex diag = r(i, i);
        const double mag = std::abs(diag);
        q.col(i) *= mag > 0.0 ? diag / mag : Complex(1.0);
    }
    return q;
}

namespace gates {

Matrix identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return Matrix::Identity(d, d);
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix hadamard() {
    const double h = std::numbers::sqrt2 / 2.0;
    Matrix m(2, 2);
    m << h, h, h, -h;
    return m;
}

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

}  // namespace gates

const char* to_string(CanonicalKind kind) {
    switch (kind) {
        case CanonicalKind::singlet: return "singlet";
        case CanonicalKind::phi_plus: return "phi_plus";
        case CanonicalKind::phi_minus: return "phi_minus";
        case CanonicalKind::psi_plus: return "psi_plus";
        case CanonicalKind::up: return "up";
        case CanonicalKind::down: return "down";
        case CanonicalKind::plus: return "plus";
        case CanonicalKind::minus: return "minus";
    }
    return "?";
}

}  // namespace gedanken::qstate
