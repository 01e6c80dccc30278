#include "gedanken/channels.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <unsupported/Eigen/KroneckerProduct>

#include "gedanken/errors.hpp"

namespace gedanken::channels {

namespace {

Eigen::Index pow2(std::size_t n) { return Eigen::Index{1} << n; }

bool contains(const Labels& labels, const std::string& l) {
    return std::find(labels.begin(), labels.end(), l) != labels.end();
}

std::vector<std::string> apparatus_labels(std::size_t m) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < m; ++i) {
        out.push_back("M" + std::to_string(i));
    }
    return out;
}

StateVector single_qubit_input(const StateVector& input, const char* what) {
    if (input.num_qubits() != 1) {
        throw LabelError(std::string(what) + " must be a single-qubit state");
    }
    return input.relabeled({"X"});
}

StateVector as_null_y(const StateVector& s) {
    if (s.num_qubits() != 1) {
        throw LabelError("null_Y must be a single qubit");
    }
    return s.relabeled({"Y"});
}

qstate::Vector zero_state(std::size_t qubits) {
    return qstate::Vector::Unit(pow2(qubits), 0);
}

}  // namespace

// ---------------------------------------------------------------------------
// KrausChannel

KrausChannel::KrausChannel(Labels input_labels, Labels output_labels, std::vector<Matrix> kraus_ops)
    : input_(std::move(input_labels)), output_(std::move(output_labels)), ops_(std::move(kraus_ops)) {
    if (input_.empty()) {
        throw DegenerateError("channel needs at least one input label");
    }
    for (const Labels* ls : {&input_, &output_}) {
        std::set<std::string> seen(ls->begin(), ls->end());
        if (seen.size() != ls->size()) {
            throw LabelError("channel labels repeat");
        }
    }
    if (ops_.empty()) {
        throw ValidationError("channel has no Kraus operators");
    }
    for (const auto& k : ops_) {
        if (k.rows() != pow2(output_.size()) || k.cols() != pow2(input_.size())) {
            throw ValidationError("Kraus operator shape does not match channel labels");
        }
    }
    const double defect = completeness_defect();
    if (!(defect <= qstate::kValidationTol)) {
        throw ValidationError("Kraus operators are not complete (defect " + std::to_string(defect) +
                              "); the map is not trace preserving");
    }
}

KrausChannel KrausChannel::identity(Labels labels) {
    const Eigen::Index d = pow2(labels.size());
    Labels out = labels;
    return {std::move(labels), std::move(out), {Matrix::Identity(d, d)}};
}

KrausChannel KrausChannel::unitary(Labels labels, const Matrix& u) {
    if (qstate::unitarity_defect(u) > qstate::kValidationTol) {
        throw ValidationError("unitary channel built from a non-unitary matrix");
    }
    Labels out = labels;
    return {std::move(labels), std::move(out), {u}};
}

double KrausChannel::completeness_defect() const {
    const Eigen::Index d = pow2(input_.size());
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& k : ops_) {
        sum += k.adjoint() * k;
    }
    return (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
}

DensityOperator apply_channel(const KrausChannel& channel, const DensityOperator& rho) {
    const auto& in = channel.input_labels();
    const auto& out = channel.output_labels();
    qstate::label_positions(rho.labels(), in);  // throws on unknown labels

    Labels rest;
    for (const auto& l : rho.labels()) {
        if (!contains(in, l)) {
            rest.push_back(l);
        }
    }
    for (const auto& l : out) {
        if (contains(rest, l)) {
            throw LabelError("channel output label '" + l + "' collides with an untouched subsystem");
        }
    }

    // Work in (rest, in) order so the channel acts as I_rest (x) K.
    Labels work = rest;
    work.insert(work.end(), in.begin(), in.end());
    const DensityOperator ordered = qstate::reorder(rho, work);
    const Matrix id_rest = Matrix::Identity(pow2(rest.size()), pow2(rest.size()));

    const Eigen::Index d_out = pow2(rest.size() + out.size());
    Matrix result = Matrix::Zero(d_out, d_out);
    for (const auto& k : channel.kraus_ops()) {
        const Matrix full = Eigen::kroneckerProduct(id_rest, k);
        result += full * ordered.matrix() * full.adjoint();
    }

    Labels result_labels = rest;
    result_labels.insert(result_labels.end(), out.begin(), out.end());
    DensityOperator mapped(result_labels, std::move(result));
    if (in == out) {
        return qstate::reorder(mapped, rho.labels());
    }
    return mapped;
}

KrausChannel depolarizing(const std::string& label, double p) {
    if (!(p >= 0.0 && p <= 4.0 / 3.0)) {
        throw ValidationError("depolarizing parameter must lie in [0, 4/3]");
    }
    std::vector<Matrix> ops{std::sqrt(1.0 - 3.0 * p / 4.0) * qstate::gates::identity(2),
                            std::sqrt(p / 4.0) * qstate::gates::pauli_x(),
                            std::sqrt(p / 4.0) * qstate::gates::pauli_y(),
                            std::sqrt(p / 4.0) * qstate::gates::pauli_z()};
    return {{label}, {label}, std::move(ops)};
}

KrausChannel random_channel(const Labels& labels, std::size_t n_kraus, Rng& rng) {
    if (n_kraus == 0) {
        throw DegenerateError("random channel needs at least one Kraus operator");
    }
    const Eigen::Index d = pow2(labels.size());
    const Matrix u = qstate::haar_random_unitary(static_cast<std::size_t>(d) * n_kraus, rng);
    std::vector<Matrix> ops;
    ops.reserve(n_kraus);
    for (std::size_t k = 0; k < n_kraus; ++k) {
        ops.emplace_back(u.block(static_cast<Eigen::Index>(k) * d, 0, d, d));
    }
    return {labels, labels, std::move(ops)};
}

KrausChannel bell_measure_and_discard(const std::string& target_label, const StateVector& ancilla_state,
                                      const Labels& record_labels) {
    if (ancilla_state.num_qubits() != 1) {
        throw LabelError("Bell-measurement ancilla must be a single qubit");
    }
    if (record_labels.size() != 2) {
        throw LabelError("Bell-measurement record needs two labels");
    }
    const auto bell = qstate::bell_vectors();
    const auto& phi = ancilla_state.amplitudes();
    std::vector<Matrix> ops;
    for (std::size_t k = 0; k < bell.size(); ++k) {
        // Row vector A -> scalar: (<Bell_k|_{C,A}) (|phi>_C (x) . )
        Matrix row(1, 2);
        for (Eigen::Index a = 0; a < 2; ++a) {
            Complex acc = 0.0;
            for (Eigen::Index c = 0; c < 2; ++c) {
                acc += std::conj(bell[k](2 * c + a)) * phi(c);
            }
            row(0, a) = acc;
        }
        ops.emplace_back(qstate::Vector::Unit(4, static_cast<Eigen::Index>(k)) * row);
    }
    return {{target_label}, record_labels, std::move(ops)};
}

// ---------------------------------------------------------------------------
// CloneCandidate

CloneCandidate::CloneCandidate(Matrix unitary, StateVector null_y, StateVector null_m)
    : unitary_(std::move(unitary)),
      null_y_(as_null_y(null_y)),
      null_m_(null_m.relabeled(apparatus_labels(null_m.num_qubits()))) {
    const std::size_t m = null_m_.num_qubits();
    if (m < 1 || m > kMaxApparatusQubits) {
        throw ValidationError("apparatus register must have 1.." + std::to_string(kMaxApparatusQubits) +
                              " qubits");
    }
    const Eigen::Index d = pow2(2 + m);
    if (unitary_.rows() != d || unitary_.cols() != d) {
        throw ValidationError("clone candidate unitary must be " + std::to_string(d) + "x" +
                              std::to_string(d));
    }
    if (qstate::unitarity_defect(unitary_) > qstate::kValidationTol) {
        throw ValidationError("clone candidate is not unitary");
    }
}

Labels CloneCandidate::register_labels() const {
    Labels labels{"X", "Y"};
    const auto m = apparatus_labels(m_qubits());
    labels.insert(labels.end(), m.begin(), m.end());
    return labels;
}

StateVector CloneCandidate::evolve(const StateVector& input) const {
    const StateVector x = single_qubit_input(input, "clone input");
    const StateVector start = qstate::tensor(qstate::tensor(x, null_y_), null_m_);
    return qstate::apply_unitary(unitary_, start, register_labels());
}

CloneCandidate basis_copier(std::size_t m_qubits) {
    if (m_qubits < 1 || m_qubits > kMaxApparatusQubits) {
        throw ValidationError("apparatus register must have 1.." + std::to_string(kMaxApparatusQubits) +
                              " qubits");
    }
    const Matrix u = Eigen::kroneckerProduct(qstate::gates::cnot(), qstate::gates::identity(pow2(m_qubits)));
    return {u, StateVector({"Y"}, zero_state(1)), StateVector(apparatus_labels(m_qubits), zero_state(m_qubits))};
}

CloneCandidate random_clone_candidate(std::size_t m_qubits, Rng& rng) {
    if (m_qubits < 1 || m_qubits > kMaxApparatusQubits) {
        throw ValidationError("apparatus register must have 1.." + std::to_string(kMaxApparatusQubits) +
                              " qubits");
    }
    Matrix u = qstate::haar_random_unitary(static_cast<std::size_t>(pow2(2 + m_qubits)), rng);
    return {std::move(u), StateVector({"Y"}, zero_state(1)),
            StateVector(apparatus_labels(m_qubits), zero_state(m_qubits))};
}

CloneCandidate targeted_clone_candidate(const StateVector& a, const StateVector& b, const StateVector& psi_a,
                                        const StateVector& psi_b) {
    const StateVector xa = single_qubit_input(a, "a");
    const StateVector xb = single_qubit_input(b, "b");
    const std::size_t m = psi_a.num_qubits();
    if (psi_b.num_qubits() != m || m < 1 || m > kMaxApparatusQubits) {
        throw LabelError("apparatus states must share a 1.." + std::to_string(kMaxApparatusQubits) +
                         " qubit register");
    }
    const Eigen::Index d = pow2(2 + m);
    const qstate::Vector null_tail = Eigen::kroneckerProduct(zero_state(1), zero_state(m));

    Matrix sources(d, 2);
    Matrix targets(d, 2);
    sources.col(0) = Eigen::kroneckerProduct(xa.amplitudes(), null_tail);
    sources.col(1) = Eigen::kroneckerProduct(xb.amplitudes(), null_tail);
    targets.col(0) = Eigen::kroneckerProduct(Eigen::kroneckerProduct(xa.amplitudes(), xa.amplitudes()).eval(),
                                             psi_a.amplitudes());
    targets.col(1) = Eigen::kroneckerProduct(Eigen::kroneckerProduct(xb.amplitudes(), xb.amplitudes()).eval(),
                                             psi_b.amplitudes());

    // argmax_U Re tr(U^dagger T S^dagger) over unitaries is W V^dagger.
    const Matrix cross = targets * sources.adjoint();
    Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix u = svd.matrixU() * svd.matrixV().adjoint();
    return {std::move(u), StateVector({"Y"}, zero_state(1)), StateVector(apparatus_labels(m), zero_state(m))};
}

DensityOperator clone_output_xy(const CloneCandidate& candidate, const StateVector& input) {
    const StateVector out = candidate.evolve(input);
    return qstate::partial_trace(DensityOperator::from_pure(out), {"X", "Y"});
}

DensityOperator apparatus_state(const CloneCandidate& candidate, const StateVector& input) {
    const StateVector out = candidate.evolve(input);
    return qstate::partial_trace(DensityOperator::from_pure(out), apparatus_labels(candidate.m_qubits()));
}

double clone_fidelity(const CloneCandidate& candidate, const StateVector& input) {
    const StateVector x = single_qubit_input(input, "clone input");
    const StateVector target = qstate::tensor(x, x.relabeled({"Y"}));
    return qstate::fidelity(clone_output_xy(candidate, x), target);
}

LinearityReport linearity_witness(const CloneCandidate& candidate, const StateVector& a, const StateVector& b,
                                  Complex alpha, Complex beta) {
    const double weight = std::norm(alpha) + std::norm(beta);
    if (!(std::abs(weight - 1.0) <= qstate::kValidationTol)) {
        throw ValidationError("superposition coefficients must satisfy |alpha|^2 + |beta|^2 = 1");
    }
    const StateVector xa = single_qubit_input(a, "a");
    const StateVector xb = single_qubit_input(b, "b");

    const qstate::Vector combined = alpha * xa.amplitudes() + beta * xb.amplitudes();
    const double scale = combined.norm();
    if (scale < 1e-12) {
        throw DegenerateError("alpha a + beta b vanishes");
    }
    StateVector c({"X"}, combined / scale);

    // Linear evolution term by term: alpha U|a,0,0> + beta U|b,0,0>.
    const StateVector out_a = candidate.evolve(xa);
    const StateVector out_b = candidate.evolve(xb);
    const qstate::Vector evolved = (alpha * out_a.amplitudes() + beta * out_b.amplitudes()) / scale;
    const StateVector out(out_a.labels(), evolved);

    StateVector target = qstate::tensor(c, c.relabeled({"Y"}));
    const double f = qstate::fidelity(
        qstate::partial_trace(DensityOperator::from_pure(out), {"X", "Y"}), target);

    const double fa = clone_fidelity(candidate, xa);
    const double fb = clone_fidelity(candidate, xb);
    return LinearityReport{
        .superposed_input = std::move(c),
        .predicted_if_cloned = std::move(target),
        .actual_output_fidelity = f,
        .violation = f < 1.0 - kCloneTol,
        .fidelity_a = fa,
        .fidelity_b = fb,
        .vacuous = fa < 1.0 - kCloneTol || fb < 1.0 - kCloneTol,
    };
}

DichotomyCheck check_clone_dichotomy(const CloneCandidate& candidate, const StateVector& a, const StateVector& b,
                                     double overlap_tol) {
    DichotomyCheck check;
    check.fidelity_a = clone_fidelity(candidate, a);
    check.fidelity_b = clone_fidelity(candidate, b);
    check.overlap = std::abs(a.amplitudes().dot(b.amplitudes()));
    check.both_cloned = check.fidelity_a >= 1.0 - kCloneTol && check.fidelity_b >= 1.0 - kCloneTol;
    check.consistent =
        !check.both_cloned || check.overlap <= overlap_tol || std::abs(check.overlap - 1.0) <= overlap_tol;
    return check;
}

// ---------------------------------------------------------------------------
// No-signaling

double no_signaling_gap(const DensityOperator& initial, const std::vector<KrausChannel>& alice_ops,
                        const Labels& bob_keep) {
    if (bob_keep.empty()) {
        throw DegenerateError("no_signaling_gap needs a non-empty receiver register");
    }
    qstate::label_positions(initial.labels(), bob_keep);
    for (const auto& op : alice_ops) {
        for (const Labels* ls : {&op.input_labels(), &op.output_labels()}) {
            for (const auto& l : *ls) {
                if (contains(bob_keep, l)) {
                    throw LocalityError("sender operation touches receiver subsystem '" + l + "'");
                }
            }
        }
    }

    std::vector<DensityOperator> marginals;
    marginals.reserve(alice_ops.size() + 1);
    marginals.push_back(qstate::partial_trace(initial, bob_keep));
    for (const auto& op : alice_ops) {
        marginals.push_back(qstate::partial_trace(apply_channel(op, initial), bob_keep));
    }

    double gap = 0.0;
    for (std::size_t i = 0; i < marginals.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            gap = std::max(gap, qstate::trace_distance(marginals[i], marginals[j]));
        }
    }
    return gap;
}

}  // namespace gedanken::channels
