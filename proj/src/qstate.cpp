#include "spinphoton/qstate.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "detail/register_kernels.hpp"

namespace spinphoton {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr Complex kI{0.0, 1.0};

Eigen::Vector2cd make_ket(Complex a, Complex b) {
    Eigen::Vector2cd v;
    v << a, b;
    return v;
}

} // namespace

std::string to_string(const QubitLabel& q) {
    return (q.kind == QubitKind::PhotonPolarization ? "p" : "s") + std::to_string(q.id);
}

namespace ket {
Eigen::Vector2cd R() { return make_ket(1.0, 0.0); }
Eigen::Vector2cd L() { return make_ket(0.0, 1.0); }
Eigen::Vector2cd H() { return make_ket(kInvSqrt2, kInvSqrt2); }
Eigen::Vector2cd V() { return make_ket(kInvSqrt2, -kInvSqrt2); }
Eigen::Vector2cd plus45() { return make_ket(kInvSqrt2, kI * kInvSqrt2); }
Eigen::Vector2cd minus45() { return make_ket(kInvSqrt2, -kI * kInvSqrt2); }
Eigen::Vector2cd up() { return make_ket(1.0, 0.0); }
Eigen::Vector2cd down() { return make_ket(0.0, 1.0); }
} // namespace ket

const BasisVectors& basis_vectors(MeasurementBasis basis) {
    static const BasisVectors rl{QubitKind::PhotonPolarization, {ket::R(), ket::L()}, {"R", "L"}};
    static const BasisVectors hv{QubitKind::PhotonPolarization, {ket::H(), ket::V()}, {"H", "V"}};
    static const BasisVectors diag{
        QubitKind::PhotonPolarization, {ket::plus45(), ket::minus45()}, {"+45", "-45"}};
    static const BasisVectors ud{QubitKind::ElectronSpin, {ket::up(), ket::down()}, {"up", "down"}};
    static const BasisVectors sx{QubitKind::ElectronSpin,
                                 {make_ket(kInvSqrt2, kInvSqrt2), make_ket(kInvSqrt2, -kInvSqrt2)},
                                 {"+x", "-x"}};
    switch (basis) {
    case MeasurementBasis::RL:
        return rl;
    case MeasurementBasis::HV:
        return hv;
    case MeasurementBasis::Diagonal:
        return diag;
    case MeasurementBasis::UpDown:
        return ud;
    case MeasurementBasis::SpinX:
        return sx;
    }
    throw std::invalid_argument("unknown measurement basis");
}

void check_register(const Register& qubits) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        for (std::size_t j = i + 1; j < qubits.size(); ++j) {
            if (qubits[i] == qubits[j]) {
                throw std::invalid_argument("duplicate qubit: " + to_string(qubits[i]));
            }
        }
    }
}

PureState::PureState(Register qubits, Eigen::VectorXcd amplitudes, double norm_tracking)
    : qubits_(std::move(qubits)), amplitudes_(std::move(amplitudes)),
      norm_tracking_(norm_tracking) {
    check_register(qubits_);
    if (qubits_.size() > kMaxQubits) {
        throw std::invalid_argument("register exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    if (static_cast<std::size_t>(amplitudes_.size()) != (std::size_t{1} << qubits_.size())) {
        throw std::invalid_argument("amplitude vector length must be 2^(register size)");
    }
    if (!(norm_tracking_ >= 0.0 && norm_tracking_ <= 1.0 + 1e-12)) {
        throw std::invalid_argument("norm_tracking must lie in [0, 1]");
    }
    norm_tracking_ = std::min(norm_tracking_, 1.0);
}

PureState PureState::single(QubitLabel q, const Eigen::Vector2cd& amplitudes) {
    return PureState({q}, amplitudes);
}

bool PureState::contains(const QubitLabel& q) const noexcept {
    for (const auto& x : qubits_) {
        if (x == q) {
            return true;
        }
    }
    return false;
}

std::size_t PureState::position(const QubitLabel& q) const {
    for (std::size_t p = 0; p < qubits_.size(); ++p) {
        if (qubits_[p] == q) {
            return p;
        }
    }
    throw std::invalid_argument("unknown qubit: " + to_string(q));
}

Complex PureState::amplitude(std::string_view basis) const {
    if (basis.size() != qubits_.size()) {
        throw std::invalid_argument("basis string length does not match register");
    }
    std::size_t index = 0;
    for (std::size_t p = 0; p < basis.size(); ++p) {
        const bool is_photon = qubits_[p].kind == QubitKind::PhotonPolarization;
        std::size_t bit = 0;
        const char c = basis[p];
        if (is_photon && c == 'R') {
            bit = 0;
        } else if (is_photon && c == 'L') {
            bit = 1;
        } else if (!is_photon && c == 'u') {
            bit = 0;
        } else if (!is_photon && c == 'd') {
            bit = 1;
        } else {
            throw std::invalid_argument("bad basis character '" + std::string(1, c) + "' for " +
                                        to_string(qubits_[p]));
        }
        index = (index << 1) | bit;
    }
    return amplitudes_[static_cast<Eigen::Index>(index)];
}

std::string basis_string(const Register& qubits, std::size_t index) {
    std::string s(qubits.size(), '?');
    for (std::size_t p = 0; p < qubits.size(); ++p) {
        const bool bit = (index >> (qubits.size() - 1 - p)) & 1u;
        if (qubits[p].kind == QubitKind::PhotonPolarization) {
            s[p] = bit ? 'L' : 'R';
        } else {
            s[p] = bit ? 'd' : 'u';
        }
    }
    return s;
}

bool is_unitary(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        return false;
    }
    const Eigen::MatrixXcd defect = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return defect.cwiseAbs().maxCoeff() <= tol;
}

PureState tensor(const PureState& a, const PureState& b) {
    Register qubits = a.qubits();
    qubits.insert(qubits.end(), b.qubits().begin(), b.qubits().end());
    check_register(qubits);

    const auto da = static_cast<Eigen::Index>(a.dimension());
    const auto db = static_cast<Eigen::Index>(b.dimension());
    Eigen::VectorXcd amps(da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        amps.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
    }
    return PureState(std::move(qubits), std::move(amps), a.norm_tracking() * b.norm_tracking());
}

PureState normalize(const PureState& state) {
    const double n = std::sqrt(state.squared_norm());
    if (n == 0.0) {
        throw std::invalid_argument("cannot normalize the zero vector");
    }
    return PureState(state.qubits(), state.amplitudes() / n, state.norm_tracking());
}

PureState apply_unitary(const PureState& state, std::span<const QubitLabel> targets,
                        const Eigen::MatrixXcd& matrix) {
    if (targets.empty()) {
        throw std::invalid_argument("apply_unitary needs at least one target");
    }
    const auto positions = detail::positions_of(state.qubits(), targets);
    const auto local_dim = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
    if (matrix.rows() != local_dim || matrix.cols() != local_dim) {
        throw std::invalid_argument("matrix dimension does not match target count");
    }
    if (!is_unitary(matrix)) {
        throw std::invalid_argument("matrix is not unitary");
    }
    Eigen::VectorXcd amps = state.amplitudes();
    detail::apply_local(amps.data(), state.num_qubits(), positions, matrix);
    return PureState(state.qubits(), std::move(amps), state.norm_tracking());
}

PureState apply_diagonal_pair(const PureState& state, QubitLabel photon_q, QubitLabel spin_q,
                              Complex coeff_coupled, Complex coeff_uncoupled) {
    if (photon_q.kind != QubitKind::PhotonPolarization) {
        throw std::invalid_argument("reflection gate: " + to_string(photon_q) + " is not a photon");
    }
    if (spin_q.kind != QubitKind::ElectronSpin) {
        throw std::invalid_argument("reflection gate: " + to_string(spin_q) + " is not a spin");
    }
    const std::size_t pp = state.position(photon_q);
    const std::size_t sp = state.position(spin_q);

    const double before = state.squared_norm();
    Eigen::VectorXcd amps = state.amplitudes();
    detail::apply_pair_diagonal(amps.data(), state.num_qubits(), pp, sp, coeff_coupled,
                                coeff_uncoupled);
    double tracking = state.norm_tracking();
    const double after = amps.squaredNorm();
    if (before > 0.0 && after < before) {
        tracking *= after / before;
    }
    return PureState(state.qubits(), std::move(amps), tracking);
}

std::vector<ProjectiveOutcome> measure(const PureState& state, QubitLabel target,
                                       MeasurementBasis basis) {
    const auto& bv = basis_vectors(basis);
    if (bv.kind != target.kind) {
        throw std::invalid_argument("measurement basis does not match qubit kind of " +
                                    to_string(target));
    }
    const std::size_t n = state.num_qubits();
    const std::size_t pos = state.position(target);

    std::vector<ProjectiveOutcome> outcomes;
    outcomes.reserve(2);
    for (std::size_t k = 0; k < 2; ++k) {
        const auto& b = bv.kets[k];
        const Eigen::VectorXcd reduced =
            detail::contract_qubit(state.amplitudes().data(), n, pos, b);
        const double p = reduced.squaredNorm();

        // Re-expand: (projected component) = b ⊗ reduced at the target slot.
        Eigen::VectorXcd post = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(state.dimension()));
        for (std::size_t j = 0; j < static_cast<std::size_t>(reduced.size()); ++j) {
            for (std::size_t bit = 0; bit < 2; ++bit) {
                post[static_cast<Eigen::Index>(detail::insert_bit(j, n, pos, bit))] =
                    b[static_cast<Eigen::Index>(bit)] * reduced[static_cast<Eigen::Index>(j)];
            }
        }
        if (p > 0.0) {
            post /= std::sqrt(p);
        }
        outcomes.push_back({std::string(bv.labels[k]), p,
                            PureState(state.qubits(), std::move(post), state.norm_tracking())});
    }
    return outcomes;
}

PureState project_out(const PureState& state, QubitLabel target, const Eigen::Vector2cd& ket) {
    if (state.num_qubits() < 2) {
        throw std::invalid_argument("project_out would leave an empty register");
    }
    const std::size_t pos = state.position(target);
    Eigen::VectorXcd reduced =
        detail::contract_qubit(state.amplitudes().data(), state.num_qubits(), pos, ket);
    return PureState(detail::without(state.qubits(), pos), std::move(reduced),
                     state.norm_tracking());
}

PureState relabel(const PureState& state, QubitLabel from, QubitLabel to) {
    Register qubits = state.qubits();
    const std::size_t pos = state.position(from);
    if (from != to && state.contains(to)) {
        throw std::invalid_argument("duplicate qubit: " + to_string(to));
    }
    qubits[pos] = to;
    return PureState(std::move(qubits), state.amplitudes(), state.norm_tracking());
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.qubits() != b.qubits()) {
        throw std::invalid_argument("fidelity: registers differ");
    }
    const double na = a.squared_norm();
    const double nb = b.squared_norm();
    if (na == 0.0 || nb == 0.0) {
        throw std::invalid_argument("fidelity: zero vector");
    }
    const double f = std::norm(a.amplitudes().dot(b.amplitudes())) / (na * nb);
    return std::min(f, 1.0);
}

double uniform_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::size_t select_branch(std::span<const double> probabilities, double u) {
    if (probabilities.empty()) {
        throw std::invalid_argument("cannot sample from an empty outcome list");
    }
    const double total = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("outcome probabilities do not sum to 1");
    }
    const double threshold = u * total;
    double cumulative = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] <= 0.0) {
            continue;
        }
        last_nonzero = i;
        cumulative += probabilities[i];
        if (threshold < cumulative) {
            return i;
        }
    }
    return last_nonzero;
}

std::size_t OutcomeSampler::draw(std::span<const double> probabilities) {
    return select_branch(probabilities, next_uniform());
}

const ProjectiveOutcome& sample_outcome(const std::vector<ProjectiveOutcome>& outcomes,
                                        std::uint64_t rng_seed) {
    if (outcomes.empty()) {
        throw std::invalid_argument("cannot sample from an empty outcome list");
    }
    std::vector<double> p;
    p.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        p.push_back(o.probability);
    }
    OutcomeSampler sampler(rng_seed);
    return outcomes[sampler.draw(p)];
}

} // namespace spinphoton
