#include "spinphoton/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "detail/register_kernels.hpp"

namespace spinphoton {

DensityState::DensityState(Register qubits, Eigen::MatrixXcd matrix, double norm_tracking)
    : qubits_(std::move(qubits)), matrix_(std::move(matrix)), norm_tracking_(norm_tracking) {
    check_register(qubits_);
    if (qubits_.size() > kMaxQubits) {
        throw std::invalid_argument("register exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << qubits_.size());
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw std::invalid_argument("density matrix must be 2^n x 2^n");
    }
    if (!(norm_tracking_ >= 0.0 && norm_tracking_ <= 1.0 + 1e-12)) {
        throw std::invalid_argument("norm_tracking must lie in [0, 1]");
    }
    norm_tracking_ = std::min(norm_tracking_, 1.0);
}

DensityState DensityState::from_pure(const PureState& psi) {
    return DensityState(psi.qubits(), psi.amplitudes() * psi.amplitudes().adjoint(),
                        psi.norm_tracking());
}

std::size_t DensityState::position(const QubitLabel& q) const {
    for (std::size_t p = 0; p < qubits_.size(); ++p) {
        if (qubits_[p] == q) {
            return p;
        }
    }
    throw std::invalid_argument("unknown qubit: " + to_string(q));
}

bool DensityState::contains(const QubitLabel& q) const noexcept {
    for (const auto& x : qubits_) {
        if (x == q) {
            return true;
        }
    }
    return false;
}

DensityState normalize(const DensityState& rho) {
    const double t = rho.trace();
    if (!(t > 0.0)) {
        throw std::invalid_argument("cannot normalize a density matrix with zero trace");
    }
    return DensityState(rho.qubits(), rho.matrix() / t, rho.norm_tracking());
}

namespace {

// M -> A M A^dagger where A acts locally; applied to columns, then rows.
Eigen::MatrixXcd conjugate_local(const Eigen::MatrixXcd& m, std::size_t n_qubits,
                                 std::span<const std::size_t> positions,
                                 const Eigen::MatrixXcd& local) {
    Eigen::MatrixXcd work = m;
    for (Eigen::Index c = 0; c < work.cols(); ++c) {
        detail::apply_local(work.col(c).data(), n_qubits, positions, local);
    }
    Eigen::MatrixXcd adj = work.adjoint();
    for (Eigen::Index c = 0; c < adj.cols(); ++c) {
        detail::apply_local(adj.col(c).data(), n_qubits, positions, local);
    }
    return adj.adjoint();
}

} // namespace

DensityState apply_unitary(const DensityState& rho, std::span<const QubitLabel> targets,
                           const Eigen::MatrixXcd& matrix) {
    if (targets.empty()) {
        throw std::invalid_argument("apply_unitary needs at least one target");
    }
    const auto positions = detail::positions_of(rho.qubits(), targets);
    const auto local_dim = static_cast<Eigen::Index>(std::size_t{1} << targets.size());
    if (matrix.rows() != local_dim || matrix.cols() != local_dim) {
        throw std::invalid_argument("matrix dimension does not match target count");
    }
    if (!is_unitary(matrix)) {
        throw std::invalid_argument("matrix is not unitary");
    }
    return DensityState(rho.qubits(), conjugate_local(rho.matrix(), rho.num_qubits(), positions, matrix),
                        rho.norm_tracking());
}

DensityState apply_diagonal_pair(const DensityState& rho, QubitLabel photon_q, QubitLabel spin_q,
                                 Complex coeff_coupled, Complex coeff_uncoupled) {
    if (photon_q.kind != QubitKind::PhotonPolarization) {
        throw std::invalid_argument("reflection gate: " + to_string(photon_q) + " is not a photon");
    }
    if (spin_q.kind != QubitKind::ElectronSpin) {
        throw std::invalid_argument("reflection gate: " + to_string(spin_q) + " is not a spin");
    }
    const std::size_t n = rho.num_qubits();
    const std::size_t pp = rho.position(photon_q);
    const std::size_t sp = rho.position(spin_q);

    Eigen::VectorXcd diag = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(rho.dimension()));
    detail::apply_pair_diagonal(diag.data(), n, pp, sp, coeff_coupled, coeff_uncoupled);
    Eigen::MatrixXcd m = diag.asDiagonal() * rho.matrix() * diag.conjugate().asDiagonal();

    const double before = rho.trace();
    const double after = m.trace().real();
    double tracking = rho.norm_tracking();
    if (before > 0.0 && after < before) {
        tracking *= after / before;
    }
    return DensityState(rho.qubits(), std::move(m), tracking);
}

DensityState apply_kraus(const DensityState& rho, QubitLabel target,
                         std::span<const Eigen::Matrix2cd> kraus) {
    const std::size_t pos = rho.position(target);
    const std::array<std::size_t, 1> positions{pos};
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
    for (const auto& k : kraus) {
        sum += conjugate_local(rho.matrix(), rho.num_qubits(), positions, k);
    }
    return DensityState(rho.qubits(), std::move(sum), rho.norm_tracking());
}

std::array<Eigen::Matrix2cd, 2> dephasing_kraus(double t_over_t2) {
    if (!(t_over_t2 >= 0.0)) {
        throw std::invalid_argument("dephasing time must be non-negative");
    }
    const double p = 1.0 - std::exp(-t_over_t2);
    Eigen::Matrix2cd k0 = std::sqrt(1.0 - p / 2.0) * Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd k1;
    k1 << 1.0, 0.0, 0.0, -1.0;
    k1 *= std::sqrt(p / 2.0);
    return {k0, k1};
}

DensityState dephase_spin(const DensityState& rho, QubitLabel target, double t_over_t2) {
    if (target.kind != QubitKind::ElectronSpin) {
        throw std::invalid_argument("dephase_spin: " + to_string(target) + " is not a spin");
    }
    const auto kraus = dephasing_kraus(t_over_t2);
    return apply_kraus(rho, target, kraus);
}

DensityState project_out(const DensityState& rho, QubitLabel target, const Eigen::Vector2cd& ket) {
    if (rho.num_qubits() < 2) {
        throw std::invalid_argument("project_out would leave an empty register");
    }
    const std::size_t n = rho.num_qubits();
    const std::size_t pos = rho.position(target);
    const std::size_t rdim = rho.dimension() / 2;
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(rdim), static_cast<Eigen::Index>(rdim));
    const Eigen::Vector2cd c = ket.conjugate();
    for (std::size_t i = 0; i < rdim; ++i) {
        for (std::size_t j = 0; j < rdim; ++j) {
            Complex acc = 0.0;
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    acc += c[static_cast<Eigen::Index>(a)] * std::conj(c[static_cast<Eigen::Index>(b)]) *
                           rho.matrix()(static_cast<Eigen::Index>(detail::insert_bit(i, n, pos, a)),
                                        static_cast<Eigen::Index>(detail::insert_bit(j, n, pos, b)));
                }
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    return DensityState(detail::without(rho.qubits(), pos), std::move(out), rho.norm_tracking());
}

DensityState partial_trace(const DensityState& rho, std::span<const QubitLabel> keep) {
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep-set is empty");
    }
    auto keep_pos = detail::positions_of(rho.qubits(), keep);
    std::sort(keep_pos.begin(), keep_pos.end());

    const std::size_t n = rho.num_qubits();
    std::vector<std::size_t> traced_pos;
    for (std::size_t p = 0; p < n; ++p) {
        if (std::find(keep_pos.begin(), keep_pos.end(), p) == keep_pos.end()) {
            traced_pos.push_back(p);
        }
    }

    auto compose = [n](const std::vector<std::size_t>& positions, std::size_t local) {
        std::size_t idx = 0;
        const std::size_t k = positions.size();
        for (std::size_t t = 0; t < k; ++t) {
            if ((local >> (k - 1 - t)) & 1u) {
                idx |= detail::bit_mask(n, positions[t]);
            }
        }
        return idx;
    };

    const std::size_t kdim = std::size_t{1} << keep_pos.size();
    const std::size_t tdim = std::size_t{1} << traced_pos.size();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(kdim),
                                                  static_cast<Eigen::Index>(kdim));
    for (std::size_t i = 0; i < kdim; ++i) {
        const std::size_t bi = compose(keep_pos, i);
        for (std::size_t j = 0; j < kdim; ++j) {
            const std::size_t bj = compose(keep_pos, j);
            Complex acc = 0.0;
            for (std::size_t t = 0; t < tdim; ++t) {
                const std::size_t bt = compose(traced_pos, t);
                acc += rho.matrix()(static_cast<Eigen::Index>(bi | bt),
                                    static_cast<Eigen::Index>(bj | bt));
            }
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = acc;
        }
    }
    Register kept;
    for (auto p : keep_pos) {
        kept.push_back(rho.qubits()[p]);
    }
    return DensityState(std::move(kept), std::move(out), rho.norm_tracking());
}

DensityState relabel(const DensityState& rho, QubitLabel from, QubitLabel to) {
    Register qubits = rho.qubits();
    const std::size_t pos = rho.position(from);
    if (from != to && rho.contains(to)) {
        throw std::invalid_argument("duplicate qubit: " + to_string(to));
    }
    qubits[pos] = to;
    return DensityState(std::move(qubits), rho.matrix(), rho.norm_tracking());
}

double fidelity(const PureState& psi, const DensityState& rho) {
    if (psi.qubits() != rho.qubits()) {
        throw std::invalid_argument("fidelity: registers differ");
    }
    const double np = psi.squared_norm();
    const double tr = rho.trace();
    if (np == 0.0 || !(tr > 0.0)) {
        throw std::invalid_argument("fidelity: zero state");
    }
    const Complex v = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
    return std::clamp(v.real() / (np * tr), 0.0, 1.0);
}

} // namespace spinphoton
