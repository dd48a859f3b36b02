#include "spinphoton/gates.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace spinphoton {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr Complex kI{0.0, 1.0};
} // namespace

PureState ConditionalReflectionGate::apply(const PureState& state) const {
    return apply_diagonal_pair(state, photon, spin, coeff_coupled, coeff_uncoupled);
}

DensityState ConditionalReflectionGate::apply(const DensityState& rho) const {
    return apply_diagonal_pair(rho, photon, spin, coeff_coupled, coeff_uncoupled);
}

Eigen::Matrix4cd ConditionalReflectionGate::matrix() const {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = coeff_uncoupled; // R up
    m(1, 1) = coeff_coupled;   // R down
    m(2, 2) = coeff_coupled;   // L up
    m(3, 3) = coeff_uncoupled; // L down
    return m;
}

ConditionalReflectionGate ideal_gate(QubitLabel photon_q, QubitLabel spin_q, double delta_phi) {
    if (photon_q.kind != QubitKind::PhotonPolarization || spin_q.kind != QubitKind::ElectronSpin) {
        throw std::invalid_argument("ideal_gate expects (photon, spin) labels");
    }
    return {photon_q, spin_q, std::polar(1.0, delta_phi), Complex{1.0, 0.0}, IdealMode{delta_phi}};
}

ConditionalReflectionGate realistic_gate(QubitLabel photon_q, QubitLabel spin_q,
                                         const CavityParams& params, double omega) {
    if (photon_q.kind != QubitKind::PhotonPolarization || spin_q.kind != QubitKind::ElectronSpin) {
        throw std::invalid_argument("realistic_gate expects (photon, spin) labels");
    }
    const auto hot = reflect(params, omega, true);
    const auto cold = reflect(params, omega, false);
    return {photon_q, spin_q, hot.r, cold.r, RealisticMode{params, omega}};
}

double operator_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("operator_distance: shape mismatch");
    }
    const double overlap = std::abs((a.adjoint() * b).trace());
    const double d2 = a.squaredNorm() + b.squaredNorm() - 2.0 * overlap;
    return std::sqrt(std::max(d2, 0.0));
}

namespace polarization {

Eigen::Matrix2cd hadamard_hv() {
    Eigen::Matrix2cd m;
    m << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    return m;
}

Eigen::Matrix2cd to_45() {
    Eigen::Matrix2cd m;
    m.row(0) = ket::plus45().adjoint();
    m.row(1) = ket::minus45().adjoint();
    return m;
}

Eigen::Matrix2cd waveplate(WaveplateKind kind, double fast_axis) {
    const double retardance = kind == WaveplateKind::Half ? std::numbers::pi : std::numbers::pi / 2.0;
    const double c = std::cos(fast_axis);
    const double s = std::sin(fast_axis);
    Eigen::Matrix2cd rot;
    rot << c, -s, s, c;
    Eigen::Matrix2cd retarder = Eigen::Matrix2cd::Zero();
    retarder(0, 0) = 1.0;
    retarder(1, 1) = std::polar(1.0, retardance);
    const Eigen::Matrix2cd linear = rot * retarder * rot.adjoint();
    const Eigen::Matrix2cd basis = hadamard_hv(); // linear (H, V) coordinates -> (R, L)
    return basis * linear * basis.adjoint();
}

} // namespace polarization

namespace spin_ops {

Eigen::Matrix2cd hadamard() { return polarization::hadamard_hv(); }

Eigen::Matrix2cd readout_rotation(int n_photons) {
    if (n_photons < 1) {
        throw std::invalid_argument("readout_rotation needs at least one photon");
    }
    static constexpr Complex kPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const Complex c = kPowers[n_photons % 4];
    Eigen::Matrix2cd m;
    m << 1.0, std::conj(c), 1.0, -std::conj(c);
    return m * kInvSqrt2;
}

Eigen::Matrix2cd pauli_z() {
    Eigen::Matrix2cd m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

} // namespace spin_ops

namespace {

Eigen::Matrix2cd pauli_x() {
    Eigen::Matrix2cd m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

void check_emission_labels(QubitLabel spin_q, QubitLabel new_photon) {
    if (spin_q.kind != QubitKind::ElectronSpin) {
        throw std::invalid_argument("emission source " + to_string(spin_q) + " is not a spin");
    }
    if (new_photon.kind != QubitKind::PhotonPolarization) {
        throw std::invalid_argument("emission target " + to_string(new_photon) +
                                    " is not a photon");
    }
}

} // namespace

PureState trion_emission_map(const PureState& state, QubitLabel spin_q, QubitLabel new_photon) {
    check_emission_labels(spin_q, new_photon);
    if (state.contains(new_photon)) {
        throw std::invalid_argument("duplicate qubit: " + to_string(new_photon));
    }
    // index 0 (up) -> index 1 (L), index 1 (down) -> index 0 (R)
    return relabel(apply_unitary(state, spin_q, pauli_x()), spin_q, new_photon);
}

DensityState trion_emission_map(const DensityState& rho, QubitLabel spin_q, QubitLabel new_photon) {
    check_emission_labels(spin_q, new_photon);
    if (rho.contains(new_photon)) {
        throw std::invalid_argument("duplicate qubit: " + to_string(new_photon));
    }
    return relabel(apply_unitary(rho, spin_q, pauli_x()), spin_q, new_photon);
}

Eigen::Matrix2cd correction_unitary(std::string_view branch, TransferScheme scheme) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    if (scheme == TransferScheme::PhotonToSpin) {
        // H herald: α|up> + iβ|down>;  V herald: α|up> - iβ|down>
        if (branch == "H") {
            m(0, 0) = 1.0;
            m(1, 1) = -kI;
            return m;
        }
        if (branch == "V") {
            m(0, 0) = 1.0;
            m(1, 1) = kI;
            return m;
        }
    } else {
        // up: α|+45> + iβ|-45>;  down: α|+45> - iβ|-45>. Diagonal phase in the
        // ±45 basis followed by |+45> -> |H>, |-45> -> |V>.
        Complex phase;
        if (branch == "up") {
            phase = -kI;
        } else if (branch == "down") {
            phase = kI;
        } else {
            throw std::invalid_argument("unknown branch '" + std::string(branch) +
                                        "' for spin-to-photon transfer");
        }
        const Eigen::Matrix2cd diag45 = ket::plus45() * ket::plus45().adjoint() +
                                        phase * ket::minus45() * ket::minus45().adjoint();
        const Eigen::Matrix2cd frame =
            ket::H() * ket::plus45().adjoint() + ket::V() * ket::minus45().adjoint();
        return frame * diag45;
    }
    throw std::invalid_argument("unknown branch '" + std::string(branch) +
                                "' for photon-to-spin transfer");
}

} // namespace spinphoton
