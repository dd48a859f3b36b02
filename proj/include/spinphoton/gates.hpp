#pragma once

// Register operations built from cavity physics: the conditional reflection
// (phase) gate, spin and polarization unitaries, emission and corrections.

#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "spinphoton/cavity.hpp"
#include "spinphoton/density.hpp"
#include "spinphoton/qstate.hpp"

namespace spinphoton {

struct IdealMode {
    double delta_phi;
};

struct RealisticMode {
    CavityParams params;
    double omega;
};

using GateMode = std::variant<IdealMode, RealisticMode>;

/// Diagonal photon-spin map: |L,up>, |R,down> pick up coeff_coupled (hot
/// cavity), |R,up>, |L,down> pick up coeff_uncoupled (cold cavity).
struct ConditionalReflectionGate {
    QubitLabel photon;
    QubitLabel spin;
    Complex coeff_coupled;
    Complex coeff_uncoupled;
    GateMode mode;

    PureState apply(const PureState& state) const;
    DensityState apply(const DensityState& rho) const;

    /// 4x4 matrix on (photon, spin) in the R↑, R↓, L↑, L↓ ordering.
    Eigen::Matrix4cd matrix() const;
};

/// Uncoupled coefficient fixed to 1; the shared cold phase is dropped.
ConditionalReflectionGate ideal_gate(QubitLabel photon_q, QubitLabel spin_q, double delta_phi);

ConditionalReflectionGate realistic_gate(QubitLabel photon_q, QubitLabel spin_q,
                                         const CavityParams& params, double omega);

/// min over theta of the Frobenius distance ||A - e^{i theta} B||.
double operator_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

namespace polarization {

/// Columns are |H>, |V> in the R/L basis: maps R -> H, L -> V.
Eigen::Matrix2cd hadamard_hv();

/// Rows are <+45|, <-45|: maps |+45> -> |R>, |-45> -> |L>.
Eigen::Matrix2cd to_45();

enum class WaveplateKind { Half, Quarter };

/// Retarder with its fast axis at `fast_axis` radians from horizontal,
/// expressed in the R/L basis (global phase chosen so the matrix is
/// real-diagonal in the linear basis when fast_axis = 0).
Eigen::Matrix2cd waveplate(WaveplateKind kind, double fast_axis);

} // namespace polarization

namespace spin_ops {

Eigen::Matrix2cd hadamard();

/// pi/2 pulse that maps the two spin states accompanying n reflected photons
/// onto |up> and |down>. With c = i^n:
///   (|up> + c|down>)/√2 -> |up>,   (|up> - c|down>)/√2 -> |down>.
/// n = 1 is the y-to-z basis change, n = 2 a rotation about y by pi/2.
Eigen::Matrix2cd readout_rotation(int n_photons);

Eigen::Matrix2cd pauli_z();

} // namespace spin_ops

/// Relabels a spin as an emitted photon: |up> -> |L>, |down> -> |R>.
PureState trion_emission_map(const PureState& state, QubitLabel spin_q, QubitLabel new_photon);
DensityState trion_emission_map(const DensityState& rho, QubitLabel spin_q, QubitLabel new_photon);

enum class TransferScheme {
    PhotonToSpin, // scheme C: branches "H", "V"
    SpinToPhoton, // scheme D: branches "up", "down"
};

/// Unitary taking a branch's heralded state to α|up>+β|down> (photon to
/// spin) or α|H>+β|V> (spin to photon).
Eigen::Matrix2cd correction_unitary(std::string_view branch, TransferScheme scheme);

} // namespace spinphoton
