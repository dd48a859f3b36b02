#pragma once

// Density-operator counterpart of PureState, used for dephasing and for
// branches whose conditional state is mixed.

#include <array>
#include <span>

#include <Eigen/Dense>

#include "spinphoton/qstate.hpp"

namespace spinphoton {

class DensityState {
  public:
    DensityState(Register qubits, Eigen::MatrixXcd matrix, double norm_tracking = 1.0);

    /// |psi><psi| without renormalization; norm_tracking is carried over.
    static DensityState from_pure(const PureState& psi);

    const Register& qubits() const noexcept { return qubits_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
    double norm_tracking() const noexcept { return norm_tracking_; }
    std::size_t num_qubits() const noexcept { return qubits_.size(); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t position(const QubitLabel& q) const;
    bool contains(const QubitLabel& q) const noexcept;

    double trace() const { return matrix_.trace().real(); }

  private:
    Register qubits_;
    Eigen::MatrixXcd matrix_;
    double norm_tracking_;
};

DensityState normalize(const DensityState& rho);

DensityState apply_unitary(const DensityState& rho, std::span<const QubitLabel> targets,
                           const Eigen::MatrixXcd& matrix);

inline DensityState apply_unitary(const DensityState& rho, const QubitLabel& target,
                                  const Eigen::Matrix2cd& matrix) {
    return apply_unitary(rho, std::span<const QubitLabel>(&target, 1), matrix);
}

DensityState apply_diagonal_pair(const DensityState& rho, QubitLabel photon_q, QubitLabel spin_q,
                                 Complex coeff_coupled, Complex coeff_uncoupled);

/// rho -> sum_k K_k rho K_k^dagger with single-qubit Kraus operators on target.
DensityState apply_kraus(const DensityState& rho, QubitLabel target,
                         std::span<const Eigen::Matrix2cd> kraus);

/// Pure dephasing of a spin for an interval t = t_over_t2 * T2. Coherences
/// in the up/down basis decay by exp(-t/T2).
DensityState dephase_spin(const DensityState& rho, QubitLabel target, double t_over_t2);

/// Kraus pair {sqrt(1 - p/2) I, sqrt(p/2) Z} with p = 1 - exp(-t/T2).
std::array<Eigen::Matrix2cd, 2> dephasing_kraus(double t_over_t2);

/// <ket| rho |ket> on the target, dropping it from the register (unnormalized).
DensityState project_out(const DensityState& rho, QubitLabel target, const Eigen::Vector2cd& ket);

/// Reduced state on `keep`, ordered as in the original register.
DensityState partial_trace(const DensityState& rho, std::span<const QubitLabel> keep);

DensityState relabel(const DensityState& rho, QubitLabel from, QubitLabel to);

/// <psi| rho |psi> / (<psi|psi> tr rho).
double fidelity(const PureState& psi, const DensityState& rho);

} // namespace spinphoton
