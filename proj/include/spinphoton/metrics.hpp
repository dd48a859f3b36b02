#pragma once

#include <span>

#include "spinphoton/density.hpp"
#include "spinphoton/qstate.hpp"

namespace spinphoton {

/// 2|ad - bc| / norm^2 on the four amplitudes of a two-qubit state.
double concurrence(const PureState& state);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), with l_i the decreasing
/// square roots of the eigenvalues of sqrt(rho) (Y⊗Y) rho* (Y⊗Y) sqrt(rho).
double concurrence(const DensityState& rho);

/// Von Neumann entropy (natural log) of the reduced state on `partition`.
double entanglement_entropy(const PureState& state, std::span<const QubitLabel> partition);

/// -sum l ln l over the eigenvalues of a normalized density matrix.
double von_neumann_entropy(const DensityState& rho);

} // namespace spinphoton
