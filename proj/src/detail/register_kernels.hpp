#pragma once

// Index arithmetic and in-place kernels shared by the pure and density
// engines. Qubit position p of an n-qubit register maps to bit (n - 1 - p).

#include <cstddef>
#include <span>
#include <vector>

#include "spinphoton/qstate.hpp"

namespace spinphoton::detail {

inline std::size_t bit_mask(std::size_t n_qubits, std::size_t position) {
    return std::size_t{1} << (n_qubits - 1 - position);
}

/// Inserts bit value b at `position` of an (n_qubits)-qubit index, given the
/// (n_qubits - 1)-qubit index of the remaining qubits.
inline std::size_t insert_bit(std::size_t reduced, std::size_t n_qubits, std::size_t position,
                              std::size_t b) {
    const std::size_t shift = n_qubits - 1 - position;
    const std::size_t low = reduced & ((std::size_t{1} << shift) - 1);
    const std::size_t high = reduced >> shift;
    return (high << (shift + 1)) | (b << shift) | low;
}

std::vector<std::size_t> positions_of(const Register& qubits, std::span<const QubitLabel> targets);

/// Applies a 2^k x 2^k matrix to the targets of a contiguous amplitude
/// vector. targets[0] is the most significant qubit of the local index.
void apply_local(Complex* data, std::size_t n_qubits, std::span<const std::size_t> positions,
                 const Eigen::MatrixXcd& matrix);

/// Multiplies each amplitude by coupled/uncoupled depending on whether the
/// photon and spin bits differ (L,up / R,down) or agree (R,up / L,down).
void apply_pair_diagonal(Complex* data, std::size_t n_qubits, std::size_t photon_pos,
                         std::size_t spin_pos, Complex coupled, Complex uncoupled);

/// Reduced vector sum_b conj(ket_b) v[insert(j, b)].
Eigen::VectorXcd contract_qubit(const Complex* data, std::size_t n_qubits, std::size_t position,
                                const Eigen::Vector2cd& ket);

Register without(const Register& qubits, std::size_t position);

} // namespace spinphoton::detail
