#include "detail/register_kernels.hpp"

#include <stdexcept>

namespace spinphoton::detail {

std::vector<std::size_t> positions_of(const Register& qubits, std::span<const QubitLabel> targets) {
    std::vector<std::size_t> out;
    out.reserve(targets.size());
    for (const auto& t : targets) {
        bool found = false;
        for (std::size_t p = 0; p < qubits.size(); ++p) {
            if (qubits[p] == t) {
                for (auto seen : out) {
                    if (seen == p) {
                        throw std::invalid_argument("duplicate qubit in target list: " +
                                                    to_string(t));
                    }
                }
                out.push_back(p);
                found = true;
                break;
            }
        }
        if (!found) {
            throw std::invalid_argument("unknown qubit: " + to_string(t));
        }
    }
    return out;
}

void apply_local(Complex* data, std::size_t n_qubits, std::span<const std::size_t> positions,
                 const Eigen::MatrixXcd& matrix) {
    const std::size_t k = positions.size();
    const std::size_t local_dim = std::size_t{1} << k;
    const std::size_t dim = std::size_t{1} << n_qubits;

    std::vector<std::size_t> offsets(local_dim, 0);
    std::size_t target_mask = 0;
    for (std::size_t j = 0; j < local_dim; ++j) {
        for (std::size_t t = 0; t < k; ++t) {
            if ((j >> (k - 1 - t)) & 1u) {
                offsets[j] |= bit_mask(n_qubits, positions[t]);
            }
        }
    }
    for (auto p : positions) {
        target_mask |= bit_mask(n_qubits, p);
    }

    Eigen::VectorXcd gathered(static_cast<Eigen::Index>(local_dim));
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & target_mask) {
            continue;
        }
        for (std::size_t j = 0; j < local_dim; ++j) {
            gathered[static_cast<Eigen::Index>(j)] = data[base | offsets[j]];
        }
        const Eigen::VectorXcd out = matrix * gathered;
        for (std::size_t j = 0; j < local_dim; ++j) {
            data[base | offsets[j]] = out[static_cast<Eigen::Index>(j)];
        }
    }
}

void apply_pair_diagonal(Complex* data, std::size_t n_qubits, std::size_t photon_pos,
                         std::size_t spin_pos, Complex coupled, Complex uncoupled) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    const std::size_t pm = bit_mask(n_qubits, photon_pos);
    const std::size_t sm = bit_mask(n_qubits, spin_pos);
    for (std::size_t i = 0; i < dim; ++i) {
        const bool photon_l = (i & pm) != 0;
        const bool spin_down = (i & sm) != 0;
        data[i] *= (photon_l != spin_down) ? coupled : uncoupled;
    }
}

Eigen::VectorXcd contract_qubit(const Complex* data, std::size_t n_qubits, std::size_t position,
                                const Eigen::Vector2cd& ket) {
    const std::size_t reduced_dim = std::size_t{1} << (n_qubits - 1);
    Eigen::VectorXcd out(static_cast<Eigen::Index>(reduced_dim));
    const Complex c0 = std::conj(ket[0]);
    const Complex c1 = std::conj(ket[1]);
    for (std::size_t j = 0; j < reduced_dim; ++j) {
        out[static_cast<Eigen::Index>(j)] = c0 * data[insert_bit(j, n_qubits, position, 0)] +
                                            c1 * data[insert_bit(j, n_qubits, position, 1)];
    }
    return out;
}

Register without(const Register& qubits, std::size_t position) {
    Register out;
    out.reserve(qubits.size() - 1);
    for (std::size_t p = 0; p < qubits.size(); ++p) {
        if (p != position) {
            out.push_back(qubits[p]);
        }
    }
    return out;
}

} // namespace spinphoton::detail
