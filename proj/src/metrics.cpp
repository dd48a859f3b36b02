#include "spinphoton/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spinphoton {

namespace {

void require_two_qubits(std::size_t n) {
    if (n != 2) {
        throw std::invalid_argument("concurrence needs exactly 2 qubits, got " + std::to_string(n));
    }
}

constexpr double kEigenFloor = 1e-14;

} // namespace

double concurrence(const PureState& state) {
    require_two_qubits(state.num_qubits());
    const auto& a = state.amplitudes();
    const double n = state.squared_norm();
    if (n == 0.0) {
        throw std::invalid_argument("concurrence of the zero vector");
    }
    return std::min(1.0, 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]) / n);
}

double concurrence(const DensityState& rho_in) {
    require_two_qubits(rho_in.num_qubits());
    const DensityState rho = normalize(rho_in);
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    // rho = W W^dagger with rounding-level eigenvalues dropped; the
    // spin-flip spectrum is then the singular values of W^T (Y x Y) W.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix());
    Eigen::VectorXd w = es.eigenvalues();
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        w[i] = w[i] > kEigenFloor ? std::sqrt(w[i]) : 0.0;
    }
    const Eigen::MatrixXcd wm = es.eigenvectors() * w.asDiagonal();
    const Eigen::MatrixXcd tau = wm.transpose() * yy * wm;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tau);
    std::vector<double> l(svd.singularValues().data(), svd.singularValues().data() + 4);
    std::sort(l.begin(), l.end(), std::greater<>());
    return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

double von_neumann_entropy(const DensityState& rho_in) {
    const DensityState rho = normalize(rho_in);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix(), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()[i];
        if (l > 1e-15) {
            s -= l * std::log(l);
        }
    }
    return std::max(s, 0.0);
}

double entanglement_entropy(const PureState& state, std::span<const QubitLabel> partition) {
    if (partition.empty()) {
        throw std::invalid_argument("entanglement_entropy: empty partition");
    }
    if (partition.size() >= state.num_qubits()) {
        throw std::invalid_argument("entanglement_entropy: partition must be a proper subset");
    }
    const auto rho = DensityState::from_pure(normalize(state));
    return von_neumann_entropy(partial_trace(rho, partition));
}

} // namespace spinphoton
