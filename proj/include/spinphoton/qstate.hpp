#pragma once

// Dense pure-state engine for small labeled qubit registers.
//
// Basis convention (part of the public contract):
//   photon polarization: index 0 = |R>, index 1 = |L>
//   electron spin:       index 0 = |up>, index 1 = |down>
// The first qubit of a register is the most significant bit of the
// amplitude index, so |R>|up> ⊗ ... enumerates as R↑, R↓, L↑, L↓.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spinphoton {

using Complex = std::complex<double>;

/// Largest register the dense engine accepts.
inline constexpr std::size_t kMaxQubits = 8;

enum class QubitKind { PhotonPolarization, ElectronSpin };

struct QubitLabel {
    QubitKind kind;
    int id;

    friend auto operator<=>(const QubitLabel&, const QubitLabel&) = default;
};

inline constexpr QubitLabel photon(int id) { return {QubitKind::PhotonPolarization, id}; }
inline constexpr QubitLabel spin(int id) { return {QubitKind::ElectronSpin, id}; }

/// "p<id>" for photons, "s<id>" for spins.
std::string to_string(const QubitLabel& q);

using Register = std::vector<QubitLabel>;

namespace ket {
Eigen::Vector2cd R();
Eigen::Vector2cd L();
Eigen::Vector2cd H();       // (|R> + |L>)/√2
Eigen::Vector2cd V();       // (|R> - |L>)/√2
Eigen::Vector2cd plus45();  // (|R> + i|L>)/√2
Eigen::Vector2cd minus45(); // (|R> - i|L>)/√2
Eigen::Vector2cd up();
Eigen::Vector2cd down();
} // namespace ket

enum class MeasurementBasis {
    RL,       // photon: R, L
    HV,       // photon: H, V
    Diagonal, // photon: +45, -45
    UpDown,   // spin: up, down
    SpinX,    // spin: +x, -x
};

struct BasisVectors {
    QubitKind kind;
    std::array<Eigen::Vector2cd, 2> kets;
    std::array<std::string_view, 2> labels;
};

const BasisVectors& basis_vectors(MeasurementBasis basis);

class PureState {
  public:
    /// Throws std::invalid_argument on duplicate labels ("duplicate qubit"),
    /// a size mismatch, or norm_tracking outside [0, 1].
    PureState(Register qubits, Eigen::VectorXcd amplitudes, double norm_tracking = 1.0);

    static PureState single(QubitLabel q, const Eigen::Vector2cd& amplitudes);

    const Register& qubits() const noexcept { return qubits_; }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    double norm_tracking() const noexcept { return norm_tracking_; }
    std::size_t num_qubits() const noexcept { return qubits_.size(); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }

    bool contains(const QubitLabel& q) const noexcept;
    /// Position of q in the register; throws std::invalid_argument if absent.
    std::size_t position(const QubitLabel& q) const;

    double squared_norm() const { return amplitudes_.squaredNorm(); }

    /// Amplitude addressed by a basis string such as "RLu" (R/L for photons,
    /// u/d for spins, in register order).
    Complex amplitude(std::string_view basis) const;

  private:
    Register qubits_;
    Eigen::VectorXcd amplitudes_;
    double norm_tracking_;
};

/// Basis string ("RLu", "LLd", ...) for an amplitude index of a register.
std::string basis_string(const Register& qubits, std::size_t index);

/// Throws std::invalid_argument("duplicate qubit") when the same label
/// appears twice.
void check_register(const Register& qubits);

bool is_unitary(const Eigen::MatrixXcd& m, double tol = 1e-12);

PureState tensor(const PureState& a, const PureState& b);

/// Rescales amplitudes to unit norm; norm_tracking is left untouched.
PureState normalize(const PureState& state);

PureState apply_unitary(const PureState& state, std::span<const QubitLabel> targets,
                        const Eigen::MatrixXcd& matrix);

inline PureState apply_unitary(const PureState& state, const QubitLabel& target,
                               const Eigen::Matrix2cd& matrix) {
    return apply_unitary(state, std::span<const QubitLabel>(&target, 1), matrix);
}

/// Multiplies |L,up> and |R,down> components by coeff_coupled and the
/// |R,up>, |L,down> components by coeff_uncoupled. When the map loses norm,
/// norm_tracking is scaled by the surviving fraction.
PureState apply_diagonal_pair(const PureState& state, QubitLabel photon_q, QubitLabel spin_q,
                              Complex coeff_coupled, Complex coeff_uncoupled);

struct ProjectiveOutcome {
    std::string label;
    double probability;
    PureState post_state;
};

/// Enumerates both branches. Probabilities are raw squared norms of the
/// projected components (they sum to the input squared norm). Post-states
/// keep the full register and are renormalized; a zero-probability branch
/// carries the zero vector.
std::vector<ProjectiveOutcome> measure(const PureState& state, QubitLabel target,
                                       MeasurementBasis basis);

/// Contracts <ket| on the target qubit and drops it from the register.
/// The result is left unnormalized.
PureState project_out(const PureState& state, QubitLabel target, const Eigen::Vector2cd& ket);

PureState relabel(const PureState& state, QubitLabel from, QubitLabel to);

/// |<a|b>|^2 / (<a|a><b|b>). Registers must match exactly.
double fidelity(const PureState& a, const PureState& b);

/// Counter-based SplitMix64 stream: draw k of a sampler seeded with s equals
/// uniform_at(s, k), so parallel and sequential consumers agree.
double uniform_at(std::uint64_t seed, std::uint64_t counter);

class OutcomeSampler {
  public:
    explicit OutcomeSampler(std::uint64_t seed) : seed_(seed) {}

    double next_uniform() { return uniform_at(seed_, counter_++); }

    /// Index of the drawn branch. Probabilities must sum to 1 within 1e-9.
    std::size_t draw(std::span<const double> probabilities);

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

/// Inverse-CDF selection for a given uniform variate in [0, 1).
std::size_t select_branch(std::span<const double> probabilities, double u);

const ProjectiveOutcome& sample_outcome(const std::vector<ProjectiveOutcome>& outcomes,
                                        std::uint64_t rng_seed);

} // namespace spinphoton
