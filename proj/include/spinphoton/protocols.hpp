#pragma once

// Spin-photon entanglement and state-transfer protocols. Each protocol is a
// Circuit (exposed for independent re-execution) plus an assembly step that
// groups measurement leaves into heralded branches.
//
// Register labels used throughout:
//   spins s1, s2; photons p1, p2, ... ; p0 is the scheme-A probe photon.

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spinphoton/circuit.hpp"
#include "spinphoton/density.hpp"
#include "spinphoton/gates.hpp"
#include "spinphoton/qstate.hpp"

namespace spinphoton {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr int kMaxChainPhotons = 6;

struct ProtocolConfig {
    GateMode gate = IdealMode{kHalfPi};
    /// Scheme A only: parameters of the second cavity when it differs.
    std::optional<RealisticMode> second_cavity;
    /// Spin dephasing per waiting interval, in units of T2.
    std::optional<double> t_over_t2;

    // Input qubits alpha|0> + beta|1> (R/L for photons, up/down for spins).
    Complex alpha1{std::numbers::sqrt2 / 2.0};
    Complex beta1{std::numbers::sqrt2 / 2.0};
    Complex alpha2{std::numbers::sqrt2 / 2.0};
    Complex beta2{std::numbers::sqrt2 / 2.0};

    std::uint64_t seed = 0;

    /// Throws std::invalid_argument naming the offending pair when
    /// |alpha|^2 + |beta|^2 deviates from 1 by more than 1e-9.
    void validate() const;

    bool dephasing_enabled() const { return t_over_t2.has_value() && *t_over_t2 > 0.0; }
};

struct Branch {
    std::string label;
    double probability;             // joint with survival of lossy reflections
    DensityState state;             // normalized conditional output
    std::optional<PureState> pure;  // normalized, when the output is a single pure state
    PureState target;               // ideal output, not necessarily normalized
    double fidelity;
    std::optional<double> concurrence; // two-qubit outputs only
    double success_probability;        // norm_tracking carried by the branch
};

struct JointOutcome {
    OutcomeRecord record;
    double probability;
};

struct ProtocolResult {
    std::string protocol;
    std::vector<Branch> branches;
    /// Every measurement path, e.g. (ancilla, spin) pairs for scheme B.
    std::vector<JointOutcome> joint;

    double survival_probability() const;
    /// Throws std::out_of_range when the branch was not produced.
    const Branch& branch(std::string_view label) const;
    /// 0 for branches dropped as impossible.
    double probability_of(std::string_view label) const;
};

enum class ProtocolKind { SchemeA, SchemeB, TransferPhotonToSpin, TransferSpinToPhoton, Ghz };

std::string_view protocol_name(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol(std::string_view name);

/// Scheme A entanglement step on [s1, s2, p0], optionally followed by
/// emission-interval dephasing and the emission of p1, p2.
Circuit scheme_a_circuit(const ProtocolConfig& config, bool with_emission);
Circuit scheme_b_circuit(const ProtocolConfig& config);
Circuit chain_circuit(const ProtocolConfig& config, int n_photons);
Circuit transfer_photon_to_spin_circuit(const ProtocolConfig& config);
Circuit transfer_spin_to_photon_circuit(const ProtocolConfig& config);

/// Spins (alpha1, beta1), (alpha2, beta2); probe |H> reflects off both
/// cavities and is detected in H/V. "V" heralds a1a2|uu> - b1b2|dd>,
/// "H" heralds a1b2|ud> + a2b1|du>.
ProtocolResult scheme_a_entangle_spins(const ProtocolConfig& config);

/// Dephases both spins for the emission interval, then maps them onto
/// photons p1, p2.
ProtocolResult scheme_a_emit(const ProtocolResult& entangled, const ProtocolConfig& config);

ProtocolResult scheme_a(const ProtocolConfig& config);

/// Branches "+45" (a1a2|RR> - b1b2|LL>) and "-45" (a1b2|RL> + a2b1|LR>).
ProtocolResult scheme_b_entangle_photons(const ProtocolConfig& config);

/// Photon alpha1|R> + beta1|L> onto the spin. Branches "H", "V".
ProtocolResult transfer_photon_to_spin(const ProtocolConfig& config);

/// Spin alpha1|up> + beta1|down> onto photon p1. Branches "up", "down".
ProtocolResult transfer_spin_to_photon(const ProtocolConfig& config);

/// Readout of `spin_q` by reflecting an |H> ancilla and detecting it at
/// ±45 degrees. Post-states drop the ancilla and are renormalized.
std::vector<ProjectiveOutcome> gfr_spin_readout(const PureState& state, QubitLabel spin_q,
                                                QubitLabel ancilla);
std::vector<ProjectiveOutcome> gfr_spin_readout(const PureState& state, QubitLabel spin_q,
                                                QubitLabel ancilla, const GateMode& mode);

/// n photons reflect off one spin, followed by the parity readout rotation
/// and GFR readout. Photons 1 and 2 take the configured amplitudes, later
/// photons are |H>. For n >= 3 each photon is rotated by to_45 and the
/// "+45" branch gets a Z on the last photon, so both branches target
/// (|R...R> - |L...L>)/√2 for |H> inputs. n = 2 reproduces scheme B.
ProtocolResult chain_multiphoton(const ProtocolConfig& config, int n_photons);

ProtocolResult run_protocol(ProtocolKind kind, const ProtocolConfig& config, int ghz_photons = 3);

} // namespace spinphoton
