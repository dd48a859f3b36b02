#pragma once

// Batch drivers: parameter sweeps over protocols, reflectance spectra and
// seeded branch sampling. Each has an OpenMP version and a serial reference;
// both produce identical output in grid order.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinphoton/cavity.hpp"
#include "spinphoton/protocols.hpp"

namespace spinphoton {

/// Worker count for the parallel drivers: SPINPHOTON_THREADS when set to a
/// positive integer, otherwise the OpenMP default.
int max_threads();

enum class SweepParameter { GRel, GammaRel, KappaSRel, DetuningRel, TOverT2 };

std::string_view sweep_parameter_name(SweepParameter p);
std::optional<SweepParameter> parse_sweep_parameter(std::string_view name);
/// "g_rel, gamma_rel, kappa_s_rel, detuning_rel, t_over_t2"
std::string sweep_parameter_list();

/// Copy of `config` with the swept quantity set to `value` (rates and
/// detuning in units of kappa). Cavity quantities need a realistic gate.
ProtocolConfig with_sweep_value(const ProtocolConfig& config, SweepParameter p, double value);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::GRel;
    std::vector<double> grid;
    ProtocolConfig config;
    ProtocolKind protocol = ProtocolKind::SchemeB;
    int ghz_photons = 3;

    /// Grid must be nonempty, finite and strictly increasing.
    void validate() const;
};

struct SweepRow {
    double swept_value;
    std::string branch_label;
    double probability;
    double fidelity;
    std::optional<double> concurrence;
    double success_probability;
};

struct SweepTable {
    std::string swept_name;
    std::vector<SweepRow> rows; // grid order, then branch order
};

/// Errors from a grid point are rethrown with "<name>=<value>: " prepended,
/// keeping std::invalid_argument for configuration problems.
SweepTable run_sweep(const SweepSpec& spec);
SweepTable run_sweep_serial(const SweepSpec& spec);

struct ReflectanceRow {
    double detuning_rel;
    ReflectionResponse cold;
    ReflectionResponse hot;
    double delta_phi;
};

/// Probe detunings are omega - omega_c in units of kappa.
std::vector<ReflectanceRow> reflectance_sweep(const CavityParams& params,
                                              std::span<const double> detunings_rel);
std::vector<ReflectanceRow> reflectance_sweep_serial(const CavityParams& params,
                                                     std::span<const double> detunings_rel);

/// Label used for trials in which the photon was lost (|r| < 1).
inline constexpr std::string_view kLostLabel = "lost";

/// One branch label per trial; trial k uses uniform_at(seed, k). When the
/// branches do not exhaust the probability, the remainder is reported as
/// kLostLabel.
std::vector<std::string> sample_branches(const ProtocolResult& result, std::uint64_t seed,
                                         std::size_t trials);
std::vector<std::string> sample_branches_serial(const ProtocolResult& result, std::uint64_t seed,
                                                std::size_t trials);

} // namespace spinphoton
