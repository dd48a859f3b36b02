#pragma once

// Batch front end: run-config files, subcommand dispatch and the CSV/JSON
// writers. `run` is the whole program minus process setup.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spinphoton/cavity.hpp"
#include "spinphoton/protocols.hpp"
#include "spinphoton/sweep.hpp"

namespace spinphoton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Bad flags, config keys or values. Maps to exit code 2.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Unreadable or unwritable files. Maps to exit code 1.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parsed run config. Frequencies and rates are stored in units of kappa
/// (kappa = 1) whatever units the file used.
struct RunConfig {
    ProtocolKind protocol = ProtocolKind::SchemeA;
    bool realistic = false;
    double delta_phi = kHalfPi;
    double detuning_rel = 0.5;
    CavityParams cavity = CavityParams::relative(10.0, 0.1);
    /// Scheme A second cavity; unset keys inherit from `cavity`.
    std::optional<CavityParams> cavity2;
    Complex alpha1{std::numbers::sqrt2 / 2.0};
    Complex beta1{std::numbers::sqrt2 / 2.0};
    Complex alpha2{std::numbers::sqrt2 / 2.0};
    Complex beta2{std::numbers::sqrt2 / 2.0};
    std::optional<double> t_over_t2;
    std::uint64_t seed = 0;
    std::size_t trials = 1000;
    int ghz_photons = 3;

    ProtocolConfig protocol_config() const;
};

/// `key = value` lines, `#` starts a comment. Throws UsageError naming the
/// line for unknown keys, duplicates and malformed values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Accepts "re", "imj", "re+imj", "re-imj" (Python complex literal style).
Complex parse_complex(std::string_view text);

/// "a:b:n" gives n evenly spaced points from a to b; otherwise a comma
/// separated list. Throws UsageError on an empty or malformed range.
std::vector<double> parse_grid(std::string_view text);

void write_reflectance_csv(std::ostream& out, const std::vector<ReflectanceRow>& rows);
void write_sweep_csv(std::ostream& out, const SweepTable& table);
void write_samples_csv(std::ostream& out, const std::vector<std::string>& labels);
std::string protocol_json(const RunConfig& config, const ProtocolResult& result);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace spinphoton::cli
