#pragma once

// Reflection response of a single-sided QD-micropillar cavity in the
// weak-excitation limit:
//
//   r(w) = 1 - kappa (i(wx - w) + gamma/2)
//              / [ (i(wx - w) + gamma/2)(i(wc - w) + (kappa + kappa_s)/2) + g^2 ]
//
// The cold (uncoupled) cavity is the same expression with g = 0. kappa and
// gamma are the full (twice the amplitude) decay rates.

#include <complex>

namespace spinphoton {

struct CavityParams {
    double g = 10.0;       // dipole-cavity coupling
    double kappa = 1.0;    // cavity field decay rate x2
    double gamma = 0.1;    // dipole decay rate x2
    double omega_c = 0.0;  // cavity mode frequency
    double omega_x = 0.0;  // dipole transition frequency
    double kappa_s = 0.0;  // side leakage

    /// g > kappa and g > gamma.
    bool strong_coupling() const noexcept { return g > kappa && g > gamma; }

    /// Throws std::invalid_argument unless g >= 0, kappa > 0, gamma >= 0,
    /// kappa_s >= 0 and all fields are finite.
    void validate() const;

    /// Parameters in units of kappa (kappa = 1, omega_c = omega_x = 0).
    static CavityParams relative(double g_rel, double gamma_rel, double kappa_s_rel = 0.0);
};

struct ReflectionResponse {
    std::complex<double> r;
    double magnitude;
    double phase; // principal value in (-pi, pi]
};

/// Wraps an angle into (-pi, pi].
double wrap_phase(double phase);

ReflectionResponse reflect(const CavityParams& params, double omega, bool coupled);

/// pm pi + 2 arctan(2 (w - wc) / kappa): "+" for w <= wc, "-" for w > wc,
/// so w = wc yields +pi. Ignores kappa_s.
double cold_phase_closed_form(const CavityParams& params, double omega);

/// arg(r_hot) - arg(r_cold), wrapped to (-pi, pi].
double conditional_phase(const CavityParams& params, double omega);

/// Detuning w - wc in (0, 5 kappa] at which the conditional phase equals
/// target_phase, found by bisection to 1e-9 rad. Requires strong coupling
/// and target_phase in (0, pi); throws std::runtime_error("target phase
/// unreachable") when the bracket has no root.
double find_operating_point(const CavityParams& params, double target_phase);

} // namespace spinphoton
