#include "spinphoton/cavity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spinphoton {

using std::numbers::pi;

void CavityParams::validate() const {
    const bool finite = std::isfinite(g) && std::isfinite(kappa) && std::isfinite(gamma) &&
                        std::isfinite(omega_c) && std::isfinite(omega_x) && std::isfinite(kappa_s);
    if (!finite) {
        throw std::invalid_argument("cavity parameters must be finite");
    }
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("cavity kappa must be > 0");
    }
    if (g < 0.0 || gamma < 0.0 || kappa_s < 0.0) {
        throw std::invalid_argument("cavity g, gamma and kappa_s must be >= 0");
    }
}

CavityParams CavityParams::relative(double g_rel, double gamma_rel, double kappa_s_rel) {
    CavityParams p;
    p.g = g_rel;
    p.kappa = 1.0;
    p.gamma = gamma_rel;
    p.kappa_s = kappa_s_rel;
    p.omega_c = 0.0;
    p.omega_x = 0.0;
    return p;
}

double wrap_phase(double phase) {
    double w = std::remainder(phase, 2.0 * pi);
    if (w <= -pi) {
        w += 2.0 * pi;
    }
    return w;
}

namespace {

std::complex<double> reflection(const CavityParams& p, double omega, double g) {
    using namespace std::complex_literals;
    const std::complex<double> dipole = 1i * (p.omega_x - omega) + p.gamma / 2.0;
    const std::complex<double> cavity = 1i * (p.omega_c - omega) + (p.kappa + p.kappa_s) / 2.0;
    return 1.0 - p.kappa * dipole / (dipole * cavity + g * g);
}

// Unwrapped on detuning > 0: the cold phase stays in (-pi, 0) there.
double raw_phase_difference(const CavityParams& p, double omega) {
    return std::arg(reflection(p, omega, p.g)) - std::arg(reflection(p, omega, 0.0));
}

} // namespace

ReflectionResponse reflect(const CavityParams& params, double omega, bool coupled) {
    params.validate();
    const auto r = reflection(params, omega, coupled ? params.g : 0.0);
    return {r, std::abs(r), wrap_phase(std::arg(r))};
}

double cold_phase_closed_form(const CavityParams& params, double omega) {
    params.validate();
    const double detuning = omega - params.omega_c;
    const double branch = detuning <= 0.0 ? pi : -pi;
    return branch + 2.0 * std::atan(2.0 * detuning / params.kappa);
}

double conditional_phase(const CavityParams& params, double omega) {
    params.validate();
    return wrap_phase(std::arg(reflection(params, omega, params.g)) -
                      std::arg(reflection(params, omega, 0.0)));
}

double find_operating_point(const CavityParams& params, double target_phase) {
    params.validate();
    if (!(target_phase > 0.0 && target_phase < pi)) {
        throw std::invalid_argument("target phase must lie in (0, pi)");
    }
    if (!params.strong_coupling()) {
        throw std::invalid_argument("operating-point search requires strong coupling");
    }

    auto f = [&](double detuning) {
        return raw_phase_difference(params, params.omega_c + detuning) - target_phase;
    };

    double lo = 1e-12 * params.kappa;
    double hi = 5.0 * params.kappa;
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (!(f_lo > 0.0 && f_hi < 0.0) && !(f_lo < 0.0 && f_hi > 0.0)) {
        throw std::runtime_error("target phase unreachable");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16 * params.kappa; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    const double root = 0.5 * (lo + hi);
    // A phase wrap inside the bracket would show up as a jump, not a root.
    if (std::abs(f(root)) > 1e-9) {
        throw std::runtime_error("target phase unreachable");
    }
    return root;
}

} // namespace spinphoton
