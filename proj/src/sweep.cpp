#include "spinphoton/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <stdexcept>

#include <omp.h>

namespace spinphoton {

namespace {

constexpr SweepParameter kAllParameters[] = {SweepParameter::GRel, SweepParameter::GammaRel,
                                             SweepParameter::KappaSRel, SweepParameter::DetuningRel,
                                             SweepParameter::TOverT2};

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<SweepRow> rows_for(const SweepSpec& spec, double value) {
    const ProtocolConfig cfg = with_sweep_value(spec.config, spec.parameter, value);
    const ProtocolResult result = run_protocol(spec.protocol, cfg, spec.ghz_photons);
    std::vector<SweepRow> rows;
    for (const auto& b : result.branches) {
        rows.push_back({value, b.label, b.probability, b.fidelity, b.concurrence, b.success_probability});
    }
    return rows;
}

[[noreturn]] void rethrow_with_context(const SweepSpec& spec, double value, std::exception_ptr e) {
    const std::string prefix =
        std::string(sweep_parameter_name(spec.parameter)) + "=" + format_value(value) + ": ";
    try {
        std::rethrow_exception(e);
    } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument(prefix + ex.what());
    } catch (const std::exception& ex) {
        throw std::runtime_error(prefix + ex.what());
    }
}

SweepTable flatten(const SweepSpec& spec, std::vector<std::vector<SweepRow>>& per_point) {
    SweepTable table{std::string(sweep_parameter_name(spec.parameter)), {}};
    for (auto& rows : per_point) {
        for (auto& r : rows) {
            table.rows.push_back(std::move(r));
        }
    }
    return table;
}

ReflectanceRow reflectance_at(const CavityParams& params, double detuning_rel) {
    const double omega = params.omega_c + detuning_rel * params.kappa;
    const auto cold = reflect(params, omega, false);
    const auto hot = reflect(params, omega, true);
    return {detuning_rel, cold, hot, wrap_phase(hot.phase - cold.phase)};
}

std::vector<double> sampling_weights(const ProtocolResult& result) {
    std::vector<double> p;
    double total = 0.0;
    for (const auto& b : result.branches) {
        p.push_back(b.probability);
        total += b.probability;
    }
    if (total < 1.0 - 1e-12) {
        p.push_back(1.0 - total);
    }
    return p;
}

std::string label_at(const ProtocolResult& result, std::size_t index) {
    return index < result.branches.size() ? result.branches[index].label : std::string(kLostLabel);
}

} // namespace

int max_threads() {
    if (const char* env = std::getenv("SPINPHOTON_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) {
            return static_cast<int>(n);
        }
    }
    return omp_get_max_threads();
}

std::string_view sweep_parameter_name(SweepParameter p) {
    switch (p) {
    case SweepParameter::GRel:
        return "g_rel";
    case SweepParameter::GammaRel:
        return "gamma_rel";
    case SweepParameter::KappaSRel:
        return "kappa_s_rel";
    case SweepParameter::DetuningRel:
        return "detuning_rel";
    case SweepParameter::TOverT2:
        return "t_over_t2";
    }
    return "unknown";
}

std::optional<SweepParameter> parse_sweep_parameter(std::string_view name) {
    for (auto p : kAllParameters) {
        if (sweep_parameter_name(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

std::string sweep_parameter_list() {
    std::string out;
    for (auto p : kAllParameters) {
        if (!out.empty()) {
            out += ", ";
        }
        out += sweep_parameter_name(p);
    }
    return out;
}

ProtocolConfig with_sweep_value(const ProtocolConfig& config, SweepParameter p, double value) {
    ProtocolConfig out = config;
    if (p == SweepParameter::TOverT2) {
        out.t_over_t2 = value;
        return out;
    }
    auto* real = std::get_if<RealisticMode>(&out.gate);
    if (!real) {
        throw std::invalid_argument("sweeping " + std::string(sweep_parameter_name(p)) +
                                    " requires gate.mode = realistic");
    }
    auto update = [&](RealisticMode& m) {
        const double k = m.params.kappa;
        switch (p) {
        case SweepParameter::GRel:
            m.params.g = value * k;
            break;
        case SweepParameter::GammaRel:
            m.params.gamma = value * k;
            break;
        case SweepParameter::KappaSRel:
            m.params.kappa_s = value * k;
            break;
        case SweepParameter::DetuningRel:
            m.omega = m.params.omega_c + value * k;
            break;
        case SweepParameter::TOverT2:
            break;
        }
    };
    update(*real);
    if (out.second_cavity) {
        update(*out.second_cavity);
    }
    return out;
}

void SweepSpec::validate() const {
    if (grid.empty()) {
        throw std::invalid_argument("sweep grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i])) {
            throw std::invalid_argument("sweep grid contains a non-finite value");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("sweep grid must be strictly increasing");
        }
    }
    config.validate();
}

SweepTable run_sweep_serial(const SweepSpec& spec) {
    spec.validate();
    std::vector<std::vector<SweepRow>> per_point(spec.grid.size());
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        try {
            per_point[i] = rows_for(spec, spec.grid[i]);
        } catch (...) {
            rethrow_with_context(spec, spec.grid[i], std::current_exception());
        }
    }
    return flatten(spec, per_point);
}

SweepTable run_sweep(const SweepSpec& spec) {
    spec.validate();
    const auto n = static_cast<std::ptrdiff_t>(spec.grid.size());
    std::vector<std::vector<SweepRow>> per_point(spec.grid.size());
    std::vector<std::exception_ptr> errors(spec.grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            per_point[static_cast<std::size_t>(i)] = rows_for(spec, spec.grid[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (errors[i]) {
            rethrow_with_context(spec, spec.grid[i], errors[i]);
        }
    }
    return flatten(spec, per_point);
}

std::vector<ReflectanceRow> reflectance_sweep_serial(const CavityParams& params,
                                                     std::span<const double> detunings_rel) {
    params.validate();
    std::vector<ReflectanceRow> rows;
    rows.reserve(detunings_rel.size());
    for (double d : detunings_rel) {
        rows.push_back(reflectance_at(params, d));
    }
    return rows;
}

std::vector<ReflectanceRow> reflectance_sweep(const CavityParams& params,
                                              std::span<const double> detunings_rel) {
    params.validate();
    std::vector<ReflectanceRow> rows(detunings_rel.size());
    const auto n = static_cast<std::ptrdiff_t>(detunings_rel.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] = reflectance_at(params, detunings_rel[static_cast<std::size_t>(i)]);
    }
    return rows;
}

std::vector<std::string> sample_branches_serial(const ProtocolResult& result, std::uint64_t seed,
                                                std::size_t trials) {
    const auto p = sampling_weights(result);
    OutcomeSampler sampler(seed);
    std::vector<std::string> labels;
    labels.reserve(trials);
    for (std::size_t k = 0; k < trials; ++k) {
        labels.push_back(label_at(result, sampler.draw(p)));
    }
    return labels;
}

std::vector<std::string> sample_branches(const ProtocolResult& result, std::uint64_t seed,
                                         std::size_t trials) {
    const auto p = sampling_weights(result);
    // Validate once up front so worker threads never throw.
    select_branch(p, 0.0);
    std::vector<std::size_t> index(trials);
    const auto n = static_cast<std::ptrdiff_t>(trials);
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        index[static_cast<std::size_t>(k)] = select_branch(p, uniform_at(seed, static_cast<std::uint64_t>(k)));
    }
    std::vector<std::string> labels;
    labels.reserve(trials);
    for (std::size_t i : index) {
        labels.push_back(label_at(result, i));
    }
    return labels;
}

} // namespace spinphoton
