#include "spinphoton/protocols.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "spinphoton/metrics.hpp"

namespace spinphoton {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
// Leaves below this squared norm are numerically-cancelled amplitudes.
constexpr double kNegligibleLeaf = 1e-24;
// Branches below this probability are treated as impossible and dropped.
constexpr double kNegligibleBranch = 1e-14;

constexpr QubitLabel kS1 = spin(1);
constexpr QubitLabel kS2 = spin(2);
constexpr QubitLabel kProbe = photon(0);

PureState qubit(QubitLabel q, Complex a, Complex b) {
    Eigen::Vector2cd v;
    v << a, b;
    return PureState::single(q, v);
}

PureState uniform(QubitLabel q) { return qubit(q, kInvSqrt2, kInvSqrt2); }

PureState two_qubit(QubitLabel q0, QubitLabel q1, Complex c00, Complex c01, Complex c10,
                    Complex c11) {
    Eigen::Vector4cd v;
    v << c00, c01, c10, c11;
    return PureState({q0, q1}, v);
}

void require_half_pi(const ProtocolConfig& config) {
    if (const auto* ideal = std::get_if<IdealMode>(&config.gate)) {
        if (std::abs(ideal->delta_phi - kHalfPi) > 1e-12) {
            throw std::invalid_argument("protocol requires π/2 conditional phase in ideal mode");
        }
    }
}

ConditionalReflectionGate gate_for(const GateMode& mode, QubitLabel p, QubitLabel s) {
    if (const auto* ideal = std::get_if<IdealMode>(&mode)) {
        return ideal_gate(p, s, ideal->delta_phi);
    }
    const auto& real = std::get<RealisticMode>(mode);
    return realistic_gate(p, s, real.params, real.omega);
}

ReflectStep reflect_step(const GateMode& mode, QubitLabel p, QubitLabel s) {
    const auto g = gate_for(mode, p, s);
    return {p, s, g.coeff_coupled, g.coeff_uncoupled};
}

void maybe_dephase(std::vector<Step>& steps, const ProtocolConfig& config, QubitLabel s) {
    if (config.dephasing_enabled()) {
        steps.emplace_back(DephaseStep{s, *config.t_over_t2});
    }
}

PureState tensor_all(std::initializer_list<PureState> parts) {
    auto it = parts.begin();
    PureState acc = *it++;
    for (; it != parts.end(); ++it) {
        acc = tensor(acc, *it);
    }
    return acc;
}

struct Group {
    double probability = 0.0;
    double weighted_tracking = 0.0;
    std::vector<PureState> pure_leaves;
    std::optional<DensityState> density;
};

Branch finish_branch(std::string label, Group group, PureState target) {
    std::optional<PureState> pure;
    std::optional<DensityState> rho;
    if (group.density) {
        rho = normalize(*group.density);
    } else if (group.pure_leaves.size() == 1) {
        pure = normalize(group.pure_leaves.front());
        rho = DensityState::from_pure(*pure);
    } else {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(
            static_cast<Eigen::Index>(group.pure_leaves.front().dimension()),
            static_cast<Eigen::Index>(group.pure_leaves.front().dimension()));
        for (const auto& leaf : group.pure_leaves) {
            m += leaf.amplitudes() * leaf.amplitudes().adjoint();
        }
        rho = normalize(DensityState(group.pure_leaves.front().qubits(), std::move(m)));
    }

    double fid = 0.0;
    if (target.squared_norm() > 0.0) {
        fid = pure ? fidelity(target, *pure) : fidelity(target, *rho);
    }
    std::optional<double> conc;
    if (rho->num_qubits() == 2) {
        conc = pure ? concurrence(*pure) : concurrence(*rho);
    }
    const double success = group.weighted_tracking / group.probability;
    return Branch{std::move(label),
                  group.probability,
                  DensityState(rho->qubits(), rho->matrix(), std::min(success, 1.0)),
                  std::move(pure),
                  std::move(target),
                  fid,
                  conc,
                  std::min(success, 1.0)};
}

using LabelMap = std::map<std::string, std::string, std::less<>>;
using TargetMap = std::map<std::string, PureState, std::less<>>;

std::string branch_label(const OutcomeRecord& record, std::string_view key, const LabelMap& labels) {
    const auto& outcome = outcome_of(record, key);
    const auto it = labels.find(outcome);
    return it == labels.end() ? outcome : it->second;
}

ProtocolResult assemble(std::string name, const Circuit& circuit, bool dephased,
                        std::string_view key, const LabelMap& labels, const TargetMap& targets) {
    ProtocolResult result;
    result.protocol = std::move(name);
    std::map<std::string, Group, std::less<>> groups;
    std::vector<std::string> order;

    auto group_for = [&](const std::string& label) -> Group& {
        auto [it, inserted] = groups.try_emplace(label);
        if (inserted) {
            order.push_back(label);
        }
        return it->second;
    };

    if (dephased) {
        for (auto& leaf : run_density(circuit)) {
            const double p = leaf.state.trace();
            result.joint.push_back({leaf.record, p});
            auto& g = group_for(branch_label(leaf.record, key, labels));
            if (p <= kNegligibleLeaf) {
                continue;
            }
            g.probability += p;
            g.weighted_tracking += p * leaf.state.norm_tracking();
            if (g.density) {
                g.density = DensityState(g.density->qubits(), g.density->matrix() + leaf.state.matrix());
            } else {
                g.density = DensityState(leaf.state.qubits(), leaf.state.matrix());
            }
        }
    } else {
        for (auto& leaf : run_pure(circuit)) {
            const double p = leaf.state.squared_norm();
            result.joint.push_back({leaf.record, p});
            auto& g = group_for(branch_label(leaf.record, key, labels));
            if (p <= kNegligibleLeaf) {
                continue;
            }
            g.probability += p;
            g.weighted_tracking += p * leaf.state.norm_tracking();
            g.pure_leaves.push_back(PureState(leaf.state.qubits(), leaf.state.amplitudes()));
        }
    }

    for (const auto& label : order) {
        auto& g = groups.at(label);
        if (g.probability <= kNegligibleBranch) {
            continue;
        }
        result.branches.push_back(finish_branch(label, std::move(g), targets.at(label)));
    }
    return result;
}

} // namespace

void ProtocolConfig::validate() const {
    auto check = [](Complex a, Complex b, const char* name) {
        const double n = std::norm(a) + std::norm(b);
        if (!(std::abs(n - 1.0) <= 1e-9)) {
            throw std::invalid_argument(std::string(name) + " not normalized (|a|^2+|b|^2 = " +
                                        std::to_string(n) + ")");
        }
    };
    check(alpha1, beta1, "alpha1/beta1");
    check(alpha2, beta2, "alpha2/beta2");
    if (t_over_t2 && !(*t_over_t2 >= 0.0)) {
        throw std::invalid_argument("t_over_t2 must be non-negative");
    }
    if (const auto* real = std::get_if<RealisticMode>(&gate)) {
        real->params.validate();
    }
    if (second_cavity) {
        second_cavity->params.validate();
    }
}

double ProtocolResult::survival_probability() const {
    double s = 0.0;
    for (const auto& b : branches) {
        s += b.probability;
    }
    return s;
}

const Branch& ProtocolResult::branch(std::string_view label) const {
    for (const auto& b : branches) {
        if (b.label == label) {
            return b;
        }
    }
    throw std::out_of_range("branch '" + std::string(label) + "' not present in " + protocol);
}

double ProtocolResult::probability_of(std::string_view label) const {
    for (const auto& b : branches) {
        if (b.label == label) {
            return b.probability;
        }
    }
    return 0.0;
}

std::string_view protocol_name(ProtocolKind kind) {
    switch (kind) {
    case ProtocolKind::SchemeA:
        return "scheme-a";
    case ProtocolKind::SchemeB:
        return "scheme-b";
    case ProtocolKind::TransferPhotonToSpin:
        return "transfer-ps";
    case ProtocolKind::TransferSpinToPhoton:
        return "transfer-sp";
    case ProtocolKind::Ghz:
        return "ghz";
    }
    return "unknown";
}

std::optional<ProtocolKind> parse_protocol(std::string_view name) {
    for (auto k : {ProtocolKind::SchemeA, ProtocolKind::SchemeB, ProtocolKind::TransferPhotonToSpin,
                   ProtocolKind::TransferSpinToPhoton, ProtocolKind::Ghz}) {
        if (protocol_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

Circuit scheme_a_circuit(const ProtocolConfig& config, bool with_emission) {
    config.validate();
    require_half_pi(config);
    const GateMode& second = config.second_cavity ? GateMode{*config.second_cavity} : config.gate;

    Circuit c{tensor_all({qubit(kS1, config.alpha1, config.beta1),
                          qubit(kS2, config.alpha2, config.beta2), uniform(kProbe)}),
              {}};
    c.steps.emplace_back(reflect_step(config.gate, kProbe, kS1));
    c.steps.emplace_back(reflect_step(second, kProbe, kS2));
    c.steps.emplace_back(MeasureStep{kProbe, MeasurementBasis::HV, "probe"});
    if (with_emission) {
        maybe_dephase(c.steps, config, kS1);
        maybe_dephase(c.steps, config, kS2);
        c.steps.emplace_back(EmitStep{kS1, photon(1)});
        c.steps.emplace_back(EmitStep{kS2, photon(2)});
    }
    return c;
}

ProtocolResult scheme_a_entangle_spins(const ProtocolConfig& config) {
    const auto& a1 = config.alpha1;
    const auto& b1 = config.beta1;
    const auto& a2 = config.alpha2;
    const auto& b2 = config.beta2;
    const TargetMap targets{
        {"V", two_qubit(kS1, kS2, a1 * a2, 0.0, 0.0, -b1 * b2)},
        {"H", two_qubit(kS1, kS2, 0.0, a1 * b2, a2 * b1, 0.0)},
    };
    return assemble("scheme-a-spins", scheme_a_circuit(config, false), false, "probe", {}, targets);
}

ProtocolResult scheme_a_emit(const ProtocolResult& entangled, const ProtocolConfig& config) {
    config.validate();
    const auto& a1 = config.alpha1;
    const auto& b1 = config.beta1;
    const auto& a2 = config.alpha2;
    const auto& b2 = config.beta2;
    const QubitLabel p1 = photon(1);
    const QubitLabel p2 = photon(2);
    // |up> -> |L>, |down> -> |R>
    const TargetMap targets{
        {"V", two_qubit(p1, p2, -b1 * b2, 0.0, 0.0, a1 * a2)},
        {"H", two_qubit(p1, p2, 0.0, a2 * b1, a1 * b2, 0.0)},
    };

    ProtocolResult out;
    out.protocol = "scheme-a";
    out.joint = entangled.joint;
    for (const auto& b : entangled.branches) {
        if (b.state.qubits() != Register{kS1, kS2}) {
            throw std::invalid_argument("scheme_a_emit expects two-spin branches on (s1, s2)");
        }
        const PureState& target = targets.at(b.label);
        std::optional<PureState> pure;
        DensityState rho = b.state;
        if (config.dephasing_enabled() || !b.pure) {
            if (config.dephasing_enabled()) {
                rho = dephase_spin(rho, kS1, *config.t_over_t2);
                rho = dephase_spin(rho, kS2, *config.t_over_t2);
            }
            rho = trion_emission_map(trion_emission_map(rho, kS1, p1), kS2, p2);
        } else {
            pure = trion_emission_map(trion_emission_map(*b.pure, kS1, p1), kS2, p2);
            rho = DensityState::from_pure(*pure);
        }
        double fid = 0.0;
        if (target.squared_norm() > 0.0) {
            fid = pure ? fidelity(target, *pure) : fidelity(target, rho);
        }
        const double conc = pure ? concurrence(*pure) : concurrence(rho);
        out.branches.push_back(Branch{b.label, b.probability, std::move(rho), std::move(pure), target,
                                      fid, conc, b.success_probability});
    }
    return out;
}

ProtocolResult scheme_a(const ProtocolConfig& config) {
    return scheme_a_emit(scheme_a_entangle_spins(config), config);
}

Circuit chain_circuit(const ProtocolConfig& config, int n_photons) {
    config.validate();
    require_half_pi(config);
    if (n_photons < 2 || n_photons > kMaxChainPhotons) {
        throw std::invalid_argument("chain_multiphoton supports 2 to " +
                                    std::to_string(kMaxChainPhotons) +
                                    " photons (register overflow)");
    }
    const QubitLabel ancilla = photon(n_photons + 1);

    PureState input = qubit(photon(1), config.alpha1, config.beta1);
    input = tensor(input, qubit(photon(2), config.alpha2, config.beta2));
    for (int k = 3; k <= n_photons; ++k) {
        input = tensor(input, uniform(photon(k)));
    }
    input = tensor(input, uniform(kS1));
    input = tensor(input, uniform(ancilla));

    Circuit c{std::move(input), {}};
    for (int k = 1; k <= n_photons; ++k) {
        if (k > 1) {
            maybe_dephase(c.steps, config, kS1);
        }
        c.steps.emplace_back(reflect_step(config.gate, photon(k), kS1));
    }
    c.steps.emplace_back(UnitaryStep{{kS1}, spin_ops::readout_rotation(n_photons), "readout-rotation"});
    maybe_dephase(c.steps, config, kS1);
    c.steps.emplace_back(reflect_step(config.gate, ancilla, kS1));
    c.steps.emplace_back(MeasureStep{ancilla, MeasurementBasis::Diagonal, "ancilla"});
    c.steps.emplace_back(MeasureStep{kS1, MeasurementBasis::UpDown, "spin"});

    if (n_photons >= 3) {
        for (int k = 1; k <= n_photons; ++k) {
            c.steps.emplace_back(UnitaryStep{{photon(k)}, polarization::to_45(), "to-45"});
        }
        ConditionalStep fix{"ancilla", photon(n_photons), {}};
        fix.by_outcome.emplace("+45", spin_ops::pauli_z());
        fix.by_outcome.emplace("-45", Eigen::Matrix2cd::Identity());
        c.steps.emplace_back(std::move(fix));
    }
    return c;
}

Circuit scheme_b_circuit(const ProtocolConfig& config) { return chain_circuit(config, 2); }

ProtocolResult chain_multiphoton(const ProtocolConfig& config, int n_photons) {
    const Circuit c = chain_circuit(config, n_photons);
    TargetMap targets;
    if (n_photons == 2) {
        const auto& a1 = config.alpha1;
        const auto& b1 = config.beta1;
        const auto& a2 = config.alpha2;
        const auto& b2 = config.beta2;
        targets.emplace("+45", two_qubit(photon(1), photon(2), a1 * a2, 0.0, 0.0, -b1 * b2));
        targets.emplace("-45", two_qubit(photon(1), photon(2), 0.0, a1 * b2, a2 * b1, 0.0));
    } else {
        Register reg;
        for (int k = 1; k <= n_photons; ++k) {
            reg.push_back(photon(k));
        }
        Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_photons);
        ghz[0] = kInvSqrt2;
        ghz[ghz.size() - 1] = -kInvSqrt2;
        targets.emplace("+45", PureState(reg, ghz));
        targets.emplace("-45", PureState(reg, ghz));
    }
    const std::string name = n_photons == 2 ? "scheme-b" : "ghz";
    return assemble(name, c, config.dephasing_enabled(), "ancilla", {}, targets);
}

ProtocolResult scheme_b_entangle_photons(const ProtocolConfig& config) {
    return chain_multiphoton(config, 2);
}

Circuit transfer_photon_to_spin_circuit(const ProtocolConfig& config) {
    config.validate();
    require_half_pi(config);
    const QubitLabel p1 = photon(1);
    Circuit c{tensor(qubit(p1, config.alpha1, config.beta1), uniform(kS1)), {}};
    c.steps.emplace_back(reflect_step(config.gate, p1, kS1));
    maybe_dephase(c.steps, config, kS1);
    // The PBS makes the H/V detection: a Hadamard followed by R/L counting.
    c.steps.emplace_back(MeasureStep{p1, MeasurementBasis::HV, "photon"});
    c.steps.emplace_back(UnitaryStep{{kS1}, spin_ops::readout_rotation(1), "readout-rotation"});
    ConditionalStep fix{"photon", kS1, {}};
    fix.by_outcome.emplace("H", correction_unitary("H", TransferScheme::PhotonToSpin));
    fix.by_outcome.emplace("V", correction_unitary("V", TransferScheme::PhotonToSpin));
    c.steps.emplace_back(std::move(fix));
    return c;
}

ProtocolResult transfer_photon_to_spin(const ProtocolConfig& config) {
    const Circuit c = transfer_photon_to_spin_circuit(config);
    const PureState target = qubit(kS1, config.alpha1, config.beta1);
    const TargetMap targets{{"H", target}, {"V", target}};
    return assemble("transfer-ps", c, config.dephasing_enabled(), "photon", {}, targets);
}

Circuit transfer_spin_to_photon_circuit(const ProtocolConfig& config) {
    config.validate();
    require_half_pi(config);
    const QubitLabel p1 = photon(1);
    const QubitLabel ancilla = photon(2);
    Circuit c{tensor_all({qubit(kS1, config.alpha1, config.beta1), uniform(p1), uniform(ancilla)}),
              {}};
    c.steps.emplace_back(reflect_step(config.gate, p1, kS1));
    maybe_dephase(c.steps, config, kS1);
    c.steps.emplace_back(UnitaryStep{{kS1}, spin_ops::hadamard(), "hadamard"});
    c.steps.emplace_back(reflect_step(config.gate, ancilla, kS1));
    c.steps.emplace_back(MeasureStep{ancilla, MeasurementBasis::Diagonal, "ancilla"});
    c.steps.emplace_back(MeasureStep{kS1, MeasurementBasis::UpDown, "spin"});
    ConditionalStep fix{"ancilla", p1, {}};
    fix.by_outcome.emplace("+45", correction_unitary("up", TransferScheme::SpinToPhoton));
    fix.by_outcome.emplace("-45", correction_unitary("down", TransferScheme::SpinToPhoton));
    c.steps.emplace_back(std::move(fix));
    return c;
}

ProtocolResult transfer_spin_to_photon(const ProtocolConfig& config) {
    const Circuit c = transfer_spin_to_photon_circuit(config);
    const QubitLabel p1 = photon(1);
    Eigen::Vector2cd t = config.alpha1 * ket::H() + config.beta1 * ket::V();
    const PureState target = PureState::single(p1, t);
    const TargetMap targets{{"up", target}, {"down", target}};
    const LabelMap labels{{"+45", "up"}, {"-45", "down"}};
    return assemble("transfer-sp", c, config.dephasing_enabled(), "ancilla", labels, targets);
}

std::vector<ProjectiveOutcome> gfr_spin_readout(const PureState& state, QubitLabel spin_q,
                                                QubitLabel ancilla) {
    return gfr_spin_readout(state, spin_q, ancilla, IdealMode{kHalfPi});
}

std::vector<ProjectiveOutcome> gfr_spin_readout(const PureState& state, QubitLabel spin_q,
                                                QubitLabel ancilla, const GateMode& mode) {
    if (!state.contains(spin_q)) {
        throw std::invalid_argument("unknown qubit: " + to_string(spin_q));
    }
    const PureState joint = gate_for(mode, ancilla, spin_q).apply(tensor(state, uniform(ancilla)));
    const auto& bv = basis_vectors(MeasurementBasis::Diagonal);
    std::vector<ProjectiveOutcome> out;
    for (std::size_t k = 0; k < 2; ++k) {
        PureState post = project_out(joint, ancilla, bv.kets[k]);
        const double p = post.squared_norm();
        if (p > 0.0) {
            post = normalize(post);
        }
        out.push_back({std::string(bv.labels[k]), p, std::move(post)});
    }
    return out;
}

ProtocolResult run_protocol(ProtocolKind kind, const ProtocolConfig& config, int ghz_photons) {
    switch (kind) {
    case ProtocolKind::SchemeA:
        return scheme_a(config);
    case ProtocolKind::SchemeB:
        return scheme_b_entangle_photons(config);
    case ProtocolKind::TransferPhotonToSpin:
        return transfer_photon_to_spin(config);
    case ProtocolKind::TransferSpinToPhoton:
        return transfer_spin_to_photon(config);
    case ProtocolKind::Ghz:
        return chain_multiphoton(config, ghz_photons);
    }
    throw std::invalid_argument("unknown protocol");
}

} // namespace spinphoton
