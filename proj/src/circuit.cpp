#include "spinphoton/circuit.hpp"

#include <stdexcept>

#include "spinphoton/gates.hpp"

namespace spinphoton {

const std::string& outcome_of(const OutcomeRecord& record, std::string_view key) {
    for (const auto& [k, v] : record) {
        if (k == key) {
            return v;
        }
    }
    throw std::out_of_range("no outcome recorded for '" + std::string(key) + "'");
}

bool has_dephasing(const Circuit& circuit) {
    for (const auto& step : circuit.steps) {
        if (std::holds_alternative<DephaseStep>(step)) {
            return true;
        }
    }
    return false;
}

namespace {

// Same traversal for both state representations; only the per-step actions
// differ.
template <typename State, typename Leaf, typename Ops>
std::vector<Leaf> run(const Circuit& circuit, State input, const Ops& ops) {
    std::vector<Leaf> frontier{Leaf{{}, std::move(input)}};
    for (const auto& step : circuit.steps) {
        std::vector<Leaf> next;
        next.reserve(frontier.size() * 2);
        for (auto& leaf : frontier) {
            std::visit(
                [&](const auto& s) {
                    using T = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<T, UnitaryStep>) {
                        next.push_back({leaf.record, apply_unitary(leaf.state, s.targets, s.matrix)});
                    } else if constexpr (std::is_same_v<T, ReflectStep>) {
                        next.push_back({leaf.record,
                                        apply_diagonal_pair(leaf.state, s.photon, s.spin,
                                                            s.coeff_coupled, s.coeff_uncoupled)});
                    } else if constexpr (std::is_same_v<T, DephaseStep>) {
                        next.push_back({leaf.record, ops.dephase(leaf.state, s)});
                    } else if constexpr (std::is_same_v<T, MeasureStep>) {
                        const auto& bv = basis_vectors(s.basis);
                        if (bv.kind != s.target.kind) {
                            throw std::invalid_argument("measurement basis does not match " +
                                                        to_string(s.target));
                        }
                        for (std::size_t k = 0; k < 2; ++k) {
                            OutcomeRecord record = leaf.record;
                            record.emplace_back(s.key, std::string(bv.labels[k]));
                            next.push_back(
                                {std::move(record), project_out(leaf.state, s.target, bv.kets[k])});
                        }
                    } else if constexpr (std::is_same_v<T, ConditionalStep>) {
                        const auto& outcome = outcome_of(leaf.record, s.key);
                        const auto it = s.by_outcome.find(outcome);
                        if (it == s.by_outcome.end()) {
                            throw std::invalid_argument("no conditional operation for outcome '" +
                                                        outcome + "'");
                        }
                        next.push_back({leaf.record, apply_unitary(leaf.state, s.target, it->second)});
                    } else if constexpr (std::is_same_v<T, EmitStep>) {
                        next.push_back({leaf.record, trion_emission_map(leaf.state, s.spin, s.photon)});
                    }
                },
                step);
        }
        frontier = std::move(next);
    }
    return frontier;
}

struct PureOps {
    PureState dephase(const PureState&, const DephaseStep&) const {
        throw std::invalid_argument("dephasing requires the density-matrix runner");
    }
};

struct DensityOps {
    DensityState dephase(const DensityState& rho, const DephaseStep& s) const {
        return dephase_spin(rho, s.spin, s.t_over_t2);
    }
};

} // namespace

std::vector<PureLeaf> run_pure(const Circuit& circuit) {
    return run<PureState, PureLeaf>(circuit, circuit.input, PureOps{});
}

std::vector<DensityLeaf> run_density(const Circuit& circuit) {
    return run<DensityState, DensityLeaf>(circuit, DensityState::from_pure(circuit.input),
                                          DensityOps{});
}

} // namespace spinphoton
