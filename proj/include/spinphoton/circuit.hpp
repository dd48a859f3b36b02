#pragma once

// Protocols are described as a linear list of steps acting on an input
// register. Measurements fork the run; each finished path is a Leaf carrying
// its outcome record and its unnormalized conditional state, so the squared
// norm (or trace) of a leaf is the joint probability of that record.

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "spinphoton/density.hpp"
#include "spinphoton/qstate.hpp"

namespace spinphoton {

struct UnitaryStep {
    std::vector<QubitLabel> targets;
    Eigen::MatrixXcd matrix;
    std::string name;
};

struct ReflectStep {
    QubitLabel photon;
    QubitLabel spin;
    Complex coeff_coupled;
    Complex coeff_uncoupled;
};

struct DephaseStep {
    QubitLabel spin;
    double t_over_t2;
};

/// Projective measurement that removes the qubit; the outcome label is
/// stored in the leaf record under `key`.
struct MeasureStep {
    QubitLabel target;
    MeasurementBasis basis;
    std::string key;
};

/// Single-qubit unitary chosen by an earlier outcome.
struct ConditionalStep {
    std::string key;
    QubitLabel target;
    std::map<std::string, Eigen::Matrix2cd, std::less<>> by_outcome;
};

struct EmitStep {
    QubitLabel spin;
    QubitLabel photon;
};

using Step = std::variant<UnitaryStep, ReflectStep, DephaseStep, MeasureStep, ConditionalStep, EmitStep>;

struct Circuit {
    PureState input;
    std::vector<Step> steps;
};

using OutcomeRecord = std::vector<std::pair<std::string, std::string>>;

/// Outcome stored under `key`; throws std::out_of_range when absent.
const std::string& outcome_of(const OutcomeRecord& record, std::string_view key);

struct PureLeaf {
    OutcomeRecord record;
    PureState state;
};

struct DensityLeaf {
    OutcomeRecord record;
    DensityState state;
};

bool has_dephasing(const Circuit& circuit);

/// Throws std::invalid_argument on a DephaseStep.
std::vector<PureLeaf> run_pure(const Circuit& circuit);

std::vector<DensityLeaf> run_density(const Circuit& circuit);

} // namespace spinphoton
