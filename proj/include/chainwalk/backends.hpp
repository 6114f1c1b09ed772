#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chainwalk/matchgate.hpp"
#include "chainwalk/numerics.hpp"
#include "chainwalk/scalar_walk.hpp"
#include "chainwalk/spin_chain.hpp"

namespace chainwalk {

inline constexpr std::size_t kStatevectorMaxQubits = 14;

/// Full 2^d statevector execution: the ground-truth oracle. Applies each
/// matchgate to its adjacent pair in place. Gate semantics: for a gate on
/// (j, j+1) the u block mixes the two single-excitation components with u00
/// weighting the excitation at the lower qubit j; the v block mixes the
/// |00>/|11> components of the pair. This orientation is what makes the walk
/// circuit reproduce the scalar staggered step amplitude for amplitude, and
/// it is pinned by a d = 2 regression test.
QubitState run_statevector(const MatchgateCircuit &circuit, const QubitState &start,
                           ExecMode mode = ExecMode::Auto);

/// Single-excitation contraction: only d amplitudes are kept. A number
/// conserving gate on (j, j+1) applies its u block to (a_j, a_j+1) and
/// multiplies everything else by v00, which is tracked lazily as one
/// accumulated scalar. O(1) work per gate. Throws SectorError (with the gate
/// index) for gates whose v block is not diagonal.
ChainState run_subspace(const MatchgateCircuit &circuit, const ChainState &start);

/// Streamed walk execution in the subspace backend: applies the per-step
/// gate pattern of the staggered walk circuit without materializing the
/// gates, so memory stays O(d) for any number of steps.
ChainState run_subspace_walk(const ChainState &start, const Coin &coin, std::size_t steps,
                             ExecMode mode = ExecMode::Auto);

/// The walk step compressed into l = ceil(log2 d) qubits: the d x d step
/// unitary embedded in a 2^l register, identity on the padded indices.
struct ContractedModel {
    std::size_t l = 0;
    std::size_t live = 0;  // indices below this are chain nodes
    ComplexMatrix unitary;
};

ContractedModel build_contracted(const WalkConfig &config);
ComplexVector run_contracted(const ContractedModel &model, const ComplexVector &start,
                             std::size_t steps);

struct LabelStyle {
    enum class Kind { NodeIndex, Bitstring };
    Kind kind = Kind::NodeIndex;
    std::size_t width = 0;  // bit width for Bitstring labels
};

struct ShotHistogram {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
};

/// Multinomial sampling, deterministic for a given seed (fixed generator and
/// inverse-CDF draw, no library distributions involved).
ShotHistogram sample(const std::vector<double> &probabilities, std::uint64_t shots,
                     std::uint64_t seed, LabelStyle style = {});

std::string histogram_to_json(const ShotHistogram &h);

enum class WalkBackend { Scalar, Subspace, Statevector, Contracted };

WalkBackend backend_from_name(const std::string &name);
std::string backend_name(WalkBackend b);

struct BackendWalkResult {
    /// probabilities[t][node] over chain nodes, t = 0 is the start.
    std::vector<std::vector<double>> probabilities;
    double max_sector_leak = 0.0;  // statevector backend only
};

/// Runs `steps` staggered-walk steps on the chosen backend and records the
/// node distribution after every step. The circuit backends always carry the
/// det-corrected swap phase i; the scalar backend uses config.swap_phase.
BackendWalkResult backend_walk(WalkBackend backend, const WalkConfig &config, std::size_t steps,
                               ExecMode mode = ExecMode::Auto);

struct LegReport {
    std::string pair;
    std::string metric;  // "probability" or "amplitude"
    double max_deviation = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;
};

struct CrossValidateReport {
    std::size_t d = 0;
    std::size_t steps = 0;
    double tolerance = 0.0;
    std::string coin;
    std::size_t start_node = 0;
    std::vector<LegReport> legs;

    bool all_pass() const;
    std::string to_json() const;
};

struct CrossValidateOptions {
    std::size_t start_node = SIZE_MAX;  // SIZE_MAX means d/2
    bool inject_fault = false;          // perturb one circuit angle by 1e-3
    ExecMode mode = ExecMode::Auto;
};

/// Runs every applicable backend from a common start state and compares node
/// distributions pairwise step by step (and scalar-vs-subspace amplitudes up
/// to one global phase). The statevector leg is skipped above d = 12 and the
/// dense contracted register above 2^l = 1024; skips are reported, never
/// failures.
CrossValidateReport cross_validate(std::size_t d, const Coin &coin, std::size_t steps,
                                   double tolerance, const CrossValidateOptions &opts = {});

// --- benchmark support -----------------------------------------------------

struct ScalingPoint {
    std::size_t d = 0;
    std::size_t steps = 0;
    double seconds = 0.0;

    double seconds_per_step() const { return steps ? seconds / static_cast<double>(steps) : 0.0; }
};

/// Times run_subspace_walk across a grid of chain sizes. Step counts are
/// chosen so each sample runs at least `min_seconds`.
std::vector<ScalingPoint> measure_walk_scaling(const std::vector<std::size_t> &sizes,
                                               ExecMode mode, double min_seconds = 0.05);

struct ScalingFit {
    double slope = 0.0;      // least-squares fit of seconds_per_step = slope * d
    double max_ratio = 0.0;  // worst measured/fit ratio above 1
    double min_ratio = 0.0;  // worst measured/fit ratio below 1
};

ScalingFit fit_linear_scaling(const std::vector<ScalingPoint> &points);

}  // namespace chainwalk
