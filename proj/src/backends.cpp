#include "chainwalk/backends.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "chainwalk/errors.hpp"
#include "chainwalk/io.hpp"

namespace chainwalk {

namespace {

constexpr double kPi = std::numbers::pi;

struct Blocks {
    cdouble v00{1.0}, v01{}, v10{}, v11{1.0};
    cdouble u00{1.0}, u01{}, u10{}, u11{1.0};
};

Blocks gate_blocks(const CircuitGate &g) {
    Blocks b;
    if (g.kind == GateKind::ParamM) {
        const ComplexMatrix u = param_inner_block(g.params);
        b.u00 = u(0, 0);
        b.u01 = u(0, 1);
        b.u10 = u(1, 0);
        b.u11 = u(1, 1);
    } else {
        matchgate_matrix(g.pair);  // unitarity + determinant checks
        b.v00 = g.pair.v(0, 0);
        b.v01 = g.pair.v(0, 1);
        b.v10 = g.pair.v(1, 0);
        b.v11 = g.pair.v(1, 1);
        b.u00 = g.pair.u(0, 0);
        b.u01 = g.pair.u(0, 1);
        b.u10 = g.pair.u(1, 0);
        b.u11 = g.pair.u(1, 1);
    }
    return b;
}

// Applies one matchgate to qubits (j, j+1) of a 2^d statevector, in place.
// Qubit 0 is the most significant bit, so the pair occupies two adjacent bit
// positions and the four pair components of each quadruple sit at fixed
// strides. u00 weights the excitation at the lower qubit index j.
void apply_pair_statevector(ComplexVector &amp, std::size_t d, std::size_t j, const Blocks &g,
                            ExecMode mode) {
    const std::size_t w_hi = std::size_t{1} << (d - 1 - j);  // excitation at qubit j
    const std::size_t w_lo = w_hi >> 1;                      // excitation at qubit j+1
    const std::size_t mask_low = w_lo - 1;
    const std::int64_t quads = static_cast<std::int64_t>(amp.size() / 4);
    const bool parallel =
        mode == ExecMode::Parallel || (mode == ExecMode::Auto && quads >= (1 << 12));

#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < quads; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        const std::size_t i00 = ((u & ~mask_low) << 2) | (u & mask_low);
        const std::size_t i01 = i00 | w_lo;
        const std::size_t i10 = i00 | w_hi;
        const std::size_t i11 = i00 | w_hi | w_lo;

        const cdouble a00 = amp[i00];
        const cdouble a01 = amp[i01];
        const cdouble a10 = amp[i10];
        const cdouble a11 = amp[i11];
        amp[i00] = g.v00 * a00 + g.v01 * a11;
        amp[i11] = g.v10 * a00 + g.v11 * a11;
        amp[i10] = g.u00 * a10 + g.u01 * a01;
        amp[i01] = g.u10 * a10 + g.u11 * a01;
    }
}

// Disjoint-pair sweep for the subspace walk: applies u to (a[first], a[first+1]),
// (a[first+2], a[first+3]), ... up to last_pair_start.
void apply_pair_sweep(ComplexVector &a, std::size_t first, std::size_t last_pair_start,
                      cdouble u00, cdouble u01, cdouble u10, cdouble u11, ExecMode mode) {
    if (last_pair_start < first) return;
    const std::int64_t pairs = static_cast<std::int64_t>((last_pair_start - first) / 2) + 1;
    const bool parallel =
        mode == ExecMode::Parallel || (mode == ExecMode::Auto && pairs >= (1 << 14));

#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const std::size_t j = first + 2 * static_cast<std::size_t>(k);
        const cdouble x0 = a[j];
        const cdouble x1 = a[j + 1];
        a[j] = u00 * x0 + u01 * x1;
        a[j + 1] = u10 * x0 + u11 * x1;
    }
}

std::size_t ceil_log2(std::size_t d) {
    return d <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(d - 1));
}

}  // namespace

QubitState run_statevector(const MatchgateCircuit &circuit, const QubitState &start,
                           ExecMode mode) {
    validate_circuit(circuit);
    if (circuit.width > kStatevectorMaxQubits) {
        throw ScaleError("statevector backend refuses d = " + std::to_string(circuit.width) +
                         " (> 14 qubits); use the subspace backend");
    }
    if (start.d != circuit.width) {
        throw DimensionError("statevector start width " + std::to_string(start.d) +
                             " != circuit width " + std::to_string(circuit.width));
    }
    if (start.amplitudes.size() != (std::size_t{1} << start.d)) {
        throw DimensionError("statevector start does not hold 2^d amplitudes");
    }

    QubitState state = start;
    for (const auto &g : circuit.gates) {
        apply_pair_statevector(state.amplitudes, circuit.width, g.q, gate_blocks(g), mode);
    }
    return state;
}

ChainState run_subspace(const MatchgateCircuit &circuit, const ChainState &start) {
    validate_circuit(circuit);
    if (start.size() != circuit.width) {
        throw DimensionError("subspace start length != circuit width");
    }

    ChainState state = start;
    cdouble global_phase{1.0, 0.0};
    for (std::size_t idx = 0; idx < circuit.gates.size(); ++idx) {
        const CircuitGate &g = circuit.gates[idx];
        Blocks b = gate_blocks(g);
        if (std::abs(b.v01) > 1e-8 || std::abs(b.v10) > 1e-8) {
            throw SectorError("gate " + std::to_string(idx) +
                                  " is a parity matchgate (v not diagonal); it does not act "
                                  "within the single-excitation sector",
                              idx);
        }
        // v00 scales every node outside the pair; fold it into one scalar and
        // compensate on the pair so the final read-out applies it once.
        global_phase *= b.v00;
        const cdouble inv = 1.0 / b.v00;
        const cdouble a0 = state.amplitudes[g.q];
        const cdouble a1 = state.amplitudes[g.q + 1];
        state.amplitudes[g.q] = inv * (b.u00 * a0 + b.u01 * a1);
        state.amplitudes[g.q + 1] = inv * (b.u10 * a0 + b.u11 * a1);
    }
    if (global_phase != cdouble{1.0, 0.0}) {
        for (auto &x : state.amplitudes) x *= global_phase;
    }
    return state;
}

ChainState run_subspace_walk(const ChainState &start, const Coin &coin, std::size_t steps,
                             ExecMode mode) {
    const std::size_t d = start.size();
    if (d < 2 || d % 2 != 0) {
        throw DimensionError("subspace walk needs an even chain length, got " + std::to_string(d));
    }
    const ComplexMatrix u_coin = param_inner_block(coin_to_params(coin).params);
    const ComplexMatrix u_swap = param_inner_block({kPi, kPi, 0.0});

    ChainState state = start;
    for (std::size_t t = 0; t < steps; ++t) {
        apply_pair_sweep(state.amplitudes, 0, d - 2, u_coin(0, 0), u_coin(0, 1), u_coin(1, 0),
                         u_coin(1, 1), mode);
        if (d > 2) {
            apply_pair_sweep(state.amplitudes, 1, d - 3, u_swap(0, 0), u_swap(0, 1), u_swap(1, 0),
                             u_swap(1, 1), mode);
        }
    }
    return state;
}

ContractedModel build_contracted(const WalkConfig &config) {
    if (config.d < 2) throw DimensionError("contracted model needs d >= 2");
    const std::size_t l = ceil_log2(config.d);
    const std::size_t dim = std::size_t{1} << l;

    ComplexMatrix step = staggered_unitary(config);
    ContractedModel model;
    model.l = l;
    model.live = config.d;
    model.unitary = ComplexMatrix::identity(dim);
    for (std::size_t r = 0; r < config.d; ++r) {
        for (std::size_t c = 0; c < config.d; ++c) {
            model.unitary(r, c) = step(r, c);
        }
    }
    return model;
}

ComplexVector run_contracted(const ContractedModel &model, const ComplexVector &start,
                             std::size_t steps) {
    const std::size_t dim = std::size_t{1} << model.l;
    if (start.size() != dim) throw DimensionError("contracted start must hold 2^l amplitudes");
    ComplexVector state = start;
    for (std::size_t t = 0; t < steps; ++t) {
        state = mat_vec(model.unitary, state);
    }
    return state;
}

ShotHistogram sample(const std::vector<double> &probabilities, std::uint64_t shots,
                     std::uint64_t seed, LabelStyle style) {
    std::vector<double> cumulative(probabilities.size());
    double total = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        double p = probabilities[i];
        if (p < -1e-12) {
            throw DistributionError("probability " + std::to_string(i) + " is negative: " +
                                    fmt17(p));
        }
        if (p < 0.0) p = 0.0;
        total += p;
        cumulative[i] = total;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw DistributionError("probabilities sum to " + fmt17(total) + ", expected 1 +- 1e-9");
    }

    auto label_of = [&](std::size_t idx) -> std::string {
        if (style.kind == LabelStyle::Kind::NodeIndex) return std::to_string(idx);
        std::string bits(style.width, '0');
        for (std::size_t b = 0; b < style.width; ++b) {
            if (idx & (std::size_t{1} << (style.width - 1 - b))) bits[b] = '1';
        }
        return bits;
    };

    ShotHistogram h;
    h.shots = shots;
    h.seed = seed;
    std::mt19937_64 rng(seed);
    for (std::uint64_t s = 0; s < shots; ++s) {
        // 53-bit draw in [0, 1); avoids library distributions so results are
        // identical across standard library implementations.
        const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double target = x * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
        std::size_t idx = static_cast<std::size_t>(it - cumulative.begin());
        if (idx >= probabilities.size()) idx = probabilities.size() - 1;
        ++h.counts[label_of(idx)];
    }
    return h;
}

std::string histogram_to_json(const ShotHistogram &h) {
    std::string out = "{\"shots\": " + std::to_string(h.shots) +
                      ", \"seed\": " + std::to_string(h.seed) + ", \"counts\": {";
    bool first = true;
    for (const auto &[label, count] : h.counts) {
        if (!first) out += ", ";
        first = false;
        out += "\"" + label + "\": " + std::to_string(count);
    }
    out += "}}";
    return out;
}

WalkBackend backend_from_name(const std::string &name) {
    if (name == "scalar") return WalkBackend::Scalar;
    if (name == "subspace") return WalkBackend::Subspace;
    if (name == "statevector") return WalkBackend::Statevector;
    if (name == "contracted") return WalkBackend::Contracted;
    throw ConfigError("unknown backend '" + name +
                      "' (scalar, subspace, statevector, contracted)");
}

std::string backend_name(WalkBackend b) {
    switch (b) {
        case WalkBackend::Scalar: return "scalar";
        case WalkBackend::Subspace: return "subspace";
        case WalkBackend::Statevector: return "statevector";
        case WalkBackend::Contracted: return "contracted";
    }
    return "?";
}

namespace {

std::vector<double> statevector_node_probs(const QubitState &s) {
    std::vector<double> p(s.d);
    for (std::size_t k = 0; k < s.d; ++k) {
        p[k] = std::norm(s.amplitudes[std::size_t{1} << (s.d - 1 - k)]);
    }
    return p;
}

std::vector<double> live_probs(const ComplexVector &amp, std::size_t live) {
    std::vector<double> p(live);
    for (std::size_t k = 0; k < live; ++k) p[k] = std::norm(amp[k]);
    return p;
}

constexpr std::size_t kDenseContractedMax = 1u << 11;  // 2^l above this streams instead

}  // namespace

BackendWalkResult backend_walk(WalkBackend backend, const WalkConfig &config, std::size_t steps,
                               ExecMode mode) {
    if (config.boundary != Boundary::Reflecting) {
        throw ConfigError("backend_walk runs the staggered (reflecting) walk only");
    }
    ChainState start = config.start.size() == 0 ? ChainState::basis(config.d, config.d / 2)
                                                : config.start;
    if (start.size() != config.d) throw DimensionError("start state length differs from d");

    BackendWalkResult result;
    result.probabilities.reserve(steps + 1);

    switch (backend) {
        case WalkBackend::Scalar: {
            WalkConfig c = config;
            c.start = start;
            auto run = evolve(c, steps, /*record=*/true, mode);
            result.probabilities = std::move(run.probabilities);
            return result;
        }
        case WalkBackend::Subspace: {
            ChainState state = start;
            result.probabilities.push_back(node_probabilities(state));
            for (std::size_t t = 0; t < steps; ++t) {
                state = run_subspace_walk(state, config.coin, 1, mode);
                result.probabilities.push_back(node_probabilities(state));
            }
            return result;
        }
        case WalkBackend::Statevector: {
            const MatchgateCircuit one_step =
                build_staggered_walk_circuit(config.d, config.coin, 1);
            QubitState state = embed(start);
            result.probabilities.push_back(statevector_node_probs(state));
            for (std::size_t t = 0; t < steps; ++t) {
                state = run_statevector(one_step, state, mode);
                result.max_sector_leak = std::max(result.max_sector_leak, sector_leakage(state));
                result.probabilities.push_back(statevector_node_probs(state));
            }
            return result;
        }
        case WalkBackend::Contracted: {
            const std::size_t l = ceil_log2(config.d);
            const std::size_t dim = std::size_t{1} << l;
            WalkConfig c = config;
            c.swap_phase = cdouble{0.0, 1.0};  // circuit convention
            if (dim <= kDenseContractedMax) {
                const ContractedModel model = build_contracted(c);
                ComplexVector state(dim);
                std::copy(start.amplitudes.begin(), start.amplitudes.end(), state.begin());
                result.probabilities.push_back(live_probs(state, config.d));
                for (std::size_t t = 0; t < steps; ++t) {
                    state = run_contracted(model, state, 1);
                    result.probabilities.push_back(live_probs(state, config.d));
                }
            } else {
                // Too wide for the dense register: step the live prefix and
                // keep the pad amplitudes (identically zero) implicit.
                ComplexVector state(dim);
                std::copy(start.amplitudes.begin(), start.amplitudes.end(), state.begin());
                result.probabilities.push_back(live_probs(state, config.d));
                ChainState live;
                live.amplitudes.assign(state.begin(), state.begin() + config.d);
                for (std::size_t t = 0; t < steps; ++t) {
                    live = run_subspace_walk(live, config.coin, 1, mode);
                    std::copy(live.amplitudes.begin(), live.amplitudes.end(), state.begin());
                    result.probabilities.push_back(live_probs(state, config.d));
                }
            }
            return result;
        }
    }
    throw Error("unreachable backend");
}

bool CrossValidateReport::all_pass() const {
    for (const auto &leg : legs) {
        if (!leg.skipped && !leg.pass) return false;
    }
    return true;
}

std::string CrossValidateReport::to_json() const {
    std::string out = "{\"d\": " + std::to_string(d) + ", \"steps\": " + std::to_string(steps) +
                      ", \"coin\": \"" + coin + "\", \"startNode\": " + std::to_string(start_node) +
                      ", \"legs\": [";
    bool first = true;
    for (const auto &leg : legs) {
        if (!first) out += ", ";
        first = false;
        out += "{\"pair\": \"" + leg.pair + "\"";
        if (leg.skipped) {
            out += ", \"skipped\": true";
        } else if (leg.metric == "amplitude") {
            out += ", \"metric\": \"amplitude\", \"maxAmpDeviation\": " + fmt17(leg.max_deviation) +
                   ", \"pass\": " + (leg.pass ? "true" : "false");
        } else if (leg.metric == "sectorLeakage") {
            out += ", \"metric\": \"sectorLeakage\", \"maxLeakage\": " + fmt17(leg.max_deviation) +
                   ", \"pass\": " + (leg.pass ? "true" : "false");
        } else {
            out += ", \"maxProbDeviation\": " + fmt17(leg.max_deviation) + ", \"pass\": " +
                   (leg.pass ? "true" : "false");
        }
        if (!leg.note.empty()) out += ", \"note\": \"" + leg.note + "\"";
        out += "}";
    }
    out += "], \"tolerance\": " + fmt17(tolerance) + "}";
    return out;
}

CrossValidateReport cross_validate(std::size_t d, const Coin &coin, std::size_t steps,
                                   double tolerance, const CrossValidateOptions &opts) {
    if (d < 2 || d % 2 != 0) throw DimensionError("cross_validate needs even d >= 2");
    const std::size_t start_node = opts.start_node == SIZE_MAX ? d / 2 : opts.start_node;
    if (start_node >= d) throw IndexError("start node out of range");

    CrossValidateReport report;
    report.d = d;
    report.steps = steps;
    report.tolerance = tolerance;
    report.coin = coin.name;
    report.start_node = start_node;

    const bool with_statevector = d <= 12;
    const std::size_t l = ceil_log2(d);
    const bool dense_contracted = (std::size_t{1} << l) <= kDenseContractedMax;

    // leg states, all from the common start
    ChainState scalar_state = ChainState::basis(d, start_node);
    ChainState subspace_state = scalar_state;
    QubitState sv_state;
    MatchgateCircuit one_step;
    if (with_statevector || opts.inject_fault) {
        if (d > (std::size_t{1} << 14)) {
            throw ConfigError("fault injection needs an explicit circuit (d <= 2^14)");
        }
        one_step = build_staggered_walk_circuit(d, coin, 1);
        if (opts.inject_fault && !one_step.gates.empty()) {
            one_step.gates[one_step.gates.size() / 2].params.theta += 1e-3;
        }
    }
    if (with_statevector) sv_state = embed(scalar_state);

    ContractedModel model;
    ComplexVector contracted_state;
    ChainState contracted_live = scalar_state;
    if (dense_contracted) {
        WalkConfig cc;
        cc.d = d;
        cc.coin = coin;
        cc.swap_phase = cdouble{0.0, 1.0};
        model = build_contracted(cc);
        contracted_state.assign(std::size_t{1} << l, cdouble{});
        std::copy(scalar_state.amplitudes.begin(), scalar_state.amplitudes.end(),
                  contracted_state.begin());
    }

    double dev_scalar_subspace = 0.0;
    double dev_scalar_contracted = 0.0;
    double dev_subspace_contracted = 0.0;
    double dev_scalar_sv = 0.0;
    double dev_subspace_sv = 0.0;
    double dev_contracted_sv = 0.0;
    double dev_amplitude = 0.0;
    double max_leak = 0.0;

    auto accumulate = [&](std::size_t /*t*/) {
        const auto p_scalar = node_probabilities(scalar_state);
        const auto p_subspace = node_probabilities(subspace_state);
        const auto p_contracted =
            dense_contracted ? live_probs(contracted_state, d) : node_probabilities(contracted_live);
        for (std::size_t k = 0; k < d; ++k) {
            dev_scalar_subspace = std::max(dev_scalar_subspace, std::abs(p_scalar[k] - p_subspace[k]));
            dev_scalar_contracted =
                std::max(dev_scalar_contracted, std::abs(p_scalar[k] - p_contracted[k]));
            dev_subspace_contracted =
                std::max(dev_subspace_contracted, std::abs(p_subspace[k] - p_contracted[k]));
        }
        const PhaseMatch amp =
            equal_up_to_global_phase(scalar_state.amplitudes, subspace_state.amplitudes, tolerance);
        dev_amplitude = std::max(dev_amplitude, amp.deviation);
        if (with_statevector) {
            const auto p_sv = statevector_node_probs(sv_state);
            for (std::size_t k = 0; k < d; ++k) {
                dev_scalar_sv = std::max(dev_scalar_sv, std::abs(p_scalar[k] - p_sv[k]));
                dev_subspace_sv = std::max(dev_subspace_sv, std::abs(p_subspace[k] - p_sv[k]));
                dev_contracted_sv = std::max(dev_contracted_sv, std::abs(p_contracted[k] - p_sv[k]));
            }
            max_leak = std::max(max_leak, sector_leakage(sv_state));
        }
    };

    accumulate(0);
    for (std::size_t t = 1; t <= steps; ++t) {
        scalar_state = staggered_step(scalar_state, coin, cdouble{0.0, 1.0}, opts.mode);
        if (opts.inject_fault) {
            subspace_state = run_subspace(one_step, subspace_state);
        } else {
            subspace_state = run_subspace_walk(subspace_state, coin, 1, opts.mode);
        }
        if (dense_contracted) {
            contracted_state = run_contracted(model, contracted_state, 1);
        } else {
            contracted_live = run_subspace_walk(contracted_live, coin, 1, opts.mode);
        }
        if (with_statevector) sv_state = run_statevector(one_step, sv_state, opts.mode);
        accumulate(t);
    }

    auto prob_leg = [&](const std::string &pair, double dev) {
        report.legs.push_back({pair, "probability", dev, dev <= tolerance, false, ""});
    };
    prob_leg("scalar/subspace", dev_scalar_subspace);
    prob_leg("scalar/contracted", dev_scalar_contracted);
    prob_leg("subspace/contracted", dev_subspace_contracted);
    if (with_statevector) {
        prob_leg("scalar/statevector", dev_scalar_sv);
        prob_leg("subspace/statevector", dev_subspace_sv);
        prob_leg("contracted/statevector", dev_contracted_sv);
        report.legs.push_back(
            {"statevector", "sectorLeakage", max_leak, max_leak <= tolerance, false, ""});
    } else {
        report.legs.push_back({"scalar/statevector", "probability", 0.0, false, true,
                               "statevector leg skipped: d > 12"});
    }
    report.legs.push_back(
        {"scalar/subspace", "amplitude", dev_amplitude, dev_amplitude <= tolerance, false,
         "compared up to one global phase per step"});
    if (!dense_contracted) {
        report.legs.push_back({"contracted", "probability", 0.0, true, true,
                               "dense 2^l register skipped: 2^l > 2048, live prefix streamed"});
    }
    return report;
}

std::vector<ScalingPoint> measure_walk_scaling(const std::vector<std::size_t> &sizes,
                                               ExecMode mode, double min_seconds) {
    using clock = std::chrono::steady_clock;
    std::vector<ScalingPoint> points;
    points.reserve(sizes.size());
    const Coin coin = hadamard_coin();

    for (std::size_t d : sizes) {
        ChainState state = ChainState::basis(d, d / 2);
        state = run_subspace_walk(state, coin, 1, mode);  // warm up caches and the pool

        const auto t0 = clock::now();
        state = run_subspace_walk(state, coin, 1, mode);
        const double per_step =
            std::max(1e-9, std::chrono::duration<double>(clock::now() - t0).count());
        const std::size_t steps = std::min<std::size_t>(
            100000, std::max<std::size_t>(3, static_cast<std::size_t>(min_seconds / per_step)));

        const auto t1 = clock::now();
        state = run_subspace_walk(state, coin, steps, mode);
        const double seconds = std::chrono::duration<double>(clock::now() - t1).count();
        points.push_back({d, steps, seconds});
    }
    return points;
}

ScalingFit fit_linear_scaling(const std::vector<ScalingPoint> &points) {
    ScalingFit fit;
    double num = 0.0, den = 0.0;
    for (const auto &p : points) {
        const double x = static_cast<double>(p.d);
        num += x * p.seconds_per_step();
        den += x * x;
    }
    if (den == 0.0) return fit;
    fit.slope = num / den;
    fit.max_ratio = 0.0;
    fit.min_ratio = points.empty() ? 0.0 : 1e300;
    for (const auto &p : points) {
        const double predicted = fit.slope * static_cast<double>(p.d);
        const double ratio = predicted > 0.0 ? p.seconds_per_step() / predicted : 0.0;
        fit.max_ratio = std::max(fit.max_ratio, ratio);
        fit.min_ratio = std::min(fit.min_ratio, ratio);
    }
    return fit;
}

}  // namespace chainwalk
