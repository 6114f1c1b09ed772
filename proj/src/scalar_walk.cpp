#include "chainwalk/scalar_walk.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include "chainwalk/errors.hpp"

namespace chainwalk {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Below this many pairs the fork/join overhead dominates; stay serial.
constexpr std::int64_t kParallelThreshold = 1 << 14;

void check_even(std::size_t d, const char *what) {
    if (d < 2 || d % 2 != 0) {
        throw DimensionError(std::string(what) + ": chain length must be even and >= 2, got " +
                             std::to_string(d));
    }
}

struct Coin2x2 {
    cdouble m00, m01, m10, m11;
};

Coin2x2 modified_coin(const Coin &coin) {
    // C' = C * X: column swap of the coin matrix.
    const ComplexMatrix &c = coin.matrix;
    return {c(0, 1), c(0, 0), c(1, 1), c(1, 0)};
}

// Fused staggered step: stage-1 pair rotation and stage-2 swap in one sweep.
// Pair k produces (b0, b1) = C' * (a[2k], a[2k+1]); b0 then lands on node
// 2k-1 with the swap phase (or stays at node 0), b1 on node 2k+2 (or stays
// at node d-1). Every output index is written exactly once, so the loop is
// parallel over pairs and bit-reproducible for any thread count.
void staggered_step_into(const ComplexVector &in, ComplexVector &out, const Coin2x2 &cp,
                         cdouble phase, ExecMode mode) {
    const std::int64_t pairs = static_cast<std::int64_t>(in.size()) / 2;
    const std::int64_t d = static_cast<std::int64_t>(in.size());
    const bool parallel =
        mode == ExecMode::Parallel || (mode == ExecMode::Auto && pairs >= kParallelThreshold);

#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t k = 0; k < pairs; ++k) {
        const cdouble a0 = in[2 * k];
        const cdouble a1 = in[2 * k + 1];
        const cdouble b0 = cp.m00 * a0 + cp.m01 * a1;
        const cdouble b1 = cp.m10 * a0 + cp.m11 * a1;
        if (k > 0) {
            out[2 * k - 1] = phase * b0;
        } else {
            out[0] = b0;
        }
        if (2 * k + 2 < d) {
            out[2 * k + 2] = phase * b1;
        } else {
            out[d - 1] = b1;
        }
    }
}

}  // namespace

Coin make_coin(ComplexMatrix m, std::string name) {
    if (m.rows != 2 || m.cols != 2) throw DimensionError("coin must be 2x2");
    if (!is_unitary(m, 1e-10)) throw NotUnitaryError("coin matrix is not unitary within 1e-10");
    return Coin{std::move(m), std::move(name)};
}

Coin hadamard_coin() {
    return Coin{ComplexMatrix(2, 2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2}), "hadamard"};
}

Coin balanced_coin() {
    const cdouble i_r2{0.0, kInvSqrt2};
    return Coin{ComplexMatrix(2, 2, {kInvSqrt2, i_r2, i_r2, kInvSqrt2}), "balanced"};
}

Coin identity_coin() { return Coin{ComplexMatrix::identity(2), "identity"}; }

Coin coin_from_name(const std::string &name) {
    if (name == "hadamard") return hadamard_coin();
    if (name == "balanced") return balanced_coin();
    if (name == "identity") return identity_coin();
    throw ConfigError("unknown coin preset '" + name + "' (hadamard, balanced, identity)");
}

ChainState ChainState::basis(std::size_t d, std::size_t node) {
    if (node >= d) throw IndexError("basis node out of range");
    ChainState s;
    s.amplitudes.assign(d, cdouble{});
    s.amplitudes[node] = 1.0;
    return s;
}

CoinedState CoinedState::basis(std::size_t n, int c, std::size_t k) {
    if (c != 0 && c != 1) throw IndexError("coin index must be 0 or 1");
    if (k >= n) throw IndexError("node index out of range");
    CoinedState s;
    s.n = n;
    s.amplitudes.assign(2 * n, cdouble{});
    s.amplitudes[static_cast<std::size_t>(c) * n + k] = 1.0;
    return s;
}

CoinedState coined_step(const CoinedState &s, const Coin &coin, Boundary boundary) {
    if (s.amplitudes.size() != 2 * s.n || s.n == 0) {
        throw DimensionError("coined state must hold 2n amplitudes");
    }
    const std::size_t n = s.n;
    const ComplexMatrix &c = coin.matrix;

    // coin toss first
    ComplexVector tossed(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        const cdouble a0 = s.amplitudes[k];
        const cdouble a1 = s.amplitudes[n + k];
        tossed[k] = c(0, 0) * a0 + c(0, 1) * a1;
        tossed[n + k] = c(1, 0) * a0 + c(1, 1) * a1;
    }

    CoinedState out;
    out.n = n;
    out.amplitudes.assign(2 * n, cdouble{});
    if (boundary == Boundary::Periodic) {
        for (std::size_t k = 0; k < n; ++k) {
            out.amplitudes[(k + 1) % n] += tossed[k];
            out.amplitudes[n + (k + n - 1) % n] += tossed[n + k];
        }
    } else {
        for (std::size_t k = 0; k < n; ++k) {
            if (k + 1 < n) {
                out.amplitudes[k + 1] += tossed[k];
            } else {
                out.amplitudes[n + k] += tossed[k];  // right mover reflects into a left mover
            }
            if (k > 0) {
                out.amplitudes[n + k - 1] += tossed[n + k];
            } else {
                out.amplitudes[0] += tossed[n + k];  // left mover reflects into a right mover
            }
        }
    }
    return out;
}

std::size_t coined_to_staggered(int c, std::size_t k, std::size_t n) {
    if (c != 0 && c != 1) throw IndexError("coin index must be 0 or 1");
    if (k >= n) throw IndexError("node index " + std::to_string(k) + " out of range for n=" +
                                 std::to_string(n));
    return 2 * k + static_cast<std::size_t>(c);
}

std::pair<int, std::size_t> staggered_to_coined(std::size_t node, std::size_t n) {
    if (node >= 2 * n) throw IndexError("flat node index out of range");
    return {static_cast<int>(node % 2), node / 2};
}

ChainState coined_to_chain(const CoinedState &s) {
    ChainState out;
    out.amplitudes.assign(2 * s.n, cdouble{});
    for (std::size_t k = 0; k < s.n; ++k) {
        out.amplitudes[2 * k] = s.amplitudes[k];
        out.amplitudes[2 * k + 1] = s.amplitudes[s.n + k];
    }
    return out;
}

CoinedState chain_to_coined(const ChainState &s) {
    check_even(s.size(), "chain_to_coined");
    CoinedState out;
    out.n = s.size() / 2;
    out.amplitudes.assign(s.size(), cdouble{});
    for (std::size_t k = 0; k < out.n; ++k) {
        out.amplitudes[k] = s.amplitudes[2 * k];
        out.amplitudes[out.n + k] = s.amplitudes[2 * k + 1];
    }
    return out;
}

ChainState staggered_step(const ChainState &s, const Coin &coin, cdouble swap_phase,
                          ExecMode mode) {
    check_even(s.size(), "staggered_step");
    if (std::abs(std::abs(swap_phase) - 1.0) > 1e-10) {
        throw ConfigError("swap phase must have unit modulus");
    }
    ChainState out;
    out.amplitudes.resize(s.size());
    staggered_step_into(s.amplitudes, out.amplitudes, modified_coin(coin), swap_phase, mode);
    return out;
}

ComplexMatrix staggered_unitary(const WalkConfig &config) {
    check_even(config.d, "staggered_unitary");
    if (config.d > (1u << 14)) {
        throw ScaleError("staggered_unitary: dense form capped at d = 2^14");
    }
    const std::size_t d = config.d;
    const Coin2x2 cp = modified_coin(config.coin);

    // stage 1: block-diagonal C' on pairs (2k, 2k+1)
    ComplexMatrix stage1 = ComplexMatrix::zero(d, d);
    for (std::size_t k = 0; k + 1 < d; k += 2) {
        stage1(k, k) = cp.m00;
        stage1(k, k + 1) = cp.m01;
        stage1(k + 1, k) = cp.m10;
        stage1(k + 1, k + 1) = cp.m11;
    }
    // stage 2: phased swaps on pairs (1,2),(3,4),...; ends untouched
    ComplexMatrix stage2 = ComplexMatrix::zero(d, d);
    stage2(0, 0) = 1.0;
    stage2(d - 1, d - 1) = 1.0;
    for (std::size_t k = 1; k + 1 < d; k += 2) {
        stage2(k, k + 1) = config.swap_phase;
        stage2(k + 1, k) = config.swap_phase;
    }
    return matmul(stage2, stage1);
}

EvolveResult evolve(const WalkConfig &config, std::size_t steps, bool record, ExecMode mode) {
    ChainState state = config.start.size() == 0 ? ChainState::basis(config.d, config.d / 2)
                                                : config.start;
    if (state.size() != config.d) throw DimensionError("start state length differs from d");

    EvolveResult result;
    if (record) result.probabilities.reserve(steps + 1);

    if (config.boundary == Boundary::Periodic) {
        CoinedState cs = chain_to_coined(state);
        if (record) result.probabilities.push_back(node_probabilities(coined_to_chain(cs)));
        for (std::size_t t = 0; t < steps; ++t) {
            cs = coined_step(cs, config.coin, Boundary::Periodic);
            if (record) result.probabilities.push_back(node_probabilities(coined_to_chain(cs)));
        }
        result.final_state = coined_to_chain(cs);
        return result;
    }

    check_even(config.d, "evolve");
    if (record) result.probabilities.push_back(node_probabilities(state));
    ComplexVector next(state.size());
    const Coin2x2 cp = modified_coin(config.coin);
    for (std::size_t t = 0; t < steps; ++t) {
        staggered_step_into(state.amplitudes, next, cp, config.swap_phase, mode);
        state.amplitudes.swap(next);
        if (record) result.probabilities.push_back(node_probabilities(state));
    }
    result.final_state = std::move(state);
    return result;
}

std::vector<double> node_probabilities(const ChainState &s) {
    std::vector<double> p(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) p[i] = std::norm(s.amplitudes[i]);
    return p;
}

namespace serial_ref {

ChainState staggered_step_reference(const ChainState &s, const Coin &coin, cdouble swap_phase) {
    check_even(s.size(), "staggered_step_reference");
    const std::size_t d = s.size();
    const ComplexMatrix cprime = matmul(coin.matrix, pauli_x());

    ComplexVector mid = s.amplitudes;
    for (std::size_t k = 0; k + 1 < d; k += 2) {
        const cdouble a0 = mid[k];
        const cdouble a1 = mid[k + 1];
        mid[k] = cprime(0, 0) * a0 + cprime(0, 1) * a1;
        mid[k + 1] = cprime(1, 0) * a0 + cprime(1, 1) * a1;
    }
    ComplexVector out = mid;
    for (std::size_t k = 1; k + 2 < d; k += 2) {
        out[k] = swap_phase * mid[k + 1];
        out[k + 1] = swap_phase * mid[k];
    }
    ChainState res;
    res.amplitudes = std::move(out);
    return res;
}

}  // namespace serial_ref

}  // namespace chainwalk
