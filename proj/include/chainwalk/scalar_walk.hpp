#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "chainwalk/numerics.hpp"

namespace chainwalk {

/// Kernel selection for the data-parallel inner loops. Auto picks OpenMP once
/// the chain is large enough to amortize the fork/join; Serial is the
/// reference path kept for testing and benchmarking.
enum class ExecMode { Auto, Serial, Parallel };

enum class Boundary { Reflecting, Periodic };

/// 2x2 unitary coin. Use the factory functions: they validate unitarity.
struct Coin {
    ComplexMatrix matrix;
    std::string name;
};

Coin make_coin(ComplexMatrix m, std::string name = "custom");
Coin hadamard_coin();
Coin balanced_coin();
Coin identity_coin();
/// Preset lookup for "hadamard", "balanced", "identity". Throws ConfigError otherwise.
Coin coin_from_name(const std::string &name);

/// Amplitudes over the d nodes of the scalar chain, node k at index k.
struct ChainState {
    ComplexVector amplitudes;

    std::size_t size() const { return amplitudes.size(); }
    static ChainState basis(std::size_t d, std::size_t node);
};

/// Coin (x) chain amplitudes for the coined walk: index c*n + k.
struct CoinedState {
    std::size_t n = 0;
    ComplexVector amplitudes;

    static CoinedState basis(std::size_t n, int c, std::size_t k);
};

struct WalkConfig {
    std::size_t d = 2;
    Coin coin = hadamard_coin();
    Boundary boundary = Boundary::Reflecting;
    cdouble swap_phase{1.0, 0.0};
    ChainState start;  // empty means basis state at node d/2
};

/// One coined step: coin toss on the coin register, then the conditional
/// shift (coin 0 moves right, coin 1 moves left). A reflecting boundary flips
/// the coin at the chain ends while keeping the node; this is the behavior
/// implied by composing the two staggered swap partitions.
CoinedState coined_step(const CoinedState &s, const Coin &coin, Boundary boundary);

/// |c>|k> <-> |2k+c| index mapping between the coined and flat pictures.
std::size_t coined_to_staggered(int c, std::size_t k, std::size_t n);
std::pair<int, std::size_t> staggered_to_coined(std::size_t node, std::size_t n);
ChainState coined_to_chain(const CoinedState &s);
CoinedState chain_to_coined(const ChainState &s);

/// One staggered step: C' = coin * X on pairs (0,1),(2,3),... then
/// swap_phase * X on pairs (1,2),(3,4),...; nodes 0 and d-1 skip the second
/// stage (reflecting ends). Requires even d.
ChainState staggered_step(const ChainState &s, const Coin &coin, cdouble swap_phase,
                          ExecMode mode = ExecMode::Auto);

/// Dense d x d matrix of one staggered step. Desk scale only (d <= 2^14).
ComplexMatrix staggered_unitary(const WalkConfig &config);

struct EvolveResult {
    ChainState final_state;
    /// probabilities[t][node], t = 0 is the start distribution. Empty unless
    /// recording was requested.
    std::vector<std::vector<double>> probabilities;
};

EvolveResult evolve(const WalkConfig &config, std::size_t steps, bool record = true,
                    ExecMode mode = ExecMode::Auto);

std::vector<double> node_probabilities(const ChainState &s);

namespace serial_ref {
/// Two-stage textbook implementation of the staggered step, kept as the
/// serial reference the fused kernel is tested against.
ChainState staggered_step_reference(const ChainState &s, const Coin &coin, cdouble swap_phase);
}  // namespace serial_ref

}  // namespace chainwalk
