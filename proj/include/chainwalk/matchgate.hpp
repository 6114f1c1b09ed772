#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chainwalk/numerics.hpp"
#include "chainwalk/scalar_walk.hpp"

namespace chainwalk {

/// The two 2x2 blocks of a matchgate. Both must be unitary and share one
/// determinant; v acts on the even-parity pair states {|00>,|11>}, u on the
/// odd-parity pair {|01>,|10>}.
struct MatchgatePair {
    ComplexMatrix v;
    ComplexMatrix u;
};

/// Three-angle form of the u block (v = identity, det u = 1 by construction).
struct MatchgateParams {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
};

enum class GateKind { ParamM, GeneralM };

struct CircuitGate {
    GateKind kind = GateKind::ParamM;
    MatchgateParams params;  // ParamM
    MatchgatePair pair;      // GeneralM
    std::size_t q = 0;       // acts on qubits (q, q+1)
};

CircuitGate param_gate(MatchgateParams p, std::size_t q);
CircuitGate general_gate(MatchgatePair pair, std::size_t q);

struct MatchgateCircuit {
    std::size_t width = 0;
    std::vector<CircuitGate> gates;
};

/// Throws unless every gate fits the register (q + 1 < width).
void validate_circuit(const MatchgateCircuit &c);

/// 4x4 matchgate in the pair basis (|00>,|01>,|10>,|11>). Throws
/// DeterminantError when det v != det u, NotUnitaryError for bad blocks.
ComplexMatrix matchgate_matrix(const MatchgatePair &g);

/// The three-angle 2x2 block and its 4x4 matchgate.
ComplexMatrix param_inner_block(const MatchgateParams &p);
ComplexMatrix param_matrix(const MatchgateParams &p);

enum class GateClass { NumberConservingMatchgate, ParityMatchgate, NotMatchgate };

/// Pattern test on a 4x4 unitary: matchgate block layout with matching block
/// determinants; number conserving iff v is diagonal.
GateClass classify_gate(const ComplexMatrix &m, double tol = 1e-8);

/// One walk step per `steps`: the compiled coin gate on pairs (0,1),(2,3),...
/// then the det-corrected swap M(pi,pi,0) on pairs (1,2),(3,4),...
MatchgateCircuit build_staggered_walk_circuit(std::size_t d, const Coin &coin, std::size_t steps);

struct CoinCompilation {
    MatchgateParams params;
    cdouble alpha{1.0, 0.0};  // unit phase with det(alpha * coin * X) = 1
};

/// Compile a coin into gate angles: form C' = C * X, normalize its
/// determinant to 1 with the phase alpha (arg in (-pi/2, pi/2], ties to +),
/// then solve the three-angle form for alpha * C'.
CoinCompilation coin_to_params(const Coin &coin);

/// Angle extraction for a det-1 2x2 unitary; canonical choice documented in
/// the implementation. param_inner_block(solve_su2_angles(u)) == u.
MatchgateParams solve_su2_angles(const ComplexMatrix &u);

std::string circuit_to_json(const MatchgateCircuit &c);
MatchgateCircuit circuit_from_json(const std::string &text);

}  // namespace chainwalk
