#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chainwalk/matchgate.hpp"
#include "chainwalk/numerics.hpp"

namespace chainwalk {

/// One primitive statement of the expanded m-gate body, with numeric angles
/// substituted. Slot A is the first operand of m, slot B the second.
struct PrimitiveGate {
    enum class Op { Cx, U };
    enum class Slot { A, B };

    Op op = Op::Cx;
    Slot control = Slot::A;  // Cx: control slot (target is the other one)
    Slot target = Slot::A;   // U: which slot the rotation acts on
    double theta = 0.0, phi = 0.0, lambda = 0.0;
};

/// The fixed 7-gate expansion of m(theta, phi, lambda): four cx and three U,
/// with the angle arithmetic evaluated. Composing the sequence reproduces the
/// 4x4 matchgate exactly (the global phase works out to 1); the grid test
/// records the measured phase.
std::vector<PrimitiveGate> decompose_m(const MatchgateParams &p);

struct QasmOptions {
    bool measure = false;
    std::string register_name = "q";
};

/// OpenQASM 2.0 text for a circuit of three-angle matchgates. Deterministic:
/// identical circuits yield byte-identical files. Angle literals are decimal
/// (up to 17 significant digits, exact round-trip); the symbolic parameter
/// arithmetic appears only inside the m gate definition. Throws
/// UnsupportedGateError for generalM gates (compile coins via coin_to_params
/// first).
std::string emit_qasm(const MatchgateCircuit &circuit, const QasmOptions &opts = {});

struct EmissionReport {
    double max_deviation = 0.0;
    cdouble phase{1.0, 0.0};
    bool pass = false;
};

/// Replays the emitted gate stream (cx and U matrices, in emitted order) into
/// a full 2^d unitary and compares it against the product of the 4x4
/// matchgates, up to one global phase. d <= 10.
EmissionReport verify_emission(const MatchgateCircuit &circuit, double tol = 1e-9);

/// Same check with the two sides decoupled: the decomposed stream of
/// `emitted` against the matchgate product of `reference`. Lets a test
/// corrupt one side to prove the comparison can fail.
EmissionReport verify_emission_against(const MatchgateCircuit &emitted,
                                       const MatchgateCircuit &reference, double tol = 1e-9);

}  // namespace chainwalk
