#include "chainwalk/qasm_emit.hpp"

#include <cmath>

#include "chainwalk/errors.hpp"
#include "chainwalk/io.hpp"

namespace chainwalk {

std::vector<PrimitiveGate> decompose_m(const MatchgateParams &p) {
    using Op = PrimitiveGate::Op;
    using Slot = PrimitiveGate::Slot;
    std::vector<PrimitiveGate> seq(7);
    seq[0] = {Op::Cx, Slot::A, Slot::B, 0, 0, 0};
    seq[1] = {Op::U, Slot::A, Slot::A, 0.0, 0.0, (p.lambda - p.phi) / 2.0};
    seq[2] = {Op::Cx, Slot::B, Slot::A, 0, 0, 0};
    seq[3] = {Op::U, Slot::A, Slot::A, -p.theta / 2.0, 0.0, -(p.phi + p.lambda) / 2.0};
    seq[4] = {Op::Cx, Slot::B, Slot::A, 0, 0, 0};
    seq[5] = {Op::U, Slot::A, Slot::A, p.theta / 2.0, p.phi, 0.0};
    seq[6] = {Op::Cx, Slot::A, Slot::B, 0, 0, 0};
    return seq;
}

std::string emit_qasm(const MatchgateCircuit &circuit, const QasmOptions &opts) {
    validate_circuit(circuit);
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        if (circuit.gates[i].kind != GateKind::ParamM) {
            throw UnsupportedGateError(
                "gate " + std::to_string(i) +
                " is a generalM gate with no three-angle form; compile it via coin_to_params "
                "before emission");
        }
    }

    const std::string &q = opts.register_name;
    std::string out;
    out += "// chainwalk matchgate circuit\n";
    out += "// node k <-> the basis string with a single 1 at qubit k; q[j] and c[j] align.\n";
    out += "// In a measured bitstring (c[0] printed rightmost) node k reads as the 1 in bit "
           "c[k].\n";
    out += "// U(theta,phi,lambda) in the m body denotes exp(-i(phi+lambda)/2) * "
           "u3(theta,phi,lambda);\n";
    out += "// the difference is a global phase, so standard toolchains run this file "
           "unchanged.\n";
    out += "OPENQASM 2.0;\n";
    out += "include \"qelib1.inc\";\n";
    out += "gate m(theta,phi,lambda) a,b {\n";
    out += "  cx a,b;\n";
    out += "  U(0,0,(lambda-phi)/2) a;\n";
    out += "  cx b,a;\n";
    out += "  U(-theta/2,0,-(phi+lambda)/2) a;\n";
    out += "  cx b,a;\n";
    out += "  U(theta/2,phi,0) a;\n";
    out += "  cx a,b;\n";
    out += "}\n";
    out += "qreg " + q + "[" + std::to_string(circuit.width) + "];\n";
    if (opts.measure) {
        out += "creg c[" + std::to_string(circuit.width) + "];\n";
    }
    for (const auto &g : circuit.gates) {
        out += "m(" + fmt17(g.params.theta) + "," + fmt17(g.params.phi) + "," +
               fmt17(g.params.lambda) + ") " + q + "[" + std::to_string(g.q) + "]," + q + "[" +
               std::to_string(g.q + 1) + "];\n";
    }
    if (opts.measure) {
        for (std::size_t j = 0; j < circuit.width; ++j) {
            out += "measure " + q + "[" + std::to_string(j) + "] -> c[" + std::to_string(j) +
                   "];\n";
        }
    }
    return out;
}

namespace {

// Row transforms on a dim x dim matrix (columns = basis inputs), so that the
// running product picks gates up on the left. All in the emitted operand
// order: slot A binds q[j] and is the more significant bit of the pair.

void left_apply_single(ComplexMatrix &m, std::size_t d, std::size_t qubit,
                       const ComplexMatrix &u) {
    const std::size_t w = std::size_t{1} << (d - 1 - qubit);
    const std::size_t dim = m.rows;
    for (std::size_t r0 = 0; r0 < dim; ++r0) {
        if (r0 & w) continue;
        const std::size_t r1 = r0 | w;
        for (std::size_t c = 0; c < dim; ++c) {
            const cdouble a = m(r0, c);
            const cdouble b = m(r1, c);
            m(r0, c) = u(0, 0) * a + u(0, 1) * b;
            m(r1, c) = u(1, 0) * a + u(1, 1) * b;
        }
    }
}

void left_apply_cx(ComplexMatrix &m, std::size_t d, std::size_t control, std::size_t target) {
    const std::size_t wc = std::size_t{1} << (d - 1 - control);
    const std::size_t wt = std::size_t{1} << (d - 1 - target);
    const std::size_t dim = m.rows;
    for (std::size_t r = 0; r < dim; ++r) {
        if ((r & wc) && !(r & wt)) {
            const std::size_t rr = r | wt;
            for (std::size_t c = 0; c < dim; ++c) std::swap(m(r, c), m(rr, c));
        }
    }
}

void left_apply_matchgate(ComplexMatrix &m, std::size_t d, std::size_t j,
                          const ComplexMatrix &g4) {
    const std::size_t wa = std::size_t{1} << (d - 1 - j);
    const std::size_t wb = wa >> 1;
    const std::size_t dim = m.rows;
    for (std::size_t r00 = 0; r00 < dim; ++r00) {
        if (r00 & (wa | wb)) continue;
        const std::size_t r01 = r00 | wb;
        const std::size_t r10 = r00 | wa;
        const std::size_t r11 = r00 | wa | wb;
        for (std::size_t c = 0; c < dim; ++c) {
            const cdouble a00 = m(r00, c);
            const cdouble a01 = m(r01, c);
            const cdouble a10 = m(r10, c);
            const cdouble a11 = m(r11, c);
            m(r00, c) = g4(0, 0) * a00 + g4(0, 3) * a11;
            m(r01, c) = g4(1, 1) * a01 + g4(1, 2) * a10;
            m(r10, c) = g4(2, 1) * a01 + g4(2, 2) * a10;
            m(r11, c) = g4(3, 0) * a00 + g4(3, 3) * a11;
        }
    }
}

}  // namespace

EmissionReport verify_emission_against(const MatchgateCircuit &emitted,
                                       const MatchgateCircuit &reference, double tol) {
    validate_circuit(emitted);
    validate_circuit(reference);
    if (emitted.width != reference.width) {
        throw DimensionError("verify_emission_against: circuit widths differ");
    }
    if (emitted.width > 10) {
        throw ScaleError("verify_emission composes a dense 2^d unitary; capped at d = 10");
    }
    for (const auto *c : {&emitted, &reference}) {
        for (std::size_t i = 0; i < c->gates.size(); ++i) {
            if (c->gates[i].kind != GateKind::ParamM) {
                throw UnsupportedGateError("gate " + std::to_string(i) +
                                           " is a generalM gate; emission handles paramM only");
            }
        }
    }

    const std::size_t dim = std::size_t{1} << emitted.width;
    ComplexMatrix composed = ComplexMatrix::identity(dim);
    ComplexMatrix product = ComplexMatrix::identity(dim);

    for (const auto &g : emitted.gates) {
        const std::size_t a = g.q;
        const std::size_t b = g.q + 1;
        for (const auto &prim : decompose_m(g.params)) {
            if (prim.op == PrimitiveGate::Op::Cx) {
                const std::size_t control = prim.control == PrimitiveGate::Slot::A ? a : b;
                const std::size_t target = control == a ? b : a;
                left_apply_cx(composed, emitted.width, control, target);
            } else {
                const std::size_t target = prim.target == PrimitiveGate::Slot::A ? a : b;
                left_apply_single(composed, emitted.width, target,
                                  param_inner_block({prim.theta, prim.phi, prim.lambda}));
            }
        }
    }
    for (const auto &g : reference.gates) {
        left_apply_matchgate(product, reference.width, g.q, param_matrix(g.params));
    }

    const PhaseMatch match = equal_up_to_global_phase(composed, product, tol);
    return {match.deviation, match.phase, match.equal};
}

EmissionReport verify_emission(const MatchgateCircuit &circuit, double tol) {
    return verify_emission_against(circuit, circuit, tol);
}

}  // namespace chainwalk
