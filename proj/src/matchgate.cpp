#include "chainwalk/matchgate.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

#include "chainwalk/errors.hpp"
#include "chainwalk/io.hpp"

namespace chainwalk {

namespace {

constexpr double kPi = std::numbers::pi;

// Indices of the eight entries a matchgate may populate.
constexpr bool kBlockMask[4][4] = {
    {true, false, false, true},
    {false, true, true, false},
    {false, true, true, false},
    {true, false, false, true},
};

}  // namespace

CircuitGate param_gate(MatchgateParams p, std::size_t q) {
    CircuitGate g;
    g.kind = GateKind::ParamM;
    g.params = p;
    g.q = q;
    return g;
}

CircuitGate general_gate(MatchgatePair pair, std::size_t q) {
    matchgate_matrix(pair);  // runs the block checks
    CircuitGate g;
    g.kind = GateKind::GeneralM;
    g.pair = std::move(pair);
    g.q = q;
    return g;
}

void validate_circuit(const MatchgateCircuit &c) {
    if (c.width < 2) throw DimensionError("circuit width must be at least 2");
    for (const auto &g : c.gates) {
        if (g.q + 1 >= c.width) {
            throw IndexError("gate on pair (" + std::to_string(g.q) + "," +
                             std::to_string(g.q + 1) + ") does not fit width " +
                             std::to_string(c.width));
        }
    }
}

ComplexMatrix matchgate_matrix(const MatchgatePair &g) {
    if (g.v.rows != 2 || g.v.cols != 2 || g.u.rows != 2 || g.u.cols != 2) {
        throw DimensionError("matchgate blocks must be 2x2");
    }
    if (!is_unitary(g.v, 1e-10) || !is_unitary(g.u, 1e-10)) {
        throw NotUnitaryError("matchgate blocks must be unitary within 1e-10");
    }
    if (std::abs(det2(g.v) - det2(g.u)) > 1e-10) {
        throw DeterminantError("matchgate blocks must share one determinant");
    }
    ComplexMatrix m = ComplexMatrix::zero(4, 4);
    m(0, 0) = g.v(0, 0);
    m(0, 3) = g.v(0, 1);
    m(3, 0) = g.v(1, 0);
    m(3, 3) = g.v(1, 1);
    m(1, 1) = g.u(0, 0);
    m(1, 2) = g.u(0, 1);
    m(2, 1) = g.u(1, 0);
    m(2, 2) = g.u(1, 1);
    return m;
}

ComplexMatrix param_inner_block(const MatchgateParams &p) {
    const double half = p.theta / 2.0;
    const double c = std::cos(half);
    const double s = std::sin(half);
    const double sum = (p.phi + p.lambda) / 2.0;
    const double diff = (p.phi - p.lambda) / 2.0;
    ComplexMatrix u(2, 2);
    u(0, 0) = std::polar(c, -sum);
    u(0, 1) = -std::polar(s, -diff);
    u(1, 0) = std::polar(s, diff);
    u(1, 1) = std::polar(c, sum);
    return u;
}

ComplexMatrix param_matrix(const MatchgateParams &p) {
    const ComplexMatrix u = param_inner_block(p);
    ComplexMatrix m = ComplexMatrix::identity(4);
    m(1, 1) = u(0, 0);
    m(1, 2) = u(0, 1);
    m(2, 1) = u(1, 0);
    m(2, 2) = u(1, 1);
    return m;
}

GateClass classify_gate(const ComplexMatrix &m, double tol) {
    if (m.rows != 4 || m.cols != 4) throw DimensionError("classify_gate expects a 4x4 matrix");
    if (!is_unitary(m, 1e-8)) throw NotUnitaryError("classify_gate expects a unitary input");

    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            if (!kBlockMask[r][c] && std::abs(m(r, c)) > tol) return GateClass::NotMatchgate;
        }
    }
    ComplexMatrix v(2, 2, {m(0, 0), m(0, 3), m(3, 0), m(3, 3)});
    ComplexMatrix u(2, 2, {m(1, 1), m(1, 2), m(2, 1), m(2, 2)});
    if (std::abs(det2(v) - det2(u)) > tol) return GateClass::NotMatchgate;
    const bool v_diagonal = std::abs(v(0, 1)) <= tol && std::abs(v(1, 0)) <= tol;
    return v_diagonal ? GateClass::NumberConservingMatchgate : GateClass::ParityMatchgate;
}

MatchgateCircuit build_staggered_walk_circuit(std::size_t d, const Coin &coin,
                                              std::size_t steps) {
    if (d < 2 || d % 2 != 0) {
        throw DimensionError("walk circuit needs an even qubit count, got " + std::to_string(d));
    }
    const MatchgateParams coin_params = coin_to_params(coin).params;
    const MatchgateParams swap_params{kPi, kPi, 0.0};

    MatchgateCircuit c;
    c.width = d;
    c.gates.reserve(steps * (d - 1));
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t q = 0; q + 1 < d; q += 2) c.gates.push_back(param_gate(coin_params, q));
        for (std::size_t q = 1; q + 1 < d - 1; q += 2) c.gates.push_back(param_gate(swap_params, q));
    }
    return c;
}

MatchgateParams solve_su2_angles(const ComplexMatrix &u) {
    if (u.rows != 2 || u.cols != 2) throw DimensionError("solve_su2_angles expects 2x2");
    if (!is_unitary(u, 1e-8)) throw NotUnitaryError("solve_su2_angles expects a unitary matrix");
    if (std::abs(det2(u) - 1.0) > 1e-8) {
        throw DeterminantError("solve_su2_angles expects det 1 (normalize first)");
    }

    const double c = std::abs(u(0, 0));
    const double s = std::abs(u(1, 0));
    double theta = 2.0 * std::atan2(s, c);

    // At the poles only one of phi+lambda, phi-lambda is determined; the
    // canonical choice pins the free one so that the walk-circuit constants
    // come out as M(pi,pi,0) for the phased swap and M(-pi/2,0,0) for the
    // Hadamard coin.
    constexpr double kPoleEps = 1e-14;
    if (c <= kPoleEps) {  // theta at pi: only phi - lambda matters
        double diff = 2.0 * std::arg(u(1, 0));
        if (diff > kPi) {
            theta = -theta;
            diff -= 2.0 * kPi;
        } else if (diff <= -kPi) {
            theta = -theta;
            diff += 2.0 * kPi;
        }
        return {theta, diff, 0.0};
    }
    if (s <= kPoleEps) {  // theta at 0: only phi + lambda matters
        const double a = -std::arg(u(0, 0));
        return {0.0, a, a};
    }

    const double sum = -2.0 * std::arg(u(0, 0));
    double diff = 2.0 * std::arg(u(1, 0));
    // Fold phi - lambda into (-pi, pi], flipping the sign of theta to
    // compensate; this keeps the Hadamard compilation at theta = -pi/2
    // rather than the equivalent (pi/2, pi, -pi).
    if (diff > kPi) {
        theta = -theta;
        diff -= 2.0 * kPi;
    } else if (diff <= -kPi) {
        theta = -theta;
        diff += 2.0 * kPi;
    }
    return {theta, (sum + diff) / 2.0, (sum - diff) / 2.0};
}

CoinCompilation coin_to_params(const Coin &coin) {
    if (!is_unitary(coin.matrix, 1e-10)) throw NotUnitaryError("coin must be unitary");
    ComplexMatrix cprime = matmul(coin.matrix, pauli_x());
    const cdouble det = det2(cprime);

    // alpha^2 * det = 1; of the two roots take arg(alpha) in (-pi/2, pi/2],
    // preferring + on the tie at the branch cut. The principal square root
    // keeps alpha exact (real part exactly 0) for real-negative determinants,
    // which the frozen swap constants rely on.
    cdouble alpha = 1.0 / std::sqrt(det);
    alpha /= std::abs(alpha);
    if (std::arg(alpha) <= -kPi / 2.0 + 1e-12) alpha = -alpha;

    ComplexMatrix normalized = scale(alpha, cprime);
    CoinCompilation out;
    out.alpha = alpha;
    out.params = solve_su2_angles(normalized);
    return out;
}

namespace {

ComplexMatrix block_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 4) throw ConfigError("matchgate block must list 4 entries");
    ComplexMatrix m(2, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        m.data[i] = cdouble(j[i].at(0).get<double>(), j[i].at(1).get<double>());
    }
    return m;
}

}  // namespace

std::string circuit_to_json(const MatchgateCircuit &c) {
    // Hand-assembled so that angle literals render with fmt17.
    std::string out = "{\"width\": " + std::to_string(c.width) + ", \"gates\": [";
    bool first = true;
    for (const auto &g : c.gates) {
        if (!first) out += ", ";
        first = false;
        if (g.kind == GateKind::ParamM) {
            out += "{\"kind\": \"paramM\", \"theta\": " + fmt17(g.params.theta) +
                   ", \"phi\": " + fmt17(g.params.phi) + ", \"lambda\": " + fmt17(g.params.lambda) +
                   ", \"q\": " + std::to_string(g.q) + "}";
        } else {
            auto block = [](const ComplexMatrix &m) {
                std::string s = "[";
                for (std::size_t i = 0; i < 4; ++i) {
                    if (i) s += ", ";
                    s += "[" + fmt17(m.data[i].real()) + ", " + fmt17(m.data[i].imag()) + "]";
                }
                return s + "]";
            };
            out += "{\"kind\": \"generalM\", \"v\": " + block(g.pair.v) +
                   ", \"u\": " + block(g.pair.u) + ", \"q\": " + std::to_string(g.q) + "}";
        }
    }
    out += "]}";
    return out;
}

MatchgateCircuit circuit_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("invalid circuit JSON: ") + e.what());
    }
    MatchgateCircuit c;
    try {
        c.width = j.at("width").get<std::size_t>();
        for (const auto &jg : j.at("gates")) {
            const std::string kind = jg.at("kind").get<std::string>();
            const std::size_t q = jg.at("q").get<std::size_t>();
            if (kind == "paramM") {
                c.gates.push_back(param_gate({jg.at("theta").get<double>(),
                                              jg.at("phi").get<double>(),
                                              jg.at("lambda").get<double>()},
                                             q));
            } else if (kind == "generalM") {
                MatchgatePair pair{block_from_json(jg.at("v")), block_from_json(jg.at("u"))};
                c.gates.push_back(general_gate(std::move(pair), q));
            } else {
                throw ConfigError("unknown gate kind '" + kind + "'");
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed circuit JSON: ") + e.what());
    }
    validate_circuit(c);
    return c;
}

}  // namespace chainwalk
