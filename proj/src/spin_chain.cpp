#include "chainwalk/spin_chain.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cmath>
#include <numeric>

#include "chainwalk/errors.hpp"

namespace chainwalk {

namespace {

constexpr std::size_t kMaxOracleQubits = 14;

void check_scale(std::size_t d, const char *what) {
    if (d == 0) throw DimensionError(std::string(what) + ": need at least one site");
    if (d > kMaxOracleQubits) {
        throw ScaleError(std::string(what) + ": d = " + std::to_string(d) +
                         " exceeds the desk-scale cap d = 14");
    }
}

// I (x) ... (x) op_a (x) ... (x) op_b (x) ... (x) I with qubit 0 leftmost.
ComplexMatrix pauli_string(std::size_t d, std::size_t qa, const ComplexMatrix &op_a,
                           std::size_t qb, const ComplexMatrix &op_b) {
    ComplexMatrix m(1, 1);
    m(0, 0) = 1.0;
    for (std::size_t q = 0; q < d; ++q) {
        if (q == qa) {
            m = kron(m, op_a);
        } else if (q == qb) {
            m = kron(m, op_b);
        } else {
            m = kron(m, identity2());
        }
    }
    return m;
}

ComplexMatrix pauli_string(std::size_t d, std::size_t q, const ComplexMatrix &op) {
    return pauli_string(d, q, op, d, op);
}

}  // namespace

void HamiltonianParams::validate() const {
    const std::size_t d = mu.size();
    if (d == 0) throw DimensionError("HamiltonianParams: mu must not be empty");
    if (lambda.size() != d - 1 || chi.size() != d - 1) {
        throw DimensionError("HamiltonianParams: expected " + std::to_string(d - 1) +
                             " couplings for d = " + std::to_string(d) + " sites, got lambda=" +
                             std::to_string(lambda.size()) + " chi=" + std::to_string(chi.size()));
    }
}

HamiltonianParams params_from_json(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    HamiltonianParams p;
    try {
        p.lambda = j.at("lambda").get<std::vector<double>>();
        p.chi = j.at("chi").get<std::vector<double>>();
        p.mu = j.at("mu").get<std::vector<double>>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("expected arrays lambda, chi, mu: ") + e.what());
    }
    p.validate();
    return p;
}

QubitState QubitState::basis(std::size_t d, std::size_t index) {
    if (d == 0 || d > 24) throw DimensionError("QubitState::basis: unreasonable qubit count");
    QubitState s;
    s.d = d;
    s.amplitudes.assign(std::size_t{1} << d, cdouble{});
    if (index >= s.amplitudes.size()) throw IndexError("basis index out of range");
    s.amplitudes[index] = 1.0;
    return s;
}

ComplexMatrix build_hamiltonian(const HamiltonianParams &p) {
    p.validate();
    const std::size_t d = p.sites();
    check_scale(d, "build_hamiltonian");

    const std::size_t dim = std::size_t{1} << d;
    ComplexMatrix h = ComplexMatrix::zero(dim, dim);
    const ComplexMatrix sx = pauli_x(), sy = pauli_y(), sz = pauli_z();

    for (std::size_t j = 0; j + 1 < d; ++j) {
        if (p.lambda[j] != 0.0) {
            add_in_place(h, pauli_string(d, j, sx, j + 1, sx), p.lambda[j] / 2.0);
            add_in_place(h, pauli_string(d, j, sy, j + 1, sy), p.lambda[j] / 2.0);
        }
        if (p.chi[j] != 0.0) {
            add_in_place(h, pauli_string(d, j, sy, j + 1, sx), p.chi[j] / 2.0);
            add_in_place(h, pauli_string(d, j, sx, j + 1, sy), -p.chi[j] / 2.0);
        }
    }
    for (std::size_t k = 0; k < d; ++k) {
        if (p.mu[k] != 0.0) add_in_place(h, pauli_string(d, k, sz), p.mu[k]);
    }
    return h;
}

ComplexMatrix number_operator(std::size_t d) {
    check_scale(d, "number_operator");
    const std::size_t dim = std::size_t{1} << d;
    ComplexMatrix n = ComplexMatrix::zero(dim, dim);
    const ComplexMatrix sz = pauli_z();
    for (std::size_t k = 0; k < d; ++k) {
        // (1 - sigma_z_k) / 2
        add_in_place(n, ComplexMatrix::identity(dim), 0.5);
        add_in_place(n, pauli_string(d, k, sz), -0.5);
    }
    return n;
}

double commutator_norm(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (!a.square() || !b.square() || a.rows != b.rows) {
        throw DimensionError("commutator_norm: operands must be square with equal dims");
    }
    ComplexMatrix ab = matmul(a, b);
    add_in_place(ab, matmul(b, a), -1.0);
    return max_abs(ab);
}

ComplexMatrix restricted_hamiltonian_block(const HamiltonianParams &p) {
    p.validate();
    const std::size_t d = p.sites();
    const double mu_sum = std::accumulate(p.mu.begin(), p.mu.end(), 0.0);

    ComplexMatrix h = ComplexMatrix::zero(d, d);
    for (std::size_t k = 0; k < d; ++k) h(k, k) = mu_sum - 2.0 * p.mu[k];
    for (std::size_t k = 0; k + 1 < d; ++k) {
        h(k, k + 1) = cdouble(p.lambda[k], p.chi[k]);
        h(k + 1, k) = cdouble(p.lambda[k], -p.chi[k]);
    }
    return h;
}

namespace {

std::size_t node_to_index(std::size_t d, std::size_t node) {
    return std::size_t{1} << (d - 1 - node);
}

}  // namespace

QubitState embed(const ChainState &state) {
    const std::size_t d = state.size();
    if (d == 0) throw DimensionError("embed: empty chain state");
    if (d > 24) throw ScaleError("embed: 2^d amplitudes would be unreasonable for d > 24");
    QubitState out;
    out.d = d;
    out.amplitudes.assign(std::size_t{1} << d, cdouble{});
    for (std::size_t k = 0; k < d; ++k) {
        out.amplitudes[node_to_index(d, k)] = state.amplitudes[k];
    }
    return out;
}

double sector_leakage(const QubitState &state) {
    double outside = 0.0;
    for (std::size_t idx = 0; idx < state.amplitudes.size(); ++idx) {
        if (std::popcount(idx) != 1) outside += std::norm(state.amplitudes[idx]);
    }
    return std::sqrt(outside);
}

ChainState project(const QubitState &state, double tol) {
    if (state.amplitudes.size() != (std::size_t{1} << state.d)) {
        throw DimensionError("project: amplitude count is not 2^d");
    }
    const double leak = sector_leakage(state);
    if (leak > tol) {
        throw SectorLeakError("project: state leaks " + std::to_string(leak) +
                                  " of its norm outside the single-excitation sector",
                              leak);
    }
    ChainState out;
    out.amplitudes.resize(state.d);
    for (std::size_t k = 0; k < state.d; ++k) {
        out.amplitudes[k] = state.amplitudes[node_to_index(state.d, k)];
    }
    return out;
}

}  // namespace chainwalk
