#include <doctest.h>

#include <cmath>
#include <random>

#include "chainwalk/errors.hpp"
#include "chainwalk/numerics.hpp"
#include "chainwalk/spin_chain.hpp"

using namespace chainwalk;

namespace {

HamiltonianParams random_params(std::mt19937 &rng, std::size_t d) {
    std::normal_distribution<double> dist;
    HamiltonianParams p;
    p.lambda.resize(d - 1);
    p.chi.resize(d - 1);
    p.mu.resize(d);
    for (auto &x : p.lambda) x = dist(rng);
    for (auto &x : p.chi) x = dist(rng);
    for (auto &x : p.mu) x = dist(rng);
    return p;
}

ChainState random_chain(std::mt19937 &rng, std::size_t d) {
    std::normal_distribution<double> dist;
    ChainState s;
    s.amplitudes.resize(d);
    for (auto &x : s.amplitudes) x = cdouble(dist(rng), dist(rng));
    const double n = norm(s.amplitudes);
    for (auto &x : s.amplitudes) x /= n;
    return s;
}

// Projection oracle: the restricted block entry (r, c) is the full-matrix
// element between the two single-excitation basis indices.
ComplexMatrix projected_block(const ComplexMatrix &h, std::size_t d) {
    ComplexMatrix block(d, d);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            block(r, c) = h(std::size_t{1} << (d - 1 - r), std::size_t{1} << (d - 1 - c));
        }
    }
    return block;
}

}  // namespace

TEST_CASE("build_hamiltonian: all parameters zero gives the zero matrix") {
    HamiltonianParams p;
    p.lambda = {0.0, 0.0};
    p.chi = {0.0, 0.0};
    p.mu = {0.0, 0.0, 0.0};
    CHECK(max_abs(build_hamiltonian(p)) == 0.0);
}

TEST_CASE("build_hamiltonian: a single site with mu=1 is sigma_z") {
    HamiltonianParams p;
    p.mu = {1.0};
    CHECK(max_abs_diff(build_hamiltonian(p), pauli_z()) == 0.0);
}

TEST_CASE("build_hamiltonian: d=2 hopping term connects |01> and |10>") {
    HamiltonianParams p;
    p.lambda = {1.0};
    p.chi = {0.0};
    p.mu = {0.0, 0.0};
    const ComplexMatrix h = build_hamiltonian(p);
    ComplexMatrix expected = ComplexMatrix::zero(4, 4);
    expected(1, 2) = 1.0;
    expected(2, 1) = 1.0;
    CHECK(max_abs_diff(h, expected) <= 1e-15);
}

TEST_CASE("build_hamiltonian is Hermitian and conserves excitation number") {
    std::mt19937 rng(2);
    for (std::size_t d = 2; d <= 6; ++d) {
        for (int trial = 0; trial < 10; ++trial) {
            const HamiltonianParams p = random_params(rng, d);
            const ComplexMatrix h = build_hamiltonian(p);
            CHECK(is_hermitian(h, 1e-12));
            CHECK(commutator_norm(h, number_operator(d)) <= 1e-10);
        }
    }
}

TEST_CASE("build_hamiltonian refuses d beyond the oracle scale") {
    std::mt19937 rng(4);
    HamiltonianParams p = random_params(rng, 15);
    CHECK_THROWS_AS(build_hamiltonian(p), ScaleError);
}

TEST_CASE("number_operator counts set bits") {
    const ComplexMatrix n2 = number_operator(2);
    ComplexMatrix expected = ComplexMatrix::zero(4, 4);
    expected(1, 1) = 1.0;
    expected(2, 2) = 1.0;
    expected(3, 3) = 2.0;
    CHECK(max_abs_diff(n2, expected) <= 1e-15);

    // popcount oracle across a larger register
    const std::size_t d = 5;
    const ComplexMatrix n = number_operator(d);
    for (std::size_t idx = 0; idx < (std::size_t{1} << d); ++idx) {
        int bits = 0;
        for (std::size_t b = 0; b < d; ++b) bits += (idx >> b) & 1;
        CHECK(std::abs(n(idx, idx) - static_cast<double>(bits)) <= 1e-13);
    }
    CHECK(std::abs(n(0, 0)) <= 1e-13);
    CHECK(std::abs(n((1 << d) - 1, (1 << d) - 1) - double(d)) <= 1e-13);
}

TEST_CASE("commutator_norm basics") {
    CHECK(commutator_norm(pauli_x(), pauli_x()) == 0.0);
    CHECK(commutator_norm(pauli_x(), pauli_z()) == doctest::Approx(2.0));
    CHECK_THROWS_AS(commutator_norm(pauli_x(), ComplexMatrix::identity(4)), DimensionError);
}

TEST_CASE("restricted block matches the projected Kronecker-built Hamiltonian") {
    std::mt19937 rng(8);
    for (std::size_t d = 2; d <= 8; ++d) {
        const HamiltonianParams p = random_params(rng, d);
        const ComplexMatrix block = restricted_hamiltonian_block(p);
        const ComplexMatrix oracle = projected_block(build_hamiltonian(p), d);
        CHECK(max_abs_diff(block, oracle) <= 1e-12);
    }
}

TEST_CASE("restricted block regression: the off-diagonal is lambda + i chi") {
    // Pinned once against the projection oracle; a sign flip here silently
    // transposes the chirality of the chain.
    HamiltonianParams p;
    p.lambda = {0.25};
    p.chi = {0.75};
    p.mu = {0.0, 0.0};
    const ComplexMatrix block = restricted_hamiltonian_block(p);
    CHECK(std::abs(block(0, 1) - cdouble(0.25, 0.75)) <= 1e-15);
    CHECK(std::abs(block(1, 0) - cdouble(0.25, -0.75)) <= 1e-15);
}

TEST_CASE("restricted block: chi=0 gives a real symmetric tridiagonal matrix") {
    std::mt19937 rng(10);
    HamiltonianParams p = random_params(rng, 6);
    p.chi.assign(5, 0.0);
    const ComplexMatrix block = restricted_hamiltonian_block(p);
    for (std::size_t r = 0; r < 6; ++r) {
        for (std::size_t c = 0; c < 6; ++c) {
            CHECK(block(r, c).imag() == 0.0);
            if (r > c + 1 || c > r + 1) CHECK(block(r, c) == cdouble{});
        }
    }
    CHECK(max_abs_diff(block, projected_block(build_hamiltonian(p), 6)) <= 1e-12);
}

TEST_CASE("restricted block: zero parameters and the sqrt(2) magnitude case") {
    HamiltonianParams zero;
    zero.lambda = {0.0};
    zero.chi = {0.0};
    zero.mu = {0.0, 0.0};
    CHECK(max_abs(restricted_hamiltonian_block(zero)) == 0.0);

    HamiltonianParams p;
    p.lambda = {1.0};
    p.chi = {1.0};
    p.mu = {0.0, 0.0};
    CHECK(std::abs(restricted_hamiltonian_block(p)(0, 1)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("embed places node k at the single-1 basis string") {
    const QubitState q = embed(ChainState::basis(4, 2));
    CHECK(q.d == 4);
    CHECK(std::abs(q.amplitudes[2] - 1.0) == 0.0);  // |0010>
    for (std::size_t i = 0; i < 16; ++i) {
        if (i != 2) CHECK(q.amplitudes[i] == cdouble{});
    }
}

TEST_CASE("project inverts embed") {
    std::mt19937 rng(12);
    const ChainState s = random_chain(rng, 6);
    const ChainState back = project(embed(s));
    CHECK(max_abs_diff(back.amplitudes, s.amplitudes) == 0.0);
}

TEST_CASE("project rejects states outside the single-excitation sector") {
    const QubitState vacuum = QubitState::basis(2, 0);  // |00>
    CHECK_THROWS_AS(project(vacuum), SectorLeakError);
    try {
        project(vacuum);
    } catch (const SectorLeakError &e) {
        CHECK(e.leaked_norm == doctest::Approx(1.0));
    }
}

TEST_CASE("evolution commutes with the number operator for random parameter sets") {
    std::mt19937 rng(14);
    for (std::size_t d = 2; d <= 6; ++d) {
        const HamiltonianParams p = random_params(rng, d);
        const ComplexMatrix u = hermitian_exp(build_hamiltonian(p), 0.9);
        CHECK(commutator_norm(u, number_operator(d)) <= 1e-9);
    }
}

TEST_CASE("full evolution restricted to the sector equals the block evolution") {
    std::mt19937 rng(16);
    std::uniform_real_distribution<double> tdist(0.1, 5.0);
    for (std::size_t d = 2; d <= 6; ++d) {
        const HamiltonianParams p = random_params(rng, d);
        const ChainState psi = random_chain(rng, d);
        const double t = tdist(rng);

        const QubitState big = embed(psi);
        QubitState evolved;
        evolved.d = d;
        evolved.amplitudes = mat_vec(hermitian_exp(build_hamiltonian(p), t), big.amplitudes);
        const ChainState via_full = project(evolved, 1e-9);

        const ComplexVector via_block =
            mat_vec(hermitian_exp(restricted_hamiltonian_block(p), t), psi.amplitudes);

        CHECK(max_abs_diff(via_full.amplitudes, via_block) <= 1e-8);
    }
}

TEST_CASE("params load from JSON") {
    const HamiltonianParams p =
        params_from_json(R"({"lambda": [1.0, 2.0], "chi": [0.5, -0.5], "mu": [0.1, 0.2, 0.3]})");
    CHECK(p.sites() == 3);
    CHECK(p.lambda[1] == 2.0);
    CHECK(p.chi[1] == -0.5);
    CHECK(p.mu[2] == 0.3);

    CHECK_THROWS_AS(params_from_json("{"), ConfigError);
    CHECK_THROWS_AS(params_from_json(R"({"lambda": [], "chi": [], "mu": []})"), DimensionError);
    CHECK_THROWS_AS(params_from_json(R"({"lambda": [1], "chi": [], "mu": [0, 0]})"),
                    DimensionError);
}
