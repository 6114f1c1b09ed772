#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chainwalk/backends.hpp"
#include "chainwalk/errors.hpp"
#include "chainwalk/matchgate.hpp"
#include "chainwalk/numerics.hpp"
#include "chainwalk/scalar_walk.hpp"
#include "chainwalk/spin_chain.hpp"

using namespace chainwalk;

namespace {

constexpr double kPi = std::numbers::pi;
const cdouble kI{0.0, 1.0};

ComplexMatrix random_su2(std::mt19937 &rng) {
    std::normal_distribution<double> dist;
    cdouble a(dist(rng), dist(rng));
    cdouble b(dist(rng), dist(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    ComplexMatrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = -std::conj(b);
    m(1, 0) = b;
    m(1, 1) = std::conj(a);
    return m;
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

// Random number-conserving circuit mixing three-angle gates with general
// gates whose v block is a nontrivial diagonal (so the phase accumulator is
// exercised).
MatchgateCircuit random_nc_circuit(std::mt19937 &rng, std::size_t d, std::size_t max_gates) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_int_distribution<std::size_t> pick_q(0, d - 2);
    std::uniform_int_distribution<std::size_t> count(1, max_gates);
    std::uniform_int_distribution<int> kind(0, 1);

    MatchgateCircuit c;
    c.width = d;
    const std::size_t n = count(rng);
    for (std::size_t i = 0; i < n; ++i) {
        if (kind(rng) == 0) {
            c.gates.push_back(param_gate({angle(rng), angle(rng), angle(rng)}, pick_q(rng)));
        } else {
            const double a = angle(rng), b = angle(rng);
            ComplexMatrix v(2, 2);
            v(0, 0) = std::polar(1.0, a);
            v(1, 1) = std::polar(1.0, b);
            ComplexMatrix u = random_su2(rng);
            const cdouble root = std::polar(1.0, (a + b) / 2.0);
            for (auto &x : u.data) x *= root;  // det u = det v
            c.gates.push_back(general_gate({v, u}, pick_q(rng)));
        }
    }
    return c;
}

}  // namespace

TEST_CASE("run_statevector: empty circuit leaves the state unchanged") {
    MatchgateCircuit c;
    c.width = 3;
    const QubitState start = QubitState::basis(3, 5);
    const QubitState out = run_statevector(c, start);
    CHECK(max_abs_diff(out.amplitudes, start.amplitudes) == 0.0);
}

TEST_CASE("run_statevector: the phased swap moves one excitation with factor i") {
    // |01...> -> i |10...> on the first pair
    for (std::size_t d : {2u, 4u}) {
        MatchgateCircuit c;
        c.width = d;
        c.gates.push_back(param_gate({kPi, kPi, 0.0}, 0));
        // |01 0...0>: excitation at qubit 1
        const QubitState start = QubitState::basis(d, std::size_t{1} << (d - 2));
        const QubitState out = run_statevector(c, start);
        const std::size_t target = std::size_t{1} << (d - 1);  // |10 0...0>
        CHECK(std::abs(out.amplitudes[target] - kI) <= 1e-15);
    }
}

TEST_CASE("run_statevector enforces the scale cap and width match") {
    MatchgateCircuit c;
    c.width = 15;
    QubitState s;
    s.d = 15;
    CHECK_THROWS_AS(run_statevector(c, s), ScaleError);

    MatchgateCircuit c2;
    c2.width = 3;
    CHECK_THROWS_AS(run_statevector(c2, QubitState::basis(2, 1)), DimensionError);
}

TEST_CASE("gate orientation pin: d=2 walk gate matches the scalar step exactly") {
    // One first-partition coin gate at d=2. The scalar step sends node 0 to
    // C'(0,0)|0> + C'(1,0)|1>; the circuit must reproduce those amplitudes,
    // not their X-conjugated mirror. This freezes the u-block orientation.
    const MatchgateCircuit c = build_staggered_walk_circuit(2, hadamard_coin(), 1);
    const QubitState out = run_statevector(c, embed(ChainState::basis(2, 0)));
    const ChainState expected = staggered_step(ChainState::basis(2, 0), hadamard_coin(), kI);
    const ChainState projected = project(out);
    CHECK(max_abs_diff(projected.amplitudes, expected.amplitudes) <= 1e-15);

    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(projected.amplitudes[0] - r) <= 1e-15);
    CHECK(std::abs(projected.amplitudes[1] + r) <= 1e-15);  // minus sign, not plus
}

TEST_CASE("one walk step at d=4 equals the scalar step with swap phase i") {
    const MatchgateCircuit c = build_staggered_walk_circuit(4, hadamard_coin(), 1);
    const QubitState out = run_statevector(c, embed(ChainState::basis(4, 0)));
    const ChainState expected = staggered_step(ChainState::basis(4, 0), hadamard_coin(), kI);
    CHECK(max_abs_diff(project(out).amplitudes, expected.amplitudes) <= 1e-12);
}

TEST_CASE("statevector kernels agree between serial and parallel modes") {
    std::mt19937 rng(19);
    const std::size_t d = 8;
    const MatchgateCircuit c = random_nc_circuit(rng, d, 30);
    const QubitState start = embed(random_chain(rng, d));
    const QubitState serial = run_statevector(c, start, ExecMode::Serial);
    const QubitState parallel = run_statevector(c, start, ExecMode::Parallel);
    CHECK(max_abs_diff(serial.amplitudes, parallel.amplitudes) == 0.0);
}

TEST_CASE("run_subspace: empty circuit is the identity") {
    MatchgateCircuit c;
    c.width = 6;
    std::mt19937 rng(21);
    const ChainState s = random_chain(rng, 6);
    CHECK(max_abs_diff(run_subspace(c, s).amplitudes, s.amplitudes) == 0.0);
}

TEST_CASE("run_subspace names the offending gate for parity matchgates") {
    MatchgateCircuit c;
    c.width = 4;
    c.gates.push_back(param_gate({0.3, 0.1, -0.2}, 0));
    c.gates.push_back(general_gate({pauli_x(), scale(-1.0, pauli_x())}, 1));
    try {
        run_subspace(c, ChainState::basis(4, 1));
        FAIL("expected SectorError");
    } catch (const SectorError &e) {
        CHECK(e.gate_index == 1);
    }
}

TEST_CASE("contraction identity: subspace equals projected statevector") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<std::size_t> pick_d(2, 12);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t d = pick_d(rng);
        const MatchgateCircuit c = random_nc_circuit(rng, d, 30);
        const ChainState start = random_chain(rng, d);
        const ChainState via_subspace = run_subspace(c, start);
        const ChainState via_statevector = project(run_statevector(c, embed(start)), 1e-9);
        CHECK(max_abs_diff(via_subspace.amplitudes, via_statevector.amplitudes) <= 1e-10);
    }
}

TEST_CASE("number-conserving circuits keep embedded states in the sector") {
    std::mt19937 rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t d = 6;
        const MatchgateCircuit c = random_nc_circuit(rng, d, 40);
        const QubitState out = run_statevector(c, embed(random_chain(rng, d)));
        CHECK(sector_leakage(out) <= 1e-10);
    }
}

TEST_CASE("run_subspace_walk matches the explicit one-step circuit") {
    std::mt19937 rng(27);
    const std::size_t d = 16;
    const ChainState start = random_chain(rng, d);
    const MatchgateCircuit one_step = build_staggered_walk_circuit(d, balanced_coin(), 1);

    ChainState via_circuit = start;
    for (int t = 0; t < 5; ++t) via_circuit = run_subspace(one_step, via_circuit);
    const ChainState via_stream = run_subspace_walk(start, balanced_coin(), 5);
    CHECK(max_abs_diff(via_circuit.amplitudes, via_stream.amplitudes) == 0.0);

    const ChainState via_parallel =
        run_subspace_walk(start, balanced_coin(), 5, ExecMode::Parallel);
    CHECK(max_abs_diff(via_parallel.amplitudes, via_stream.amplitudes) == 0.0);
}

TEST_CASE("subspace walk probabilities match the scalar engine with swap phase i") {
    ChainState scalar = ChainState::basis(8, 4);
    ChainState subspace = scalar;
    for (int t = 0; t < 3; ++t) {
        scalar = staggered_step(scalar, hadamard_coin(), kI);
        subspace = run_subspace_walk(subspace, hadamard_coin(), 1);
    }
    CHECK(max_abs_diff(scalar.amplitudes, subspace.amplitudes) <= 1e-12);
}

TEST_CASE("build_contracted pads to the next power of two") {
    WalkConfig config;
    config.d = 8;
    config.swap_phase = kI;
    const ContractedModel m8 = build_contracted(config);
    CHECK(m8.l == 3);
    CHECK(m8.live == 8);

    config.d = 6;
    const ContractedModel m6 = build_contracted(config);
    CHECK(m6.l == 3);
    CHECK(m6.live == 6);
    // pad rows stay identity
    CHECK(m6.unitary(6, 6) == cdouble{1.0});
    CHECK(m6.unitary(7, 7) == cdouble{1.0});
    for (std::size_t c = 0; c < 6; ++c) {
        CHECK(m6.unitary(6, c) == cdouble{});
        CHECK(m6.unitary(7, c) == cdouble{});
    }
    CHECK(is_unitary(m6.unitary, 1e-12));
}

TEST_CASE("contracted register reproduces the scalar distribution") {
    for (std::size_t d : {6u, 8u}) {
        WalkConfig config;
        config.d = d;
        config.swap_phase = kI;
        const ContractedModel model = build_contracted(config);

        ComplexVector state(std::size_t{1} << model.l, cdouble{});
        state[d / 2] = 1.0;
        state = run_contracted(model, state, 7);

        WalkConfig scalar_cfg = config;
        scalar_cfg.start = ChainState::basis(d, d / 2);
        const EvolveResult scalar = evolve(scalar_cfg, 7);
        for (std::size_t k = 0; k < d; ++k) {
            CHECK(std::abs(std::norm(state[k]) - scalar.probabilities.back()[k]) <= 1e-12);
        }
        // pad indices never acquire amplitude
        for (std::size_t k = d; k < state.size(); ++k) CHECK(std::abs(state[k]) == 0.0);
    }
}

TEST_CASE("sample: point mass and empty draw") {
    const ShotHistogram h = sample({0.0, 0.0, 0.0, 1.0}, 100, 7);
    CHECK(h.shots == 100);
    CHECK(h.counts.size() == 1);
    CHECK(h.counts.at("3") == 100);

    const ShotHistogram none = sample({1.0}, 0, 7);
    CHECK(none.counts.empty());
}

TEST_CASE("sample: binomial bound on a fair split") {
    const std::uint64_t shots = 1000000;
    const ShotHistogram h = sample({0.5, 0.5}, shots, 12345);
    const double sigma = std::sqrt(shots * 0.25);
    CHECK(std::abs(double(h.counts.at("0")) - 500000.0) <= 4.0 * sigma);
    CHECK(std::abs(double(h.counts.at("1")) - 500000.0) <= 4.0 * sigma);
    CHECK(h.counts.at("0") + h.counts.at("1") == shots);
}

TEST_CASE("sample is deterministic for a fixed seed") {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    const ShotHistogram a = sample(p, 10000, 99);
    const ShotHistogram b = sample(p, 10000, 99);
    CHECK(a.counts == b.counts);
    const ShotHistogram other = sample(p, 10000, 100);
    CHECK(a.counts != other.counts);
}

TEST_CASE("sample rejects bad distributions and formats bit labels") {
    CHECK_THROWS_AS(sample({-1e-3, 1.0}, 10, 1), DistributionError);
    CHECK_THROWS_AS(sample({0.7, 0.2}, 10, 1), DistributionError);

    const ShotHistogram h = sample({0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0}, 5, 3,
                                   {LabelStyle::Kind::Bitstring, 3});
    CHECK(h.counts.at("101") == 5);
}

TEST_CASE("norm drift stays below 1e-10 over a thousand steps on every backend") {
    const std::size_t steps = 1000;

    ChainState scalar = ChainState::basis(64, 32);
    for (std::size_t t = 0; t < steps; ++t) scalar = staggered_step(scalar, hadamard_coin(), kI);
    CHECK(std::abs(norm(scalar.amplitudes) - 1.0) <= 1e-10);

    const ChainState subspace =
        run_subspace_walk(ChainState::basis(64, 32), hadamard_coin(), steps);
    CHECK(std::abs(norm(subspace.amplitudes) - 1.0) <= 1e-10);

    const MatchgateCircuit one_step = build_staggered_walk_circuit(8, hadamard_coin(), 1);
    QubitState sv = embed(ChainState::basis(8, 4));
    for (std::size_t t = 0; t < steps; ++t) sv = run_statevector(one_step, sv);
    CHECK(std::abs(norm(sv.amplitudes) - 1.0) <= 1e-10);

    WalkConfig config;
    config.d = 8;
    config.swap_phase = kI;
    const ContractedModel model = build_contracted(config);
    ComplexVector cv(8, cdouble{});
    cv[4] = 1.0;
    cv = run_contracted(model, cv, steps);
    CHECK(std::abs(norm(cv) - 1.0) <= 1e-10);
}

TEST_CASE("cross_validate passes at d=8 and flags injected faults") {
    const CrossValidateReport ok = cross_validate(8, hadamard_coin(), 5, 1e-10);
    CHECK(ok.all_pass());
    bool saw_amplitude = false;
    for (const auto &leg : ok.legs) {
        if (!leg.skipped) CHECK(leg.max_deviation <= 1e-10);
        if (leg.metric == "amplitude") saw_amplitude = true;
    }
    CHECK(saw_amplitude);

    CrossValidateOptions fault;
    fault.inject_fault = true;
    const CrossValidateReport bad = cross_validate(8, hadamard_coin(), 5, 1e-10, fault);
    CHECK_FALSE(bad.all_pass());
}

TEST_CASE("cross_validate skips the statevector leg above d=12") {
    const CrossValidateReport r = cross_validate(64, hadamard_coin(), 4, 1e-9);
    CHECK(r.all_pass());
    bool skipped_noted = false;
    for (const auto &leg : r.legs) {
        if (leg.skipped && leg.pair == "scalar/statevector") skipped_noted = true;
    }
    CHECK(skipped_noted);
    const std::string json = r.to_json();
    CHECK(json.find("\"skipped\": true") != std::string::npos);
    CHECK(json.find("\"tolerance\": ") != std::string::npos);
}

TEST_CASE("backend_walk produces identical distributions across backends") {
    WalkConfig config;
    config.d = 8;
    config.swap_phase = kI;
    config.start = ChainState::basis(8, 4);

    const auto scalar = backend_walk(WalkBackend::Scalar, config, 6);
    const auto subspace = backend_walk(WalkBackend::Subspace, config, 6);
    const auto statevector = backend_walk(WalkBackend::Statevector, config, 6);
    const auto contracted = backend_walk(WalkBackend::Contracted, config, 6);

    REQUIRE(scalar.probabilities.size() == 7);
    for (std::size_t t = 0; t <= 6; ++t) {
        for (std::size_t k = 0; k < 8; ++k) {
            CHECK(std::abs(scalar.probabilities[t][k] - subspace.probabilities[t][k]) <= 1e-12);
            CHECK(std::abs(scalar.probabilities[t][k] - statevector.probabilities[t][k]) <= 1e-12);
            CHECK(std::abs(scalar.probabilities[t][k] - contracted.probabilities[t][k]) <= 1e-12);
        }
    }
    CHECK(statevector.max_sector_leak <= 1e-10);
}

TEST_CASE("scaling fit flags clearly nonlinear timings") {
    std::vector<ScalingPoint> linear{{1024, 10, 1.024e-3}, {4096, 10, 4.096e-3},
                                     {16384, 10, 1.6384e-2}};
    const ScalingFit good = fit_linear_scaling(linear);
    CHECK(good.max_ratio <= 1.01);
    CHECK(good.min_ratio >= 0.99);

    std::vector<ScalingPoint> quadratic{{1024, 10, 1e-3}, {4096, 10, 1.6e-2},
                                        {16384, 10, 2.56e-1}};
    const ScalingFit bad = fit_linear_scaling(quadratic);
    // the d^2 weighting pins the fit to the largest size, so superlinear
    // growth surfaces as the small sizes falling far below the line
    CHECK((bad.min_ratio < 0.5 || bad.max_ratio > 2.0));
}
