// chainwalk command line: run chain walks on any backend, emit OpenQASM,
// cross-validate backends against each other, and benchmark the kernels.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "chainwalk/backends.hpp"
#include "chainwalk/errors.hpp"
#include "chainwalk/io.hpp"
#include "chainwalk/matchgate.hpp"
#include "chainwalk/qasm_emit.hpp"
#include "chainwalk/scalar_walk.hpp"
#include "chainwalk/spin_chain.hpp"

namespace {

using namespace chainwalk;

bool log_enabled() {
    const char *v = std::getenv("CHAINWALK_LOG");
    return v != nullptr && v[0] != '\0';
}

void log_line(const std::string &msg) {
    if (log_enabled()) std::cerr << "[chainwalk] " << msg << "\n";
}

struct RunSpec {
    std::size_t nodes = 0;
    std::size_t steps = 1;
    std::string coin = "hadamard";
    std::string coin_file;
    std::string boundary = "reflecting";
    std::string backend = "scalar";
    std::string swap_phase = "one";
    std::int64_t start = -1;  // -1 means nodes/2
    std::string start_file;
    std::uint64_t shots = 0;
    std::int64_t seed = -1;
    std::string output = "-";
    std::string format = "json";
    bool measure = false;
    double tolerance = 1e-10;
    bool inject_fault = false;
    // bench grid
    std::size_t bench_min = 1024;
    std::size_t bench_max = 1048576;
    std::size_t statevector_contrast = 12;
};

void apply_config_file(const std::string &path, RunSpec &spec) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    auto get = [&](const char *key, auto &field) {
        if (j.contains(key)) j.at(key).get_to(field);
    };
    get("nodes", spec.nodes);
    get("steps", spec.steps);
    get("coin", spec.coin);
    get("coin-file", spec.coin_file);
    get("boundary", spec.boundary);
    get("backend", spec.backend);
    get("swap-phase", spec.swap_phase);
    get("start", spec.start);
    get("start-file", spec.start_file);
    get("shots", spec.shots);
    get("seed", spec.seed);
    get("output", spec.output);
    get("format", spec.format);
    get("measure", spec.measure);
    get("tolerance", spec.tolerance);
    get("inject-fault", spec.inject_fault);
    get("bench-min", spec.bench_min);
    get("bench-max", spec.bench_max);
    get("statevector-contrast", spec.statevector_contrast);
}

Coin load_coin(const RunSpec &spec) {
    if (!spec.coin_file.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text_file(spec.coin_file));
        } catch (const nlohmann::json::parse_error &e) {
            throw ConfigError("coin file " + spec.coin_file + ": " + e.what());
        }
        if (!j.is_array() || j.size() != 4) {
            throw ConfigError("coin file must hold 4 [re, im] entries, row-major");
        }
        ComplexMatrix m(2, 2);
        for (std::size_t i = 0; i < 4; ++i) {
            m.data[i] = cdouble(j[i].at(0).get<double>(), j[i].at(1).get<double>());
        }
        return make_coin(std::move(m), "custom");
    }
    return coin_from_name(spec.coin);
}

ChainState load_start(const RunSpec &spec) {
    if (!spec.start_file.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text_file(spec.start_file));
        } catch (const nlohmann::json::parse_error &e) {
            throw ConfigError("start file " + spec.start_file + ": " + e.what());
        }
        if (!j.is_array() || j.size() != spec.nodes) {
            throw ConfigError("start file must hold exactly nodes [re, im] amplitude entries");
        }
        ChainState s;
        s.amplitudes.resize(spec.nodes);
        for (std::size_t i = 0; i < spec.nodes; ++i) {
            s.amplitudes[i] = cdouble(j[i].at(0).get<double>(), j[i].at(1).get<double>());
        }
        if (!is_normalized(s.amplitudes, 1e-8)) {
            throw ConfigError("start amplitudes are not normalized");
        }
        return s;
    }
    const std::size_t node = spec.start < 0 ? spec.nodes / 2 : static_cast<std::size_t>(spec.start);
    if (node >= spec.nodes) throw ConfigError("start node out of range");
    return ChainState::basis(spec.nodes, node);
}

void write_output(const RunSpec &spec, const std::string &content) {
    if (spec.output == "-") {
        std::cout << content;
    } else {
        write_text_file(spec.output, content);
        log_line("wrote " + spec.output);
    }
}

std::string walk_json(const RunSpec &spec, const std::vector<std::vector<double>> &records,
                      const ShotHistogram *histogram, double max_leak, bool with_leak) {
    std::string out = "{\"schemaVersion\": 1, \"command\": \"walk\", \"d\": " +
                      std::to_string(spec.nodes) + ", \"steps\": " + std::to_string(spec.steps) +
                      ", \"backend\": \"" + spec.backend + "\", \"coin\": \"" +
                      (spec.coin_file.empty() ? spec.coin : "custom") + "\", \"boundary\": \"" +
                      spec.boundary + "\", \"swapPhase\": \"" + spec.swap_phase + "\"";
    if (spec.start >= 0) out += ", \"start\": " + std::to_string(spec.start);
    if (with_leak) out += ", \"maxSectorLeak\": " + fmt17(max_leak);
    out += ", \"probabilities\": [";
    for (std::size_t t = 0; t < records.size(); ++t) {
        if (t) out += ", ";
        out += "[";
        for (std::size_t k = 0; k < records[t].size(); ++k) {
            if (k) out += ", ";
            out += fmt17(records[t][k]);
        }
        out += "]";
    }
    out += "]";
    if (histogram) out += ", \"histogram\": " + histogram_to_json(*histogram);
    out += "}\n";
    return out;
}

int cmd_walk(const RunSpec &spec) {
    const Coin coin = load_coin(spec);
    const ChainState start = load_start(spec);
    const WalkBackend backend = backend_from_name(spec.backend);

    WalkConfig config;
    config.d = spec.nodes;
    config.coin = coin;
    config.swap_phase = spec.swap_phase == "i" ? cdouble{0.0, 1.0} : cdouble{1.0, 0.0};
    config.start = start;

    std::vector<std::vector<double>> records;
    double max_leak = 0.0;
    if (spec.boundary == "periodic") {
        config.boundary = Boundary::Periodic;
        records = evolve(config, spec.steps).probabilities;
    } else {
        BackendWalkResult run = backend_walk(backend, config, spec.steps);
        records = std::move(run.probabilities);
        max_leak = run.max_sector_leak;
    }

    const ShotHistogram histogram = [&] {
        if (spec.shots == 0) return ShotHistogram{};
        LabelStyle style;
        if (backend == WalkBackend::Contracted) {
            std::size_t l = 0;
            while ((std::size_t{1} << l) < spec.nodes) ++l;
            style = {LabelStyle::Kind::Bitstring, l};
        }
        return sample(records.back(), spec.shots, static_cast<std::uint64_t>(spec.seed), style);
    }();

    const bool with_leak = backend == WalkBackend::Statevector && spec.boundary != "periodic";
    if (spec.format == "json") {
        write_output(spec, walk_json(spec, records, spec.shots ? &histogram : nullptr, max_leak,
                                     with_leak));
    } else {
        std::string out = probability_records_csv(records);
        if (spec.shots > 0) {
            out += "\noutcome,count\n";
            for (const auto &[label, count] : histogram.counts) {
                out += label + "," + std::to_string(count) + "\n";
            }
        }
        write_output(spec, out);
    }
    return 0;
}

int cmd_emit_qasm(const RunSpec &spec) {
    const Coin coin = load_coin(spec);
    const MatchgateCircuit circuit = build_staggered_walk_circuit(spec.nodes, coin, spec.steps);
    QasmOptions opts;
    opts.measure = spec.measure;
    write_output(spec, emit_qasm(circuit, opts));
    return 0;
}

int cmd_validate(const RunSpec &spec) {
    const Coin coin = load_coin(spec);
    CrossValidateOptions opts;
    if (spec.start >= 0) opts.start_node = static_cast<std::size_t>(spec.start);
    opts.inject_fault = spec.inject_fault;
    const CrossValidateReport report =
        cross_validate(spec.nodes, coin, spec.steps, spec.tolerance, opts);
    write_output(spec, report.to_json() + "\n");
    for (const auto &leg : report.legs) {
        log_line("leg " + leg.pair + (leg.skipped ? " skipped" : (leg.pass ? " pass" : " FAIL")));
    }
    return report.all_pass() ? 0 : 1;
}

int cmd_bench(const RunSpec &spec) {
    std::vector<std::size_t> grid;
    for (std::size_t d = spec.bench_min; d <= spec.bench_max; d *= 4) grid.push_back(d);
    if (grid.empty() || grid.back() != spec.bench_max) grid.push_back(spec.bench_max);

    std::string csv = "d,steps,kernel,seconds,seconds_per_step\n";
    const bool unreliable = spec.steps == 0;

    auto run_grid = [&](ExecMode mode, const char *kernel) {
        std::vector<ScalingPoint> points;
        if (unreliable) {
            for (std::size_t d : grid) points.push_back({d, 0, 0.0});
        } else {
            points = measure_walk_scaling(grid, mode);
        }
        for (const auto &p : points) {
            csv += std::to_string(p.d) + "," + std::to_string(p.steps) + "," + kernel + "," +
                   fmt17(p.seconds) + "," + fmt17(p.seconds_per_step()) + "\n";
            log_line(std::string(kernel) + " d=" + std::to_string(p.d) + " " +
                     fmt17(p.seconds_per_step()) + " s/step");
        }
        return points;
    };

    const auto serial = run_grid(ExecMode::Serial, "subspace-serial");
    const auto parallel = run_grid(ExecMode::Parallel, "subspace-parallel");

    if (spec.statevector_contrast > 0) {
        const std::size_t d = spec.statevector_contrast;
        const Coin coin = hadamard_coin();
        const MatchgateCircuit one_step = build_staggered_walk_circuit(d, coin, 1);
        QubitState state = embed(ChainState::basis(d, d / 2));
        const std::size_t steps = unreliable ? 0 : 50;
        const auto t0 = std::chrono::steady_clock::now();
        for (std::size_t t = 0; t < steps; ++t) state = run_statevector(one_step, state);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                .count();
        csv += std::to_string(d) + "," + std::to_string(steps) + ",statevector," + fmt17(secs) +
               "," + fmt17(steps ? secs / steps : 0.0) + "\n";
    }

    if (unreliable) {
        csv += "# warning: steps=0 gives zero-dominated timings; results are unreliable\n";
    } else {
        const ScalingFit fit_s = fit_linear_scaling(serial);
        const ScalingFit fit_p = fit_linear_scaling(parallel);
        csv += "# slope subspace-serial seconds_per_step_per_node: " + fmt17(fit_s.slope) + "\n";
        csv += "# slope subspace-parallel seconds_per_step_per_node: " + fmt17(fit_p.slope) + "\n";
        csv += "# linearity subspace-serial ratio range: [" + fmt17(fit_s.min_ratio) + ", " +
               fmt17(fit_s.max_ratio) + "]\n";
    }
    write_output(spec, csv);
    return 0;
}

void validate_spec(const std::string &command, const RunSpec &spec) {
    if (command != "bench") {
        if (spec.nodes < 2) throw ConfigError("--nodes must be at least 2");
    }
    if (command == "walk" || command == "emit-qasm" || command == "validate") {
        const bool staggered = spec.boundary != "periodic" || command != "walk";
        if (staggered && spec.nodes % 2 != 0) {
            throw ConfigError("staggered runs need an even node count, got " +
                              std::to_string(spec.nodes));
        }
    }
    if (command == "walk") {
        if (spec.boundary != "reflecting" && spec.boundary != "periodic") {
            throw ConfigError("--boundary must be reflecting or periodic");
        }
        if (spec.boundary == "periodic") {
            if (spec.backend != "scalar") {
                throw ConfigError("periodic boundaries run on the scalar (coined) engine only");
            }
            if (spec.nodes % 2 != 0) {
                throw ConfigError("periodic runs need an even flat node count (2 per coin node)");
            }
        }
        if (spec.backend == "statevector" && spec.nodes > kStatevectorMaxQubits) {
            throw ConfigError("statevector backend is capped at 14 qubits; got " +
                              std::to_string(spec.nodes));
        }
        if (spec.swap_phase != "one" && spec.swap_phase != "i") {
            throw ConfigError("--swap-phase must be one or i");
        }
        if (spec.format != "json" && spec.format != "csv") {
            throw ConfigError("--format must be json or csv");
        }
        if (spec.shots > 0 && spec.seed < 0) {
            throw ConfigError("--seed is required when --shots > 0 (reports must be reproducible)");
        }
        if (spec.start >= 0 && static_cast<std::size_t>(spec.start) >= spec.nodes) {
            throw ConfigError("--start out of range");
        }
    }
    if (command == "validate" && spec.nodes % 2 != 0) {
        throw ConfigError("validate needs an even node count");
    }
    if (command == "bench" &&
        (spec.bench_min < 2 || spec.bench_max < spec.bench_min)) {
        throw ConfigError("bench grid must satisfy 2 <= bench-min <= bench-max");
    }
}

}  // namespace

int main(int argc, char **argv) {
    RunSpec spec;

    // --config provides defaults; explicit flags win because CLI11 only
    // assigns bound fields for options that actually appear.
    try {
        for (int i = 1; i < argc; ++i) {
            const std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) {
                apply_config_file(argv[i + 1], spec);
            } else if (arg.rfind("--config=", 0) == 0) {
                apply_config_file(arg.substr(9), spec);
            }
        }
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"matchgate chain-walk simulator and circuit toolkit"};
    app.require_subcommand(1);
    std::string config_path;  // consumed above; registered so CLI11 accepts it

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--nodes", spec.nodes, "chain length d");
        cmd->add_option("--steps", spec.steps, "number of walk steps");
        cmd->add_option("--coin", spec.coin, "coin preset: hadamard, balanced, identity");
        cmd->add_option("--coin-file", spec.coin_file, "JSON file with a custom 2x2 coin");
        cmd->add_option("--config", config_path, "JSON config mirroring these flags");
        cmd->add_option("--output", spec.output, "output path ('-' = stdout)");
    };

    CLI::App *walk = app.add_subcommand("walk", "run a walk and record node probabilities");
    add_common(walk);
    walk->add_option("--boundary", spec.boundary, "reflecting (staggered) or periodic (coined)");
    walk->add_option("--backend", spec.backend, "scalar, subspace, statevector or contracted");
    walk->add_option("--swap-phase", spec.swap_phase, "second-partition phase: one or i");
    walk->add_option("--start", spec.start, "start node (default d/2)");
    walk->add_option("--start-file", spec.start_file, "JSON file with start amplitudes");
    walk->add_option("--shots", spec.shots, "sample the final distribution");
    walk->add_option("--seed", spec.seed, "sampling seed (required with --shots)");
    walk->add_option("--format", spec.format, "json or csv");

    CLI::App *emit = app.add_subcommand("emit-qasm", "emit the walk circuit as OpenQASM 2.0");
    add_common(emit);
    emit->add_flag("--measure", spec.measure, "append measurement of all qubits");

    CLI::App *validate = app.add_subcommand("validate", "cross-validate all backends");
    add_common(validate);
    validate->add_option("--start", spec.start, "start node (default d/2)");
    validate->add_option("--tolerance", spec.tolerance, "pass threshold for every leg");
    validate->add_flag("--inject-fault", spec.inject_fault,
                       "perturb one gate angle by 1e-3 (sensitivity check)");

    CLI::App *bench = app.add_subcommand("bench", "time the subspace kernels over a size grid");
    add_common(bench);
    bench->add_option("--bench-min", spec.bench_min, "smallest chain length");
    bench->add_option("--bench-max", spec.bench_max, "largest chain length");
    bench->add_option("--statevector-contrast", spec.statevector_contrast,
                      "statevector contrast size (0 disables)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        validate_spec(command, spec);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (command == "walk") return cmd_walk(spec);
        if (command == "emit-qasm") return cmd_emit_qasm(spec);
        if (command == "validate") return cmd_validate(spec);
        if (command == "bench") return cmd_bench(spec);
    } catch (const ScaleError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
