// qstack command-line driver.
//
// Exit codes: 0 success, 1 usage error, 2 parse/compile/run error.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qstack/qstack.hpp"

namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string in;
    std::string out;
    std::string dialect;
    std::string isa;
    std::uint64_t shots = 1024;
    std::uint64_t seed = 0;
    std::string backend = "statevector";
    bool fusion = false;
    bool pyquil_style = false;
    bool amplitudes = false;
    bool json = false;
    bool verbose = false;
    std::string qubits = "18:24";
    std::string depths = "5";
    std::size_t reps = 3;
    bool large = false;
};

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw qstack::Error("cannot read " + path);
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const Options &o, const std::string &text) {
    if (o.out.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f || !(f << text)) {
        throw qstack::Error("cannot write " + o.out);
    }
}

qstack::Dialect dialect_or_usage(const std::string &name) {
    if (const auto d = qstack::dialect_from_name(name)) {
        return *d;
    }
    throw UsageError("unknown dialect '" + name + "' (use quil or qasm)");
}

qstack::Dialect input_dialect(const Options &o, bool override_allowed = true) {
    if (override_allowed && !o.dialect.empty()) {
        return dialect_or_usage(o.dialect);
    }
    if (const auto d = qstack::dialect_from_path(o.in)) {
        return *d;
    }
    throw UsageError("cannot infer dialect of '" + o.in +
                     "'; use a .quil/.qasm extension or --dialect");
}

qstack::Circuit load_circuit(const Options &o, bool override_allowed = true) {
    const qstack::Dialect d = input_dialect(o, override_allowed);
    return qstack::parse({read_file(o.in), d});
}

qstack::RunConfig run_config(const Options &o) {
    qstack::RunConfig cfg;
    cfg.shots = o.shots;
    cfg.seed = o.seed;
    cfg.fusion = o.fusion;
    const auto b = qstack::backend_from_name(o.backend);
    if (!b) {
        throw UsageError("unknown backend '" + o.backend + "'");
    }
    cfg.backend = *b;
    return cfg;
}

// "a:b" (inclusive) or "a,b,c".
std::vector<std::size_t> parse_range(const std::string &text) {
    const auto number = [&](std::string_view s) {
        std::size_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
            throw UsageError("bad range '" + text + "'");
        }
        return v;
    };
    std::vector<std::size_t> out;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        const std::size_t lo = number(std::string_view(text).substr(0, colon));
        const std::size_t hi = number(std::string_view(text).substr(colon + 1));
        if (lo > hi) {
            throw UsageError("empty range '" + text + "'");
        }
        for (std::size_t v = lo; v <= hi; ++v) {
            out.push_back(v);
        }
        return out;
    }
    std::string_view rest(text);
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(number(rest.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    return out;
}

void cmd_parse(const Options &o) {
    const auto c = load_circuit(o);
    std::ostringstream s;
    s << "qubits: " << c.num_qubits() << "\nclbits: " << c.num_clbits()
      << "\ninstructions: " << c.size() << '\n';
    write_output(o, s.str());
}

void cmd_emit(const Options &o) {
    const auto c = load_circuit(o, false);
    std::optional<qstack::Dialect> target;
    if (!o.dialect.empty()) {
        target = dialect_or_usage(o.dialect);
    } else if (!o.out.empty()) {
        target = qstack::dialect_from_path(o.out);
    }
    if (!target) {
        throw UsageError("emit needs --dialect or an --out file with a "
                         ".quil/.qasm extension");
    }
    write_output(o, qstack::emit(c, *target).text);
}

void cmd_compile(const Options &o) {
    const auto c = load_circuit(o);
    const qstack::Isa isa =
        qstack::load_isa(o.isa, qstack::isa_search_path_from_env());
    const auto compiled = qstack::compile(c, isa);
    qstack::Dialect target = input_dialect(o);
    if (!o.out.empty()) {
        if (const auto d = qstack::dialect_from_path(o.out)) {
            target = *d;
        }
    }
    if (o.verbose) {
        std::cerr << "isa: " << isa.name << '\n';
        std::cerr << "final layout:";
        for (std::size_t l = 0; l < c.num_qubits(); ++l) {
            std::cerr << ' ' << l << "->" << compiled.final_layout[l];
        }
        std::cerr << '\n';
        if (compiled.phase_distance) {
            std::cerr << "phase distance: " << *compiled.phase_distance << '\n';
        } else {
            std::cerr << "phase distance: not computed\n";
        }
    }
    write_output(o, qstack::emit(compiled.circuit, target).text);
}

void cmd_run(const Options &o) {
    const auto c = load_circuit(o);
    const auto cfg = run_config(o);
    if (o.amplitudes) {
        write_output(o, qstack::amplitudes_csv(qstack::get_statevector(c, o.fusion)));
        return;
    }
    if (o.pyquil_style) {
        write_output(o, qstack::shot_lists_json(c, cfg) + "\n");
        return;
    }
    write_output(o, qstack::counts_json(qstack::run(c, cfg)) + "\n");
}

void cmd_bench(const Options &o) {
    auto cfg = run_config(o);
    cfg.shots = 1;
    const auto rows = qstack::run_sweep(parse_range(o.qubits),
                                        parse_range(o.depths), cfg,
                                        {o.reps, o.large});
    for (const auto &r : rows) {
        if (!r.runtime_s) {
            std::cerr << "n=" << r.n << " depth=" << r.depth << ": "
                      << r.diagnostic << '\n';
        }
    }
    write_output(o, qstack::bench_csv(rows));
}

void cmd_draw(const Options &o) {
    write_output(o, qstack::draw_ascii(load_circuit(o)));
}

void cmd_resources(const Options &o) {
    const auto r = qstack::estimate_resources(load_circuit(o));
    write_output(o, o.json ? qstack::resources_json(r) + "\n"
                           : qstack::resources_text(r));
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"qstack: quantum circuit parser, compiler and simulator"};
    app.require_subcommand(1);
    Options o;

    const auto add_in = [&](CLI::App *sub) {
        sub->add_option("--in", o.in, "input circuit (.quil or .qasm)")
            ->required()
            ->check(CLI::ExistingFile);
    };
    const auto add_out = [&](CLI::App *sub) {
        sub->add_option("--out", o.out, "output file (default stdout)");
    };
    const auto add_dialect = [&](CLI::App *sub, const std::string &help) {
        sub->add_option("--dialect", o.dialect, help);
    };

    auto *parse = app.add_subcommand("parse", "check a circuit file and summarise it");
    add_in(parse);
    add_out(parse);
    add_dialect(parse, "input dialect (quil or qasm)");

    auto *emit = app.add_subcommand("emit", "translate a circuit to another dialect");
    add_in(emit);
    add_out(emit);
    add_dialect(emit, "output dialect (quil or qasm)");

    auto *compile = app.add_subcommand("compile", "compile for a device ISA");
    add_in(compile);
    add_out(compile);
    add_dialect(compile, "input dialect (quil or qasm)");
    compile->add_option("--isa", o.isa, "agave, ibmqx5, or a descriptor file")
        ->required();
    compile->add_flag("--verbose", o.verbose, "report layout and distance on stderr");

    auto *run = app.add_subcommand("run", "simulate and print counts");
    add_in(run);
    add_out(run);
    add_dialect(run, "input dialect (quil or qasm)");
    run->add_option("--shots", o.shots, "number of shots")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", o.seed, "RNG seed");
    run->add_option("--backend", o.backend, "statevector or unitary")
        ->check(CLI::IsMember({"statevector", "unitary"}));
    run->add_flag("--fusion", o.fusion, "fuse single-qubit gate runs");
    run->add_flag("--pyquil-style", o.pyquil_style,
                  "print per-shot results as a list of lists");
    run->add_flag("--amplitudes", o.amplitudes,
                  "print final amplitudes as CSV (gate-only circuits)");

    auto *bench = app.add_subcommand("bench", "timed benchmark sweep, CSV output");
    add_out(bench);
    bench->add_option("--qubits", o.qubits, "qubit counts, a:b or a,b,c");
    bench->add_option("--depths", o.depths, "level counts, a:b or a,b,c");
    bench->add_option("--reps", o.reps, "repetitions per point (median reported)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--seed", o.seed, "RNG seed");
    bench->add_flag("--fusion", o.fusion, "fuse single-qubit gate runs");
    bench->add_flag("--large", o.large, "allow more than 24 qubits");

    auto *draw = app.add_subcommand("draw", "ASCII circuit diagram");
    add_in(draw);
    add_out(draw);
    add_dialect(draw, "input dialect (quil or qasm)");

    auto *resources = app.add_subcommand("resources", "gate counts and depth");
    add_in(resources);
    add_out(resources);
    add_dialect(resources, "input dialect (quil or qasm)");
    resources->add_flag("--json", o.json, "print JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        if (parse->parsed()) {
            cmd_parse(o);
        } else if (emit->parsed()) {
            cmd_emit(o);
        } else if (compile->parsed()) {
            cmd_compile(o);
        } else if (run->parsed()) {
            cmd_run(o);
        } else if (bench->parsed()) {
            cmd_bench(o);
        } else if (draw->parsed()) {
            cmd_draw(o);
        } else {
            cmd_resources(o);
        }
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const qstack::ParseError &e) {
        std::cerr << o.in << ':' << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
