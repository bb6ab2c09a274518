#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qstack/circuit.hpp"
#include "qstack/detail/text.hpp"
#include "qstack/error.hpp"
#include "qstack/simulator.hpp"
#include "qstack/statevector.hpp"

namespace qstack {

/// Benchmark family: each level applies H and SqrtX to every qubit and, for
/// every qubit but the first, a CNOT controlled by it onto the first qubit.
/// Every qubit is measured after the last level.
inline Circuit benchmark_circuit(std::size_t n, std::size_t levels,
                                 bool measure = true) {
    if (n < 2) {
        throw CircuitError("benchmark circuit needs at least 2 qubits");
    }
    if (levels < 1) {
        throw CircuitError("benchmark circuit needs at least 1 level");
    }
    Circuit c(n, measure ? n : 0);
    for (std::size_t level = 0; level < levels; ++level) {
        for (Qubit q = 0; q < n; ++q) {
            c.h(q);
            c.sqrt_x(q);
            if (q != 0) {
                c.cnot(q, 0);
            }
        }
    }
    if (measure) {
        for (Qubit q = 0; q < n; ++q) {
            c.measure(q, q);
        }
    }
    return c;
}

/// One timed grid point. `depth` is the level count; the measurement layer
/// is not included in it.
struct BenchRow {
    std::size_t n = 0;
    std::size_t depth = 0;
    /// Median wall-clock seconds; empty when the point could not run.
    std::optional<double> runtime_s;
    Backend backend = Backend::StateVector;
    bool fusion = false;
    std::string diagnostic;
};

/// Largest qubit count a sweep runs without `allow_large`.
inline constexpr std::size_t kDefaultMaxBenchQubits = 24;

struct SweepOptions {
    std::size_t repetitions = 3;
    bool allow_large = false;
};

namespace bench_detail {

// MemAvailable in bytes, if the kernel reports it.
inline std::optional<std::size_t> available_memory() {
    std::ifstream in("/proc/meminfo");
    std::string key;
    std::size_t value = 0;
    std::string unit;
    while (in >> key >> value) {
        std::getline(in, unit);
        if (key == "MemAvailable:") {
            return value * 1024;
        }
    }
    return std::nullopt;
}

inline double median(std::vector<double> v) {
    std::ranges::sort(v);
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace bench_detail

/// Times one shot of benchmark_circuit(n, depth) per repetition and returns
/// the median. The clock starts after the state is allocated and stops after
/// the final measurement.
inline BenchRow time_point(std::size_t n, std::size_t depth,
                           const RunConfig &cfg, std::size_t repetitions) {
    BenchRow row{n, depth, std::nullopt, cfg.backend, cfg.fusion, {}};
    if (cfg.backend != Backend::StateVector) {
        throw SimulationError("benchmark sweeps use the statevector backend");
    }
    if (repetitions == 0) {
        throw SimulationError("benchmark needs at least one repetition");
    }
    const std::size_t bytes = (std::size_t{1} << n) * sizeof(Complex);
    if (const auto avail = bench_detail::available_memory();
        avail && bytes > *avail) {
        row.diagnostic = "out of memory: state needs " + std::to_string(bytes) +
                         " bytes, " + std::to_string(*avail) + " available";
        return row;
    }
    const Circuit circuit = benchmark_circuit(n, depth);
    const Program program(circuit, cfg.fusion);
    std::vector<double> times;
    try {
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            StateVector state(n);
            ShotRng rng(cfg.seed, rep);
            const auto start = std::chrono::steady_clock::now();
            const auto bits = program.run_shot(state, rng);
            const auto stop = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double>(stop - start).count());
            (void)bits;
        }
    } catch (const std::bad_alloc &) {
        row.diagnostic = "out of memory allocating " + std::to_string(bytes) +
                         " bytes";
        return row;
    }
    row.runtime_s = bench_detail::median(times);
    return row;
}

/// Row-major sweep over n_range x depth_range.
inline std::vector<BenchRow> run_sweep(const std::vector<std::size_t> &n_range,
                                       const std::vector<std::size_t> &depth_range,
                                       const RunConfig &cfg,
                                       const SweepOptions &opts = {}) {
    if (n_range.empty() || depth_range.empty()) {
        throw SimulationError("sweep ranges must be nonempty");
    }
    for (std::size_t n : n_range) {
        if (n > kDefaultMaxBenchQubits && !opts.allow_large) {
            throw SimulationError("n=" + std::to_string(n) + " exceeds " +
                                  std::to_string(kDefaultMaxBenchQubits) +
                                  " qubits; large sweeps must be enabled "
                                  "explicitly");
        }
    }
    std::vector<BenchRow> rows;
    rows.reserve(n_range.size() * depth_range.size());
    for (std::size_t n : n_range) {
        for (std::size_t d : depth_range) {
            rows.push_back(time_point(n, d, cfg, opts.repetitions));
        }
    }
    return rows;
}

inline constexpr std::string_view kBenchCsvHeader =
    "n,depth,runtime_s,backend,fusion";

/// CSV with a header line; a point that could not run has an empty
/// runtime field.
inline std::string bench_csv(const std::vector<BenchRow> &rows) {
    std::ostringstream out;
    out << kBenchCsvHeader << '\n';
    for (const auto &r : rows) {
        out << r.n << ',' << r.depth << ','
            << (r.runtime_s ? detail::format_fixed(*r.runtime_s, 9) : "") << ','
            << to_string(r.backend) << ',' << (r.fusion ? "true" : "false")
            << '\n';
    }
    return out.str();
}

} // namespace qstack
