#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qstack/circuit.hpp"
#include "qstack/detail/text.hpp"
#include "qstack/simulator.hpp"
#include "qstack/statevector.hpp"

namespace qstack {

/// {"<bitstring>": count, ..., "shots": total} on one line, keys sorted.
inline std::string counts_json(const Counts &counts) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto &[key, n] : counts.histogram) {
        j[key] = n;
    }
    j["shots"] = counts.shots;
    return j.dump();
}

/// Per-shot classical registers as a list of lists of 0/1, each inner list
/// in classical-bit index order.
inline std::string shot_lists_json(const Circuit &circuit, const RunConfig &cfg) {
    nlohmann::json j = nlohmann::json::array();
    run_shots(circuit, cfg,
              [&](std::uint64_t, std::span<const std::uint8_t> bits) {
                  nlohmann::json row = nlohmann::json::array();
                  for (std::uint8_t b : bits) {
                      row.push_back(static_cast<int>(b));
                  }
                  j.push_back(std::move(row));
              });
    return j.dump();
}

/// "index,re,im" header then one row per amplitude, shortest round-trip
/// decimal text.
inline std::string amplitudes_csv(const StateVector &state) {
    std::string out = "index,re,im\n";
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += detail::format_double(amps[i].real());
        out += ',';
        out += detail::format_double(amps[i].imag());
        out += '\n';
    }
    return out;
}

/// Aligned "key: value" lines.
inline std::string resources_text(const ResourceReport &r) {
    std::vector<std::pair<std::string, std::size_t>> lines;
    for (const auto &[name, n] : r.gate_counts) {
        lines.emplace_back("gate." + name, n);
    }
    lines.emplace_back("gates", r.total_gates());
    lines.emplace_back("conditionals", r.conditional_count);
    lines.emplace_back("measurements", r.measurement_count);
    lines.emplace_back("resets", r.reset_count);
    lines.emplace_back("depth", r.depth);
    std::size_t width = 0;
    for (const auto &[k, v] : lines) {
        width = std::max(width, k.size());
    }
    std::ostringstream out;
    for (const auto &[k, v] : lines) {
        out << k << ':' << std::string(width - k.size() + 1, ' ') << v << '\n';
    }
    return out.str();
}

inline std::string resources_json(const ResourceReport &r) {
    nlohmann::ordered_json j;
    j["gate_counts"] = nlohmann::ordered_json::object();
    for (const auto &[name, n] : r.gate_counts) {
        j["gate_counts"][name] = n;
    }
    j["conditional_count"] = r.conditional_count;
    j["measurement_count"] = r.measurement_count;
    j["reset_count"] = r.reset_count;
    j["depth"] = r.depth;
    return j.dump();
}

} // namespace qstack
