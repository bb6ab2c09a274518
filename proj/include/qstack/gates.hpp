#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qstack/error.hpp"
#include "qstack/matrix.hpp"

namespace qstack {

enum class GateName {
    I,
    X,
    Y,
    Z,
    H,
    S,
    T,
    SqrtX,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    CNOT,
    CZ,
    SWAP,
};

inline constexpr std::array kAllGateNames{
    GateName::I,  GateName::X,  GateName::Y,    GateName::Z,  GateName::H,
    GateName::S,  GateName::T,  GateName::SqrtX, GateName::Rx, GateName::Ry,
    GateName::Rz, GateName::U1, GateName::U2,   GateName::U3, GateName::CNOT,
    GateName::CZ, GateName::SWAP};

inline constexpr std::string_view to_string(GateName name) noexcept {
    switch (name) {
    case GateName::I: return "I";
    case GateName::X: return "X";
    case GateName::Y: return "Y";
    case GateName::Z: return "Z";
    case GateName::H: return "H";
    case GateName::S: return "S";
    case GateName::T: return "T";
    case GateName::SqrtX: return "SqrtX";
    case GateName::Rx: return "Rx";
    case GateName::Ry: return "Ry";
    case GateName::Rz: return "Rz";
    case GateName::U1: return "U1";
    case GateName::U2: return "U2";
    case GateName::U3: return "U3";
    case GateName::CNOT: return "CNOT";
    case GateName::CZ: return "CZ";
    case GateName::SWAP: return "SWAP";
    }
    return "?";
}

/// Case-insensitive lookup of the canonical names returned by to_string.
inline std::optional<GateName> gate_name_from_string(std::string_view text) {
    auto lower = [](char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
    };
    for (GateName name : kAllGateNames) {
        const std::string_view candidate = to_string(name);
        if (candidate.size() != text.size()) {
            continue;
        }
        bool same = true;
        for (std::size_t i = 0; i < text.size() && same; ++i) {
            same = lower(candidate[i]) == lower(text[i]);
        }
        if (same) {
            return name;
        }
    }
    return std::nullopt;
}

inline constexpr std::size_t param_arity(GateName name) noexcept {
    switch (name) {
    case GateName::Rx:
    case GateName::Ry:
    case GateName::Rz:
    case GateName::U1: return 1;
    case GateName::U2: return 2;
    case GateName::U3: return 3;
    default: return 0;
    }
}

inline constexpr std::size_t qubit_arity(GateName name) noexcept {
    switch (name) {
    case GateName::CNOT:
    case GateName::CZ:
    case GateName::SWAP: return 2;
    default: return 1;
    }
}

/// A gate kind together with its angle parameters (radians). Parameters past
/// the kind's arity are always zero, so equality is plain member equality.
class Gate {
  public:
    Gate() = default;

    /// Throws CircuitError when params.size() differs from the kind's arity.
    Gate(GateName name, std::span<const double> params) : name_(name) {
        if (params.size() != param_arity(name)) {
            throw CircuitError("gate " + std::string(to_string(name)) +
                               " takes " + std::to_string(param_arity(name)) +
                               " parameter(s), got " +
                               std::to_string(params.size()));
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            params_[i] = params[i];
        }
    }

    Gate(GateName name, std::initializer_list<double> params)
        : Gate(name, std::span<const double>(params.begin(), params.size())) {}

    explicit Gate(GateName name) : Gate(name, std::span<const double>{}) {}

    [[nodiscard]] GateName name() const noexcept { return name_; }
    [[nodiscard]] std::span<const double> params() const noexcept {
        return {params_.data(), param_arity(name_)};
    }
    [[nodiscard]] double param(std::size_t i) const { return params_.at(i); }
    [[nodiscard]] std::size_t num_qubits() const noexcept {
        return qubit_arity(name_);
    }

    friend bool operator==(const Gate &, const Gate &) = default;

  private:
    GateName name_ = GateName::I;
    std::array<double, 3> params_{};
};

inline Gate rx(double theta) { return Gate(GateName::Rx, {theta}); }
inline Gate ry(double theta) { return Gate(GateName::Ry, {theta}); }
inline Gate rz(double theta) { return Gate(GateName::Rz, {theta}); }
inline Gate u1(double lambda) { return Gate(GateName::U1, {lambda}); }
inline Gate u2(double phi, double lambda) {
    return Gate(GateName::U2, {phi, lambda});
}
inline Gate u3(double theta, double phi, double lambda) {
    return Gate(GateName::U3, {theta, phi, lambda});
}

/// Standard matrix of a gate. Two-qubit matrices index the first operand as
/// the high-order bit: row/col = 2*bit(first) + bit(second).
inline UnitaryMatrix gate_matrix(const Gate &gate) {
    using namespace std::complex_literals;
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    const auto p = gate.params();
    const auto expi = [](double a) { return std::polar(1.0, a); };
    switch (gate.name()) {
    case GateName::I: return UnitaryMatrix::identity(2);
    case GateName::X: return UnitaryMatrix(2, {0.0, 1.0, 1.0, 0.0});
    case GateName::Y: return UnitaryMatrix(2, {0.0, -1i, 1i, 0.0});
    case GateName::Z: return UnitaryMatrix(2, {1.0, 0.0, 0.0, -1.0});
    case GateName::H:
        return UnitaryMatrix(2, {kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2});
    case GateName::S: return UnitaryMatrix(2, {1.0, 0.0, 0.0, 1i});
    case GateName::T:
        return UnitaryMatrix(2, {1.0, 0.0, 0.0, expi(std::numbers::pi / 4)});
    case GateName::SqrtX:
        return UnitaryMatrix(
            2, {0.5 + 0.5i, 0.5 - 0.5i, 0.5 - 0.5i, 0.5 + 0.5i});
    case GateName::Rx: {
        const double c = std::cos(p[0] / 2);
        const double s = std::sin(p[0] / 2);
        return UnitaryMatrix(2, {c, -1i * s, -1i * s, c});
    }
    case GateName::Ry: {
        const double c = std::cos(p[0] / 2);
        const double s = std::sin(p[0] / 2);
        return UnitaryMatrix(2, {c, -s, s, c});
    }
    case GateName::Rz:
        return UnitaryMatrix(2, {expi(-p[0] / 2), 0.0, 0.0, expi(p[0] / 2)});
    case GateName::U1: return UnitaryMatrix(2, {1.0, 0.0, 0.0, expi(p[0])});
    case GateName::U2: {
        const double phi = p[0];
        const double lambda = p[1];
        return UnitaryMatrix(2, {kInvSqrt2, -kInvSqrt2 * expi(lambda),
                                 kInvSqrt2 * expi(phi),
                                 kInvSqrt2 * expi(lambda + phi)});
    }
    case GateName::U3: {
        const double c = std::cos(p[0] / 2);
        const double s = std::sin(p[0] / 2);
        const double phi = p[1];
        const double lambda = p[2];
        return UnitaryMatrix(2, {c, -expi(lambda) * s, expi(phi) * s,
                                 expi(lambda + phi) * c});
    }
    case GateName::CNOT:
        return UnitaryMatrix(4, {1, 0, 0, 0, //
                                 0, 1, 0, 0, //
                                 0, 0, 0, 1, //
                                 0, 0, 1, 0});
    case GateName::CZ:
        return UnitaryMatrix(4, {1, 0, 0, 0, //
                                 0, 1, 0, 0, //
                                 0, 0, 1, 0, //
                                 0, 0, 0, -1});
    case GateName::SWAP:
        return UnitaryMatrix(4, {1, 0, 0, 0, //
                                 0, 0, 1, 0, //
                                 0, 1, 0, 0, //
                                 0, 0, 0, 1});
    }
    throw CircuitError("unknown gate kind");
}

} // namespace qstack
