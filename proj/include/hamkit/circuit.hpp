// Copyright 2026 The hamkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Composite algorithm description: a table of reusable definitions whose
 * bodies hold primitive gates and calls. A call may repeat its callee and may
 * add one control qubit; only one instance of each definition is stored no
 * matter how often it is used.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "pauli.hpp"

namespace hamkit {

/// Largest flattened gate list `flatten` will materialize by default.
inline constexpr std::uint64_t kFlattenCap = 10'000'000;

enum class GateKind {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    CX,
    CZ,
    T,
    Tdg,
    Rz,
    PauliRotation,
};

inline constexpr std::string_view gate_name(GateKind k) noexcept {
    constexpr std::string_view names[] = {"H", "S",  "Sdg", "X",  "Y",  "Z",
                                          "CX", "CZ", "T",  "Tdg", "Rz",
                                          "PauliRotation"};
    return names[static_cast<int>(k)];
}

inline std::optional<GateKind> gate_from_name(std::string_view name) noexcept {
    for (int k = 0; k <= static_cast<int>(GateKind::PauliRotation); ++k) {
        if (gate_name(static_cast<GateKind>(k)) == name) {
            return static_cast<GateKind>(k);
        }
    }
    return std::nullopt;
}

/**
 * @brief Primitive gate.
 *
 * CX/CZ take (control, target). Rz(angle) = exp(-i angle/2 Z). A
 * PauliRotation applies exp(-i angle/2 P) where P has letter `paulis[k]` on
 * `qubits[k]`; identity letters are never stored, so an empty support is a
 * global phase.
 */
struct Gate {
    GateKind kind = GateKind::H;
    std::vector<std::size_t> qubits;
    double angle = 0.0;
    std::vector<Pauli> paulis;

    [[nodiscard]] static Gate single(GateKind k, std::size_t q) {
        return {k, {q}, 0.0, {}};
    }
    [[nodiscard]] static Gate cx(std::size_t c, std::size_t t) {
        return {GateKind::CX, {c, t}, 0.0, {}};
    }
    [[nodiscard]] static Gate cz(std::size_t c, std::size_t t) {
        return {GateKind::CZ, {c, t}, 0.0, {}};
    }
    [[nodiscard]] static Gate rz(std::size_t q, double angle) {
        return {GateKind::Rz, {q}, angle, {}};
    }
    /// Rotation about `s`, with letter k of `s` placed on qubit offset + k.
    [[nodiscard]] static Gate pauli_rotation(const PauliString &s, double angle,
                                             std::size_t offset = 0) {
        Gate g{GateKind::PauliRotation, {}, angle, {}};
        for (std::size_t q = 0; q < s.size(); ++q) {
            if (s[q] != Pauli::I) {
                g.qubits.push_back(offset + q);
                g.paulis.push_back(s[q]);
            }
        }
        return g;
    }

    friend bool operator==(const Gate &, const Gate &) = default;
};

[[nodiscard]] inline std::size_t gate_arity(GateKind k) noexcept {
    switch (k) {
    case GateKind::CX:
    case GateKind::CZ:
        return 2;
    case GateKind::PauliRotation:
        return 0; // variable
    default:
        return 1;
    }
}

using DefinitionId = std::size_t;

struct Call {
    DefinitionId callee = 0;
    std::uint64_t repeat = 1;
    std::vector<std::size_t> controls;

    friend bool operator==(const Call &, const Call &) = default;
};

using Node = std::variant<Gate, Call>;

struct Definition {
    std::string name;
    std::vector<Node> body;
};

/**
 * @brief Lowering of a primitive gate under one control qubit.
 *
 * Every sequence is exact up to a global phase. The resource tables in
 * resources.hpp are kept consistent with these sequences by tests.
 */
[[nodiscard]] inline std::vector<Gate> lower_controlled(const Gate &g,
                                                        std::size_t c) {
    using K = GateKind;
    auto one = [](K k, std::size_t q) { return Gate::single(k, q); };
    // controlled phase diag(1, e^{i phi}) on (c, t), up to global phase
    auto cphase = [&](std::size_t t, double phi) {
        return std::vector<Gate>{Gate::rz(c, phi / 2), Gate::rz(t, phi / 2),
                                 Gate::cx(c, t), Gate::rz(t, -phi / 2),
                                 Gate::cx(c, t)};
    };
    constexpr double pi = std::numbers::pi;
    switch (g.kind) {
    case K::X:
        return {Gate::cx(c, g.qubits[0])};
    case K::Z:
        return {Gate::cz(c, g.qubits[0])};
    case K::Y: {
        const auto t = g.qubits[0];
        return {one(K::Sdg, t), Gate::cx(c, t), one(K::S, t)};
    }
    case K::H: {
        const auto t = g.qubits[0];
        return {one(K::S, t),   one(K::H, t), one(K::T, t),  Gate::cx(c, t),
                one(K::Tdg, t), one(K::H, t), one(K::Sdg, t)};
    }
    case K::S:
    case K::Sdg: {
        const auto t = g.qubits[0];
        const K fwd = g.kind == K::S ? K::T : K::Tdg;
        const K inv = g.kind == K::S ? K::Tdg : K::T;
        return {one(fwd, c), one(fwd, t), Gate::cx(c, t), one(inv, t),
                Gate::cx(c, t)};
    }
    case K::T:
        return cphase(g.qubits[0], pi / 4);
    case K::Tdg:
        return cphase(g.qubits[0], -pi / 4);
    case K::Rz: {
        const auto t = g.qubits[0];
        return {Gate::rz(t, g.angle / 2), Gate::cx(c, t),
                Gate::rz(t, -g.angle / 2), Gate::cx(c, t)};
    }
    case K::CX:
    case K::CZ: {
        // Toffoli / CCZ with controls (c, a) and target b
        const auto a = g.qubits[0];
        const auto b = g.qubits[1];
        std::vector<Gate> seq;
        if (g.kind == K::CX) {
            seq.push_back(one(K::H, b));
        }
        const std::vector<Gate> core = {
            Gate::cx(a, b), one(K::Tdg, b), Gate::cx(c, b), one(K::T, b),
            Gate::cx(a, b), one(K::Tdg, b), Gate::cx(c, b), one(K::T, a),
            one(K::T, b)};
        seq.insert(seq.end(), core.begin(), core.end());
        if (g.kind == K::CX) {
            seq.push_back(one(K::H, b));
        }
        seq.insert(seq.end(),
                   {Gate::cx(c, a), one(K::T, c), one(K::Tdg, a), Gate::cx(c, a)});
        return seq;
    }
    case K::PauliRotation: {
        if (g.qubits.empty()) {
            // exp(-i angle/2) on the control's |1> branch
            return {Gate::rz(c, -g.angle / 2)};
        }
        std::vector<Gate> seq;
        for (std::size_t k = 0; k < g.qubits.size(); ++k) {
            if (g.paulis[k] == Pauli::X) {
                seq.push_back(one(K::H, g.qubits[k]));
            } else if (g.paulis[k] == Pauli::Y) {
                seq.push_back(one(K::Sdg, g.qubits[k]));
                seq.push_back(one(K::H, g.qubits[k]));
            }
        }
        for (std::size_t k = 0; k + 1 < g.qubits.size(); ++k) {
            seq.push_back(Gate::cx(g.qubits[k], g.qubits[k + 1]));
        }
        const auto t = g.qubits.back();
        seq.insert(seq.end(), {Gate::rz(t, g.angle / 2), Gate::cx(c, t),
                               Gate::rz(t, -g.angle / 2), Gate::cx(c, t)});
        for (std::size_t k = g.qubits.size() - 1; k > 0; --k) {
            seq.push_back(Gate::cx(g.qubits[k - 1], g.qubits[k]));
        }
        for (std::size_t k = 0; k < g.qubits.size(); ++k) {
            if (g.paulis[k] == Pauli::X) {
                seq.push_back(one(K::H, g.qubits[k]));
            } else if (g.paulis[k] == Pauli::Y) {
                seq.push_back(one(K::H, g.qubits[k]));
                seq.push_back(one(K::S, g.qubits[k]));
            }
        }
        return seq;
    }
    }
    throw InvariantError("algo-ir", "unknown gate kind");
}

/**
 * @brief Definition table plus a root, over a fixed number of qubits.
 *
 * A body may only call definitions that already exist, so the call graph is a
 * DAG by construction. Names are unique and are what the canonical
 * serialization refers to.
 */
class AlgorithmGraph {
  public:
    explicit AlgorithmGraph(std::size_t width = 0) : width_(width) {}

    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t size() const noexcept { return defs_.size(); }
    [[nodiscard]] const Definition &definition(DefinitionId id) const {
        if (id >= defs_.size()) {
            throw InputError("algo-ir",
                             "unknown definition id " + std::to_string(id));
        }
        return defs_[id];
    }
    [[nodiscard]] const std::vector<Definition> &definitions() const noexcept {
        return defs_;
    }
    [[nodiscard]] std::optional<DefinitionId>
    find(std::string_view name) const {
        for (DefinitionId id = 0; id < defs_.size(); ++id) {
            if (defs_[id].name == name) {
                return id;
            }
        }
        return std::nullopt;
    }

    /// Qubits touched by a definition, including controls of nested calls.
    [[nodiscard]] const std::vector<std::size_t> &
    footprint(DefinitionId id) const {
        return footprints_.at(id);
    }
    /// True when the definition contains a controlled call at any depth.
    [[nodiscard]] bool has_controls(DefinitionId id) const {
        return controlled_.at(id);
    }

    DefinitionId add_definition(std::string name, std::vector<Node> body) {
        const DefinitionId id = defs_.size();
        if (name.empty()) {
            throw InputError("algo-ir", "definition name must be non-empty");
        }
        if (find(name)) {
            throw InputError("algo-ir", "duplicate definition '" + name + "'");
        }
        std::vector<bool> touched(width_, false);
        bool controlled = false;
        auto touch = [&](std::size_t q) {
            if (q >= width_) {
                throw InputError("algo-ir", "qubit " + std::to_string(q) +
                                                " out of range in '" + name +
                                                "' (width " +
                                                std::to_string(width_) + ")");
            }
            touched[q] = true;
        };
        for (const Node &node : body) {
            if (const auto *g = std::get_if<Gate>(&node)) {
                check_gate(*g, name);
                for (auto q : g->qubits) {
                    touch(q);
                }
                continue;
            }
            const auto &call = std::get<Call>(node);
            if (call.callee == id) {
                throw InputError("algo-ir",
                                 "cycle detected: '" + name + "' calls itself");
            }
            if (call.callee > id) {
                throw InputError("algo-ir", "dangling reference to definition " +
                                                std::to_string(call.callee) +
                                                " in '" + name + "'");
            }
            if (call.repeat == 0) {
                throw InputError("algo-ir", "repeat must be >= 1 in '" + name +
                                                "'");
            }
            if (call.controls.size() > 1) {
                throw InputError("algo-ir",
                                 "at most one control per call is supported");
            }
            if (!call.controls.empty() && controlled_[call.callee]) {
                throw InputError("algo-ir",
                                 "nested controls are not supported: '" +
                                     defs_[call.callee].name +
                                     "' already contains a controlled call");
            }
            const auto &fp = footprints_[call.callee];
            for (auto c : call.controls) {
                if (std::binary_search(fp.begin(), fp.end(), c)) {
                    throw InputError("algo-ir",
                                     "control qubit " + std::to_string(c) +
                                         " overlaps the footprint of '" +
                                         defs_[call.callee].name + "'");
                }
                touch(c);
                controlled = true;
            }
            for (auto q : fp) {
                touch(q);
            }
            controlled = controlled || controlled_[call.callee];
        }
        std::vector<std::size_t> fp;
        for (std::size_t q = 0; q < width_; ++q) {
            if (touched[q]) {
                fp.push_back(q);
            }
        }
        defs_.push_back({std::move(name), std::move(body)});
        footprints_.push_back(std::move(fp));
        controlled_.push_back(controlled);
        return id;
    }

    void set_root(DefinitionId id) {
        if (id >= defs_.size()) {
            throw InputError("algo-ir",
                             "root refers to unknown definition " +
                                 std::to_string(id));
        }
        root_ = id;
    }
    [[nodiscard]] bool has_root() const noexcept { return root_.has_value(); }
    [[nodiscard]] DefinitionId root() const {
        if (!root_) {
            throw InputError("algo-ir", "graph has no root");
        }
        return *root_;
    }

  private:
    void check_gate(const Gate &g, const std::string &owner) const {
        const std::size_t arity = gate_arity(g.kind);
        if (g.kind == GateKind::PauliRotation) {
            if (g.paulis.size() != g.qubits.size() ||
                std::any_of(g.paulis.begin(), g.paulis.end(),
                            [](Pauli p) { return p == Pauli::I; })) {
                throw InputError("algo-ir", "malformed PauliRotation in '" +
                                                owner + "'");
            }
        } else if (g.qubits.size() != arity) {
            throw InputError("algo-ir", std::string(gate_name(g.kind)) +
                                            " expects " + std::to_string(arity) +
                                            " qubits in '" + owner + "'");
        }
        auto sorted = g.qubits;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw InputError("algo-ir", "repeated qubit in " +
                                            std::string(gate_name(g.kind)) +
                                            " in '" + owner + "'");
        }
        if (!std::isfinite(g.angle)) {
            throw InputError("algo-ir", "non-finite angle in '" + owner + "'");
        }
    }

    std::size_t width_;
    std::vector<Definition> defs_;
    std::vector<std::vector<std::size_t>> footprints_;
    std::vector<bool> controlled_;
    std::optional<DefinitionId> root_;
};

namespace detail {

[[nodiscard]] inline std::uint64_t saturating_mul(std::uint64_t a,
                                                  std::uint64_t b) noexcept {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
        return std::numeric_limits<std::uint64_t>::max();
    }
    return a * b;
}

[[nodiscard]] inline std::uint64_t saturating_add(std::uint64_t a,
                                                  std::uint64_t b) noexcept {
    return (b > std::numeric_limits<std::uint64_t>::max() - a)
               ? std::numeric_limits<std::uint64_t>::max()
               : a + b;
}

/// Flattened length of each (definition, controlled) pair, saturating.
class FlatSizer {
  public:
    explicit FlatSizer(const AlgorithmGraph &g) : g_(g) {}

    std::uint64_t size(DefinitionId id, bool controlled) {
        const auto key = 2 * id + (controlled ? 1 : 0);
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        std::uint64_t total = 0;
        for (const Node &node : g_.definition(id).body) {
            if (const auto *gate = std::get_if<Gate>(&node)) {
                total = saturating_add(
                    total, controlled ? lower_controlled(*gate, 0).size() : 1);
            } else {
                const auto &call = std::get<Call>(node);
                const bool inner = controlled || !call.controls.empty();
                total = saturating_add(
                    total, saturating_mul(call.repeat, size(call.callee, inner)));
            }
        }
        memo_[key] = total;
        return total;
    }

  private:
    const AlgorithmGraph &g_;
    std::unordered_map<std::size_t, std::uint64_t> memo_;
};

} // namespace detail

/// Number of primitive gates `flatten` would produce (saturating).
[[nodiscard]] inline std::uint64_t flattened_size(const AlgorithmGraph &g) {
    detail::FlatSizer sizer(g);
    return sizer.size(g.root(), false);
}

/**
 * @brief Visits the primitive gates of `id` in execution order.
 *
 * Repeats are unrolled and a control is distributed onto each callee gate via
 * `lower_controlled`. Shared by `flatten` and the simulator.
 */
template <class Visitor>
void for_each_gate(const AlgorithmGraph &g, DefinitionId id,
                   std::optional<std::size_t> control, Visitor &&visit) {
    for (const Node &node : g.definition(id).body) {
        if (const auto *gate = std::get_if<Gate>(&node)) {
            if (control) {
                for (const Gate &lowered : lower_controlled(*gate, *control)) {
                    visit(lowered);
                }
            } else {
                visit(*gate);
            }
            continue;
        }
        const auto &call = std::get<Call>(node);
        const std::optional<std::size_t> inner =
            call.controls.empty() ? control
                                  : std::optional<std::size_t>(call.controls[0]);
        for (std::uint64_t k = 0; k < call.repeat; ++k) {
            for_each_gate(g, call.callee, inner, visit);
        }
    }
}

[[nodiscard]] inline std::vector<Gate> flatten(const AlgorithmGraph &g,
                                               std::uint64_t cap = kFlattenCap) {
    const std::uint64_t n = flattened_size(g);
    if (n > cap) {
        throw CapExceeded("algo-ir", "flatten: " + std::to_string(n) +
                                         " gates exceeds cap of " +
                                         std::to_string(cap));
    }
    std::vector<Gate> out;
    out.reserve(static_cast<std::size_t>(n));
    for_each_gate(g, g.root(), std::nullopt,
                  [&out](const Gate &gate) { out.push_back(gate); });
    return out;
}

} // namespace hamkit
