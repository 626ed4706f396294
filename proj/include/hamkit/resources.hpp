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
 * Memoized Clifford+T resource estimation over algorithm graphs.
 *
 * Counting is two-phase: a structural pass tallies Clifford, T and
 * pre-synthesis rotation gates (each definition analyzed once per control
 * arity), then rotations are converted to T gates with a synthesis model.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>

#include <boost/multiprecision/cpp_int.hpp>

#include "circuit.hpp"
#include "errors.hpp"

namespace hamkit {

using BigInt = boost::multiprecision::cpp_int;

struct ResourceCounts {
    BigInt clifford = 0;
    BigInt t_gates = 0;
    BigInt rotations = 0;
    std::uint64_t qubits = 0;

    ResourceCounts &operator+=(const ResourceCounts &o) {
        clifford += o.clifford;
        t_gates += o.t_gates;
        rotations += o.rotations;
        return *this;
    }
    friend ResourceCounts operator*(const ResourceCounts &c, const BigInt &k) {
        ResourceCounts out = c;
        out.clifford *= k;
        out.t_gates *= k;
        out.rotations *= k;
        return out;
    }
    friend bool operator==(const ResourceCounts &, const ResourceCounts &) = default;
};

/// T gates per synthesized Rz at tolerance eps: ceil(a + b log2(1/eps)).
struct SynthesisModel {
    std::uint64_t a = 10;
    double b = 4.0;

    [[nodiscard]] std::uint64_t t_per_rotation(double log2_inv_eps) const {
        const double v = std::ceil(static_cast<double>(a) + b * log2_inv_eps);
        return v <= 0.0 ? 0 : static_cast<std::uint64_t>(v);
    }
};

namespace detail {

inline ResourceCounts counts(std::uint64_t clifford, std::uint64_t t,
                             std::uint64_t rot) {
    return {clifford, t, rot, 0};
}

inline std::uint64_t basis_change_cliffords(const Gate &g) {
    std::uint64_t c = 0;
    for (Pauli p : g.paulis) {
        c += p == Pauli::X ? 2 : (p == Pauli::Y ? 4 : 0);
    }
    return c;
}

/// log2 of a positive big integer, accurate to double precision.
inline double log2_big(const BigInt &v) {
    const std::size_t msb = boost::multiprecision::msb(v);
    if (msb < 53) {
        return std::log2(v.convert_to<double>());
    }
    const BigInt top = v >> (msb - 52);
    return std::log2(top.convert_to<double>()) + static_cast<double>(msb - 52);
}

} // namespace detail

/**
 * @brief Fixed lowering table for one primitive gate, bare or with one
 * control.
 *
 * | gate           | bare                          | controlled               |
 * |----------------|-------------------------------|--------------------------|
 * | X, Z           | 1 C                           | 1 C (CX / CZ)            |
 * | Y              | 1 C                           | 3 C                      |
 * | H              | 1 C                           | 5 C + 2 T                |
 * | S, Sdg         | 1 C                           | 2 C + 3 T                |
 * | CX             | 1 C                           | 8 C + 7 T (Toffoli)      |
 * | CZ             | 1 C                           | 6 C + 7 T                |
 * | T, Tdg         | 1 T                           | 2 C + 3 R                |
 * | Rz             | 1 R                           | 2 C + 2 R                |
 * | PauliRot, w>=1 | B + 2(w-1) C + 1 R            | B + 2(w-1) C + 2 C + 2 R |
 * | PauliRot, w=0  | nothing (global phase)        | 1 R on the control       |
 *
 * C = Clifford, T = T/Tdg, R = pre-synthesis rotation, B = 2 per X letter
 * plus 4 per Y letter.
 */
[[nodiscard]] inline ResourceCounts lower_gate(const Gate &g, bool controlled) {
    using K = GateKind;
    using detail::counts;
    switch (g.kind) {
    case K::X:
    case K::Z:
        return counts(1, 0, 0);
    case K::Y:
        return controlled ? counts(3, 0, 0) : counts(1, 0, 0);
    case K::H:
        return controlled ? counts(5, 2, 0) : counts(1, 0, 0);
    case K::S:
    case K::Sdg:
        return controlled ? counts(2, 3, 0) : counts(1, 0, 0);
    case K::CX:
        return controlled ? counts(8, 7, 0) : counts(1, 0, 0);
    case K::CZ:
        return controlled ? counts(6, 7, 0) : counts(1, 0, 0);
    case K::T:
    case K::Tdg:
        return controlled ? counts(2, 0, 3) : counts(0, 1, 0);
    case K::Rz:
        return controlled ? counts(2, 0, 2) : counts(0, 0, 1);
    case K::PauliRotation: {
        const std::uint64_t w = g.qubits.size();
        if (w == 0) {
            return controlled ? counts(0, 0, 1) : counts(0, 0, 0);
        }
        const std::uint64_t cl = detail::basis_change_cliffords(g) + 2 * (w - 1);
        return controlled ? counts(cl + 2, 0, 2) : counts(cl, 0, 1);
    }
    }
    throw InvariantError("resource-analysis", "unknown gate kind");
}

/// Counts after converting rotations to T gates.
struct ResourceEstimate {
    ResourceCounts structural; ///< pre-synthesis
    ResourceCounts total;      ///< t_gates includes synthesized rotations
    double rotation_tolerance = 0.0;
    std::uint64_t t_per_rotation = 0;
};

/**
 * @brief Structural counter with a per-(definition, control arity) cache.
 *
 * `analyses()` reports how many cache fills happened, which is the
 * instrumentation hook used to show that repeat counts never drive work.
 */
class ResourceCounter {
  public:
    explicit ResourceCounter(const AlgorithmGraph &g) : g_(g) {}

    [[nodiscard]] ResourceCounts structural() {
        ResourceCounts out = analyze(g_.root(), false);
        out.qubits = g_.width();
        return out;
    }

    [[nodiscard]] std::size_t analyses() const noexcept { return fills_; }
    [[nodiscard]] std::size_t analyses_of(DefinitionId id,
                                          bool controlled) const {
        auto it = per_key_.find({id, controlled});
        return it == per_key_.end() ? 0 : it->second;
    }

  private:
    const ResourceCounts &analyze(DefinitionId id, bool controlled) {
        const std::pair<DefinitionId, bool> key{id, controlled};
        if (auto it = cache_.find(key); it != cache_.end()) {
            return it->second;
        }
        ResourceCounts total;
        for (const Node &node : g_.definition(id).body) {
            if (const auto *gate = std::get_if<Gate>(&node)) {
                total += lower_gate(*gate, controlled);
            } else {
                const auto &call = std::get<Call>(node);
                const bool inner = controlled || !call.controls.empty();
                total += analyze(call.callee, inner) * BigInt(call.repeat);
            }
        }
        ++fills_;
        ++per_key_[key];
        return cache_.emplace(key, std::move(total)).first->second;
    }

    const AlgorithmGraph &g_;
    std::map<std::pair<DefinitionId, bool>, ResourceCounts> cache_;
    std::map<std::pair<DefinitionId, bool>, std::size_t> per_key_;
    std::size_t fills_ = 0;
};

/// Structural counts of an explicit gate list (the flatten oracle).
[[nodiscard]] inline ResourceCounts count_gates(std::span<const Gate> gates) {
    ResourceCounts out;
    for (const Gate &g : gates) {
        out += lower_gate(g, false);
    }
    return out;
}

/**
 * Converts structural counts to a Clifford+T estimate, splitting
 * `synthesis_budget` equally over every rotation instance.
 */
[[nodiscard]] inline ResourceEstimate
synthesize(const ResourceCounts &structural, const SynthesisModel &model,
           double synthesis_budget) {
    ResourceEstimate est{structural, structural, 0.0, 0};
    if (structural.rotations == 0) {
        return est;
    }
    if (!(synthesis_budget > 0.0)) {
        throw InputError("resource-analysis",
                         "synthesis budget must be positive");
    }
    const double log2_inv =
        detail::log2_big(structural.rotations) - std::log2(synthesis_budget);
    est.rotation_tolerance = std::exp2(-log2_inv);
    est.t_per_rotation = model.t_per_rotation(log2_inv);
    est.total.t_gates += structural.rotations * BigInt(est.t_per_rotation);
    return est;
}

[[nodiscard]] inline ResourceEstimate count(const AlgorithmGraph &g,
                                            const SynthesisModel &model,
                                            double synthesis_budget) {
    ResourceCounter counter(g);
    return synthesize(counter.structural(), model, synthesis_budget);
}

} // namespace hamkit
