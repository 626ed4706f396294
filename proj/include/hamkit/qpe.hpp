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
 * Phase estimation and (controlled) time evolution around a Trotter
 * encoding, with automatic choice of evolution time and register size.
 *
 * Conventions: U = exp(-i (H + shift) t). Phase qubits sit at graph qubits
 * 0 .. m-1 with phase qubit j controlling U^(2^j); data qubits follow. An
 * outcome k (phase qubit j contributing 2^j) estimates theta = k / 2^m and
 * the energy E = 2 pi theta / t - shift.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "errors.hpp"
#include "pauli.hpp"
#include "resources.hpp"
#include "statevector.hpp"
#include "trotter.hpp"

namespace hamkit {

/// Relative guard band between the shifted spectrum and the phase wrap.
inline constexpr double kTimeMargin = 1e-3;

/// Energy-error budget fractions; must sum to 1.
struct BudgetSplit {
    double trotter = 1.0 / 3.0;
    double discretization = 1.0 / 3.0;
    double synthesis = 1.0 / 3.0;

    void validate() const {
        if (trotter < 0 || discretization <= 0 || synthesis < 0 ||
            std::abs(trotter + discretization + synthesis - 1.0) > 1e-9) {
            throw InputError("qpe-builder",
                             "budget split must be nonnegative and sum to 1");
        }
    }
};

struct TimeWindow {
    double time = 0.0;
    double shift = 0.0;
};

/// shift = lambda moves the spectrum into [0, 2 lambda]; t = pi / (lambda
/// (1 + margin)) keeps every shifted phase in [0, 1).
[[nodiscard]] inline TimeWindow derive_time_naive(const PauliSum &h) {
    if (!h.is_hermitian()) {
        throw InputError("qpe-builder", "Hamiltonian must be Hermitian");
    }
    const double lambda = coeff_one_norm(h);
    if (!(lambda > 0.0)) {
        throw InputError("qpe-builder",
                         "Hamiltonian has zero coefficient norm");
    }
    return {std::numbers::pi / (lambda * (1.0 + kTimeMargin)), lambda};
}

struct PhaseBits {
    std::size_t precision = 0; ///< n_prec
    std::size_t confidence = 0; ///< a_extra
    std::size_t total = 0;      ///< m
};

/// n_prec = ceil(log2(2 pi / (t eps))), a_extra = ceil(log2(2 + 1/(2 delta))).
[[nodiscard]] inline PhaseBits derive_phase_qubits(double t, double energy_error,
                                                   double failure_probability) {
    if (!(t > 0.0) || !(energy_error > 0.0) || !(failure_probability > 0.0) ||
        !(failure_probability < 1.0)) {
        throw InputError("qpe-builder",
                         "phase-qubit derivation needs t, eps > 0 and 0 < delta < 1");
    }
    const double prec =
        std::ceil(std::log2(2.0 * std::numbers::pi / (t * energy_error)));
    const double conf =
        std::ceil(std::log2(2.0 + 1.0 / (2.0 * failure_probability)));
    PhaseBits bits;
    bits.precision = prec > 0.0 ? static_cast<std::size_t>(prec) : 0;
    bits.confidence = static_cast<std::size_t>(conf);
    bits.total = bits.precision + bits.confidence;
    return bits;
}

/// User-facing constraints plus optional pinned parameters.
struct QpeOptions {
    double energy_error = 1e-2;
    double failure_probability = 0.1;
    BudgetSplit split;
    std::optional<TrotterOrder> order;
    OrderingStrategy ordering;
    SynthesisModel synthesis;
    std::optional<double> evolution_time;
    std::optional<std::size_t> phase_qubits;
    std::optional<std::uint64_t> steps;
};

struct QpeParams {
    PhaseBits bits;
    double time = 0.0;
    double shift = 0.0;
    double energy_error = 0.0;
    double failure_probability = 0.0;
    BudgetSplit split;
    TrotterPlan plan;            ///< encodes H + shift
    bool aliasing_safe = true;   ///< shifted spectrum window times t < 2 pi
    std::size_t candidates = 0;  ///< evolution times evaluated
    ResourceEstimate resources;  ///< of the selected QPE circuit
};

/// h + shift * I, with the identity merged into an existing identity term.
[[nodiscard]] inline PauliSum shifted(const PauliSum &h, double shift) {
    PauliSum out = h;
    out.add(shift, PauliString(h.num_qubits()));
    return out.simplify();
}

inline constexpr std::size_t kMaxPhaseQubits = 62;

namespace detail {

/// Fourier readout on phase qubits 0..m-1: maps sum_x e^{-2 pi i theta x}|x>
/// to a peak at |theta 2^m>, with qubit j as bit 2^j. Controlled phases are
/// lowered to Rz + CX; the final reversal uses CX swaps.
inline DefinitionId add_phase_readout(AlgorithmGraph &g, std::size_t m) {
    std::vector<Node> body;
    for (std::size_t a = m; a-- > 0;) {
        body.emplace_back(Gate::single(GateKind::H, a));
        for (std::size_t b = a; b-- > 0;) {
            const double phi =
                2.0 * std::numbers::pi / std::ldexp(1.0, static_cast<int>(a - b + 1));
            body.emplace_back(Gate::rz(b, phi / 2));
            body.emplace_back(Gate::rz(a, phi / 2));
            body.emplace_back(Gate::cx(b, a));
            body.emplace_back(Gate::rz(a, -phi / 2));
            body.emplace_back(Gate::cx(b, a));
        }
    }
    for (std::size_t a = 0; a < m / 2; ++a) {
        const std::size_t b = m - 1 - a;
        body.emplace_back(Gate::cx(a, b));
        body.emplace_back(Gate::cx(b, a));
        body.emplace_back(Gate::cx(a, b));
    }
    return g.add_definition("phase_readout", std::move(body));
}

} // namespace detail

/**
 * @brief Textbook phase estimation: Hadamards, controlled U^(2^j) on phase
 * qubit j as a repeated call, then the Fourier readout.
 *
 * The definition table holds one step, one U and one readout regardless of m.
 */
[[nodiscard]] inline AlgorithmGraph build_qpe(const TrotterPlan &plan,
                                              std::size_t m) {
    if (m == 0 || m > kMaxPhaseQubits) {
        throw InputError("qpe-builder", "phase register size must be in 1.." +
                                            std::to_string(kMaxPhaseQubits));
    }
    const std::size_t n = plan.term_sequence.num_qubits();
    AlgorithmGraph g(m + n);
    const auto u = add_trotter(g, plan, m);
    const auto readout = detail::add_phase_readout(g, m);
    std::vector<Node> body;
    for (std::size_t j = 0; j < m; ++j) {
        body.emplace_back(Gate::single(GateKind::H, j));
    }
    for (std::size_t j = 0; j < m; ++j) {
        body.emplace_back(Call{u, std::uint64_t{1} << j, {j}});
    }
    body.emplace_back(Call{readout, 1, {}});
    g.set_root(g.add_definition("phase_estimation", std::move(body)));
    return g;
}

[[nodiscard]] inline AlgorithmGraph build_qpe(const QpeParams &params) {
    return build_qpe(params.plan, params.bits.total);
}

/// Pure evolution is the Trotter graph; controlled evolution adds an
/// ancilla as qubit 0 controlling the whole of U(t).
[[nodiscard]] inline AlgorithmGraph build_time_evolution(const TrotterPlan &plan,
                                                         bool controlled) {
    if (!controlled) {
        return build_trotter(plan);
    }
    AlgorithmGraph g(plan.term_sequence.num_qubits() + 1);
    const auto u = add_trotter(g, plan, 1);
    g.set_root(
        g.add_definition("controlled_evolution", {Node{Call{u, 1, {0}}}}));
    return g;
}

/**
 * @brief Chooses the evolution time minimizing total T-count.
 *
 * Candidates form a 25-point geometric grid over [t_naive/8, 8 t_naive];
 * those above the aliasing-safe t_naive are dropped. For each candidate the
 * energy budget is split: Trotter operator budget split.trotter * eps * t,
 * phase resolution split.discretization * eps, and synthesis budget
 * split.synthesis * eps * t for the whole circuit. Ties prefer smaller t,
 * then first order. Pinned options bypass their derivation.
 */
[[nodiscard]] inline QpeParams optimize_time(const PauliSum &h,
                                             const QpeOptions &opt) {
    opt.split.validate();
    if (!(opt.energy_error > 0.0)) {
        throw InputError("qpe-builder", "energy error must be positive");
    }
    const TimeWindow naive = derive_time_naive(h);
    const PauliSum target = shifted(h, naive.shift);
    TrotterBound bound(apply_ordering(target, opt.ordering));

    std::vector<double> times;
    if (opt.evolution_time) {
        if (!(*opt.evolution_time > 0.0)) {
            throw InputError("qpe-builder", "evolution time must be positive");
        }
        times.push_back(*opt.evolution_time);
    } else {
        for (int i = 0; i < 12; ++i) {
            times.push_back(naive.time * std::pow(8.0, (i - 12) / 12.0));
        }
        times.push_back(naive.time);
    }
    std::vector<TrotterOrder> orders;
    if (opt.order) {
        orders.push_back(*opt.order);
    } else {
        orders = {TrotterOrder::first, TrotterOrder::second};
    }

    std::optional<QpeParams> best;
    for (double t : times) {
        PhaseBits bits = derive_phase_qubits(
            t, opt.split.discretization * opt.energy_error, opt.failure_probability);
        if (opt.phase_qubits) {
            bits.total = *opt.phase_qubits;
            bits.precision =
                bits.total > bits.confidence ? bits.total - bits.confidence : 0;
        }
        const double trotter_budget = opt.split.trotter * opt.energy_error * t;
        const double synth_budget = opt.split.synthesis * opt.energy_error * t;
        for (TrotterOrder order : orders) {
            std::uint64_t steps = 0;
            if (opt.steps) {
                steps = *opt.steps;
            } else if (trotter_budget > 0.0) {
                steps = bound.min_steps(order, t, trotter_budget);
            } else {
                throw InputError("qpe-builder",
                                 "zero Trotter budget requires pinned steps");
            }
            if (steps == 0) {
                throw InputError("qpe-builder", "Trotter steps must be >= 1");
            }
            TrotterPlan plan =
                plan_for(bound, order, t, steps, opt.ordering, trotter_budget);
            if (opt.steps) {
                plan.budget = 0.0;
            }
            const auto est =
                count(build_qpe(plan, bits.total), opt.synthesis, synth_budget);
            if (!best || est.total.t_gates < best->resources.total.t_gates) {
                QpeParams p;
                p.bits = bits;
                p.time = t;
                p.shift = naive.shift;
                p.energy_error = opt.energy_error;
                p.failure_probability = opt.failure_probability;
                p.split = opt.split;
                p.plan = std::move(plan);
                p.aliasing_safe = t * 2.0 * naive.shift < 2.0 * std::numbers::pi;
                p.resources = est;
                best = std::move(p);
            }
        }
    }
    best->candidates = times.size();
    return *best;
}

/// Outcome distribution for the parameters' register and time.
[[nodiscard]] inline std::vector<double>
qpe_distribution_analytic(const PauliSum &h, const QpeParams &params,
                          const StateVector &psi0) {
    return qpe_distribution_analytic(h, params.shift, params.time,
                                     params.bits.total, psi0);
}

/// Circular distance between phases a and b in [0, 1).
[[nodiscard]] inline double phase_distance(double a, double b) noexcept {
    double d = std::fmod(std::abs(a - b), 1.0);
    return std::min(d, 1.0 - d);
}

/**
 * Probability mass on outcomes whose phase lies within half a precision bin,
 * 2^-(n_prec+1), of `theta` (distances taken around the phase circle).
 */
[[nodiscard]] inline double success_mass(const std::vector<double> &probs,
                                         double theta, std::size_t precision) {
    const double n = static_cast<double>(probs.size());
    const double window = std::ldexp(1.0, -static_cast<int>(precision) - 1);
    double mass = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (phase_distance(static_cast<double>(k) / n, theta) <=
            window * (1.0 + 1e-12)) {
            mass += probs[k];
        }
    }
    return mass;
}

} // namespace hamkit
