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
 * First- and second-order product formulas for exp(-i H t).
 *
 * Step counts are derived from commutator-scaling error bounds. With H =
 * sum_g H_g in application order and tails T_g = sum_{g' > g} H_g':
 *
 *   first order   (t^2 / 2r)  sum_g ||[T_g, H_g]||
 *   second order  (t^3 / r^2) [ 1/12 sum_g ||[T_g, [T_g, H_g]]||
 *                             + 1/24 sum_g ||[H_g, [H_g, T_g]]|| ]
 *
 * Each spectral norm is replaced by the coefficient 1-norm of the exactly
 * computed commutator, which keeps the bound an upper bound.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "circuit.hpp"
#include "errors.hpp"
#include "pauli.hpp"
#include "resources.hpp"

namespace hamkit {

/// Second-order bounds cost O(terms^3); larger inputs are refused.
inline constexpr std::size_t kBoundTermCap = 2000;

enum class TrotterOrder { first = 1, second = 2 };

inline std::string_view to_string(TrotterOrder o) noexcept {
    return o == TrotterOrder::first ? "first" : "second";
}

struct OrderingStrategy {
    enum class Kind { as_given, lexicographic, magnitude_descending, random, custom };

    Kind kind = Kind::as_given;
    std::uint64_t seed = 0;                ///< random only
    std::vector<std::size_t> permutation;  ///< custom only: new -> old index

    [[nodiscard]] static OrderingStrategy random(std::uint64_t seed) {
        return {Kind::random, seed, {}};
    }
    [[nodiscard]] static OrderingStrategy custom(std::vector<std::size_t> perm) {
        return {Kind::custom, 0, std::move(perm)};
    }
};

inline std::string_view to_string(OrderingStrategy::Kind k) noexcept {
    using K = OrderingStrategy::Kind;
    switch (k) {
    case K::as_given:
        return "as_given";
    case K::lexicographic:
        return "lexicographic";
    case K::magnitude_descending:
        return "magnitude_descending";
    case K::random:
        return "random";
    case K::custom:
        return "custom";
    }
    return "?";
}

namespace detail {

/// Unbiased integer in [0, bound) from a 64-bit engine, by rejection.
inline std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = 0;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

} // namespace detail

/**
 * @brief Index permutation selected by a strategy (entry i is the index in
 * `h` of the i-th applied term).
 *
 * random: Fisher-Yates driven by std::mt19937_64 seeded with `seed`, drawing
 * j uniformly in [0, i] for i = n-1 down to 1 with rejection sampling. The
 * engine's output sequence is fixed by the C++ standard, so permutations are
 * reproducible across platforms.
 */
[[nodiscard]] inline std::vector<std::size_t>
ordering_permutation(const PauliSum &h, const OrderingStrategy &s) {
    using K = OrderingStrategy::Kind;
    const std::size_t n = h.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    switch (s.kind) {
    case K::as_given:
        break;
    case K::lexicographic:
        std::stable_sort(idx.begin(), idx.end(), [&h](auto a, auto b) {
            return h[a].string < h[b].string;
        });
        break;
    case K::magnitude_descending:
        std::stable_sort(idx.begin(), idx.end(), [&h](auto a, auto b) {
            return std::abs(h[a].coeff) > std::abs(h[b].coeff);
        });
        break;
    case K::random: {
        std::mt19937_64 rng(s.seed);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(idx[i - 1], idx[detail::bounded(rng, i)]);
        }
        break;
    }
    case K::custom: {
        std::vector<bool> seen(n, false);
        if (s.permutation.size() != n) {
            throw InputError("trotter-encode",
                             "custom ordering has " +
                                 std::to_string(s.permutation.size()) +
                                 " entries for " + std::to_string(n) + " terms");
        }
        for (auto p : s.permutation) {
            if (p >= n || seen[p]) {
                throw InputError("trotter-encode",
                                 "custom ordering is not a permutation");
            }
            seen[p] = true;
        }
        idx = s.permutation;
        break;
    }
    }
    return idx;
}

[[nodiscard]] inline PauliSum apply_ordering(const PauliSum &h,
                                             const OrderingStrategy &s) {
    PauliSum out(h.num_qubits());
    for (auto i : ordering_permutation(h, s)) {
        out.add(h[i]);
    }
    return out;
}

/**
 * @brief Commutator sums behind the error bounds of one term sequence.
 *
 * The bound scales as t^2/r (first order) or t^3/r^2 (second order), so the
 * sums are computed once and reused for every (t, r).
 */
class TrotterBound {
  public:
    explicit TrotterBound(const PauliSum &sequence,
                          std::size_t term_cap = kBoundTermCap)
        : h_(sequence), cap_(term_cap) {
        if (!h_.is_hermitian()) {
            throw InputError("trotter-encode",
                             "error bounds need a Hermitian Hamiltonian");
        }
        if (h_.size() > cap_) {
            throw CapExceeded("trotter-encode",
                              std::to_string(h_.size()) +
                                  " terms exceeds the bound cap of " +
                                  std::to_string(cap_));
        }
    }

    /// sum_g ||[T_g, H_g]||
    [[nodiscard]] double first_order_sum() {
        if (!first_) {
            compute(false);
        }
        return *first_;
    }
    /// (sum_g ||[T_g,[T_g,H_g]]||, sum_g ||[H_g,[H_g,T_g]]||)
    [[nodiscard]] std::pair<double, double> second_order_sums() {
        if (!second_) {
            compute(true);
        }
        return *second_;
    }

    [[nodiscard]] double evaluate(TrotterOrder order, double t, std::uint64_t r) {
        if (!(t > 0.0) || r == 0) {
            throw InputError("trotter-encode",
                             "bounds need t > 0 and r >= 1");
        }
        const auto rr = static_cast<double>(r);
        if (order == TrotterOrder::first) {
            return t * t / (2.0 * rr) * first_order_sum();
        }
        const auto [outer, inner] = second_order_sums();
        return t * t * t / (rr * rr) * (outer / 12.0 + inner / 24.0);
    }

    /// Smallest r with bound(r) <= budget.
    [[nodiscard]] std::uint64_t min_steps(TrotterOrder order, double t,
                                          double budget) {
        if (!(budget > 0.0) || !(t > 0.0)) {
            throw InputError("trotter-encode",
                             "step derivation needs t > 0 and budget > 0");
        }
        if (evaluate(order, t, 1) <= budget) {
            return 1;
        }
        // closed-form seed, then integer refinement
        const double scale = evaluate(order, t, 1) / budget;
        const double seed =
            std::ceil(order == TrotterOrder::first ? scale : std::sqrt(scale));
        if (!(seed < 4.0e18)) {
            throw CapExceeded("trotter-encode", "required Trotter steps overflow");
        }
        auto r = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(seed));
        while (evaluate(order, t, r) > budget) {
            ++r;
        }
        while (r > 1 && evaluate(order, t, r - 1) <= budget) {
            --r;
        }
        return r;
    }

    [[nodiscard]] const PauliSum &sequence() const noexcept { return h_; }

  private:
    void compute(bool second) {
        const std::size_t n = h_.num_qubits();
        double f = 0.0;
        double outer = 0.0;
        double inner = 0.0;
        PauliSum tail(n);
        for (std::size_t g = h_.size(); g-- > 0;) {
            PauliSum term(n);
            term.add(h_[g]);
            const PauliSum k = commutator(tail, term); // [T_g, H_g]
            f += coeff_one_norm(k);
            if (second && !k.empty()) {
                outer += coeff_one_norm(commutator(tail, k));
                // [H_g, [H_g, T_g]] = -[H_g, [T_g, H_g]]
                inner += coeff_one_norm(commutator(term, k));
            }
            tail.add(h_[g]);
        }
        first_ = f;
        if (second) {
            second_ = std::make_pair(outer, inner);
        }
    }

    PauliSum h_;
    std::size_t cap_;
    std::optional<double> first_;
    std::optional<std::pair<double, double>> second_;
};

[[nodiscard]] inline double bound_first_order(const PauliSum &h, double t,
                                              std::uint64_t r) {
    return TrotterBound(h).evaluate(TrotterOrder::first, t, r);
}

[[nodiscard]] inline double bound_second_order(const PauliSum &h, double t,
                                               std::uint64_t r) {
    return TrotterBound(h).evaluate(TrotterOrder::second, t, r);
}

struct TrotterPlan {
    TrotterOrder order = TrotterOrder::first;
    std::uint64_t steps = 1;
    double time = 0.0;
    OrderingStrategy ordering;
    double error_bound = 0.0;
    double budget = 0.0;          ///< operator-norm budget, 0 when steps were pinned
    PauliSum term_sequence;       ///< terms in application order
};

/// Emits exp(-i c P t/r) per term (first order) or the symmetric
/// forward/reverse half steps (second order) as one step definition.
inline DefinitionId add_trotter(AlgorithmGraph &g, const TrotterPlan &plan,
                                std::size_t qubit_offset = 0) {
    const double dt = plan.time / static_cast<double>(plan.steps);
    std::vector<Node> step;
    const auto &terms = plan.term_sequence.terms();
    if (plan.order == TrotterOrder::first) {
        for (const auto &term : terms) {
            step.emplace_back(Gate::pauli_rotation(
                term.string, 2.0 * term.coeff.real() * dt, qubit_offset));
        }
    } else {
        for (const auto &term : terms) {
            step.emplace_back(Gate::pauli_rotation(
                term.string, term.coeff.real() * dt, qubit_offset));
        }
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            step.emplace_back(Gate::pauli_rotation(
                it->string, it->coeff.real() * dt, qubit_offset));
        }
    }
    const auto step_id = g.add_definition("trotter_step", std::move(step));
    return g.add_definition("trotter",
                            {Node{Call{step_id, plan.steps, {}}}});
}

[[nodiscard]] inline AlgorithmGraph build_trotter(const TrotterPlan &plan) {
    AlgorithmGraph g(plan.term_sequence.num_qubits());
    g.set_root(add_trotter(g, plan));
    return g;
}

/// Checks that the plan's sequence is a permutation of h's terms.
[[nodiscard]] inline AlgorithmGraph build_trotter(const TrotterPlan &plan,
                                                  const PauliSum &h) {
    auto key = [](const PauliSum &s) {
        std::vector<std::pair<PauliString, double>> v;
        for (const auto &t : s.terms()) {
            v.emplace_back(t.string, t.coeff.real());
        }
        std::sort(v.begin(), v.end());
        return v;
    };
    if (h.num_qubits() != plan.term_sequence.num_qubits() ||
        key(h) != key(plan.term_sequence)) {
        throw InputError("trotter-encode",
                         "plan term sequence does not match the Hamiltonian");
    }
    return build_trotter(plan);
}

/// How an unspecified order is resolved: the order whose lowered T-count is
/// smaller, with rotations synthesized under `synthesis_budget` (defaults to
/// the Trotter budget). Ties go to first order.
struct OrderSelection {
    SynthesisModel model;
    std::optional<double> synthesis_budget;
};

[[nodiscard]] inline TrotterPlan plan_for(TrotterBound &bound, TrotterOrder order,
                                          double t, std::uint64_t steps,
                                          const OrderingStrategy &ordering,
                                          double budget) {
    TrotterPlan plan;
    plan.order = order;
    plan.steps = steps;
    plan.time = t;
    plan.ordering = ordering;
    plan.budget = budget;
    plan.error_bound = bound.evaluate(order, t, steps);
    plan.term_sequence = bound.sequence();
    return plan;
}

[[nodiscard]] inline BigInt trotter_t_count(const TrotterPlan &plan,
                                            const OrderSelection &sel) {
    const double budget = sel.synthesis_budget.value_or(plan.budget);
    return count(build_trotter(plan), sel.model, budget).total.t_gates;
}

/**
 * @brief Smallest step count meeting `budget` for the given (or best) order.
 *
 * `h` should be simplified and Hermitian; its terms are reordered by
 * `ordering` before the bounds are evaluated.
 */
[[nodiscard]] inline TrotterPlan
derive_steps(const PauliSum &h, double t, double budget,
             std::optional<TrotterOrder> order = std::nullopt,
             const OrderingStrategy &ordering = {},
             const OrderSelection &selection = {}) {
    if (!(t > 0.0) || !(budget > 0.0)) {
        throw InputError("trotter-encode", "derive_steps needs t > 0 and budget > 0");
    }
    TrotterBound bound(apply_ordering(h, ordering));
    auto make = [&](TrotterOrder o) {
        return plan_for(bound, o, t, bound.min_steps(o, t, budget), ordering,
                        budget);
    };
    if (order) {
        return make(*order);
    }
    TrotterPlan first = make(TrotterOrder::first);
    if (first.error_bound == 0.0) {
        return first;
    }
    TrotterPlan second = make(TrotterOrder::second);
    return trotter_t_count(second, selection) < trotter_t_count(first, selection)
               ? second
               : first;
}

} // namespace hamkit
