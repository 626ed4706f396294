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
 * Second-quantization tensors and their Jordan-Wigner / Bravyi-Kitaev images.
 *
 * The fermionic Hamiltonian convention is
 *
 *     H = constant + sum_pq h_pq a+_p a_q
 *                  + 1/2 sum_pqrs h_pqrs a+_p a+_q a_r a_s
 *
 * and mode j is carried by qubit j.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "pauli.hpp"

namespace hamkit {

struct FermionTensors {
    std::size_t n_modes = 0;
    double constant = 0.0;
    std::vector<cplx> one_body; ///< n^2, row-major (p, q)
    std::vector<cplx> two_body; ///< n^4, row-major (p, q, r, s)

    [[nodiscard]] static FermionTensors zeros(std::size_t n) {
        FermionTensors t;
        t.n_modes = n;
        t.one_body.assign(n * n, cplx{});
        t.two_body.assign(n * n * n * n, cplx{});
        return t;
    }

    [[nodiscard]] cplx &h1(std::size_t p, std::size_t q) {
        return one_body[p * n_modes + q];
    }
    [[nodiscard]] cplx h1(std::size_t p, std::size_t q) const {
        return one_body[p * n_modes + q];
    }
    [[nodiscard]] cplx &h2(std::size_t p, std::size_t q, std::size_t r,
                           std::size_t s) {
        return two_body[((p * n_modes + q) * n_modes + r) * n_modes + s];
    }
    [[nodiscard]] cplx h2(std::size_t p, std::size_t q, std::size_t r,
                          std::size_t s) const {
        return two_body[((p * n_modes + q) * n_modes + r) * n_modes + s];
    }

    /// Shape and Hermiticity checks: h_pq = conj(h_qp), h_pqrs = conj(h_srqp).
    void validate(double tol = 1e-10) const {
        const std::size_t n = n_modes;
        if (n == 0) {
            throw InputError("fermion-map", "n_modes must be positive");
        }
        if (one_body.size() != n * n || two_body.size() != n * n * n * n) {
            throw InputError("fermion-map", "tensor shapes do not match n_modes");
        }
        if (!std::isfinite(constant)) {
            throw InputError("fermion-map", "non-finite constant");
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                if (std::abs(h1(p, q) - std::conj(h1(q, p))) > tol) {
                    throw InputError("fermion-map",
                                     "one_body not Hermitian at (" +
                                         std::to_string(p) + "," +
                                         std::to_string(q) + ")");
                }
                for (std::size_t r = 0; r < n; ++r) {
                    for (std::size_t s = 0; s < n; ++s) {
                        if (std::abs(h2(p, q, r, s) -
                                     std::conj(h2(s, r, q, p))) > tol) {
                            throw InputError(
                                "fermion-map",
                                "two_body not Hermitian at (" +
                                    std::to_string(p) + "," + std::to_string(q) +
                                    "," + std::to_string(r) + "," +
                                    std::to_string(s) + ")");
                        }
                    }
                }
            }
        }
    }
};

enum class FermionMapping { jordan_wigner, bravyi_kitaev };

/// Ladder operators of one mode as qubit operators.
struct LadderPair {
    PauliSum creation;
    PauliSum annihilation;
};

namespace detail {

/// 1/2 (A - iB) and 1/2 (A + iB) for Majorana-like strings A, B.
inline LadderPair ladder_from_majoranas(std::size_t n, const PauliString &a,
                                        const PauliString &b) {
    LadderPair out{PauliSum(n), PauliSum(n)};
    out.creation.add(0.5, a);
    out.creation.add(cplx(0.0, -0.5), b);
    out.annihilation.add(0.5, a);
    out.annihilation.add(cplx(0.0, 0.5), b);
    return out;
}

} // namespace detail

[[nodiscard]] inline LadderPair jordan_wigner_ladder(std::size_t mode,
                                                     std::size_t n) {
    PauliString a(n);
    for (std::size_t q = 0; q < mode; ++q) {
        a.set(q, Pauli::Z);
    }
    PauliString b = a;
    a.set(mode, Pauli::X);
    b.set(mode, Pauli::Y);
    return detail::ladder_from_majoranas(n, a, b);
}

/// Binary-tree (Fenwick) index sets of the Bravyi-Kitaev encoding.
struct BravyiKitaevSets {
    std::vector<std::size_t> update;    ///< qubits storing a sum including j
    std::vector<std::size_t> parity;    ///< qubits whose parity is modes < j
    std::vector<std::size_t> flip;      ///< children of j
    std::vector<std::size_t> remainder; ///< parity minus flip
};

[[nodiscard]] inline BravyiKitaevSets bravyi_kitaev_sets(std::size_t j,
                                                         std::size_t n) {
    BravyiKitaevSets sets;
    // Fenwick arithmetic is 1-based.
    for (std::size_t idx = j + 1 + ((j + 1) & (~(j + 1) + 1)); idx <= n;
         idx += idx & (~idx + 1)) {
        sets.update.push_back(idx - 1);
    }
    for (std::size_t idx = j; idx > 0; idx &= idx - 1) {
        sets.parity.push_back(idx - 1);
    }
    const std::size_t node = j + 1;
    const std::size_t stop = node & (node - 1);
    for (std::size_t idx = node - 1; idx != stop; idx &= idx - 1) {
        sets.flip.push_back(idx - 1);
    }
    for (std::size_t q : sets.parity) {
        if (std::find(sets.flip.begin(), sets.flip.end(), q) ==
            sets.flip.end()) {
            sets.remainder.push_back(q);
        }
    }
    return sets;
}

[[nodiscard]] inline LadderPair bravyi_kitaev_ladder(std::size_t mode,
                                                     std::size_t n) {
    const auto sets = bravyi_kitaev_sets(mode, n);
    PauliString a(n);
    PauliString b(n);
    for (std::size_t q : sets.update) {
        a.set(q, Pauli::X);
        b.set(q, Pauli::X);
    }
    for (std::size_t q : sets.parity) {
        a.set(q, Pauli::Z);
    }
    for (std::size_t q : sets.remainder) {
        b.set(q, Pauli::Z);
    }
    a.set(mode, Pauli::X);
    b.set(mode, Pauli::Y);
    return detail::ladder_from_majoranas(n, a, b);
}

[[nodiscard]] inline LadderPair ladder(FermionMapping mapping, std::size_t mode,
                                       std::size_t n) {
    return mapping == FermionMapping::jordan_wigner
               ? jordan_wigner_ladder(mode, n)
               : bravyi_kitaev_ladder(mode, n);
}

/**
 * @brief Maps the fermionic Hamiltonian onto qubits.
 *
 * Products are accumulated into a single merged table in fixed (p, q, r, s)
 * order, so the resulting term order is deterministic. The result is
 * simplified and carries real coefficients.
 */
[[nodiscard]] inline PauliSum map_to_qubits(const FermionTensors &t,
                                            FermionMapping mapping) {
    t.validate();
    const std::size_t n = t.n_modes;

    std::vector<LadderPair> ops;
    ops.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        ops.push_back(ladder(mapping, j, n));
    }

    PauliAccumulator acc(n);
    acc.add(t.constant, PauliString(n));

    auto add_product = [&acc](cplx weight, const PauliSum &left,
                              const PauliSum &right) {
        for (const auto &a : left.terms()) {
            for (const auto &b : right.terms()) {
                auto [phase, s] = multiply(a.string, b.string);
                acc.add(weight * phase * a.coeff * b.coeff, s);
            }
        }
    };

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            const cplx h = t.h1(p, q);
            if (h != cplx{}) {
                add_product(h, ops[p].creation, ops[q].annihilation);
            }
        }
    }

    // a+_p a+_q and a_r a_s are reused across the quartic loop
    std::vector<PauliSum> raise_pairs(n * n);
    std::vector<PauliSum> lower_pairs(n * n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            raise_pairs[p * n + q] = ops[p].creation * ops[q].creation;
            lower_pairs[p * n + q] = ops[p].annihilation * ops[q].annihilation;
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            if (p == q) {
                continue; // a+_p a+_p = 0
            }
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t s = 0; s < n; ++s) {
                    const cplx h = t.h2(p, q, r, s);
                    if (r == s || h == cplx{}) {
                        continue;
                    }
                    add_product(0.5 * h, raise_pairs[p * n + q],
                                lower_pairs[r * n + s]);
                }
            }
        }
    }

    const PauliSum merged = acc.finish();
    if (!merged.is_hermitian(1e-10)) {
        throw InvariantError("fermion-map",
                             "mapped Hamiltonian has imaginary coefficients");
    }
    return merged.real_part().simplify();
}

[[nodiscard]] inline PauliSum jordan_wigner(const FermionTensors &t) {
    return map_to_qubits(t, FermionMapping::jordan_wigner);
}

[[nodiscard]] inline PauliSum bravyi_kitaev(const FermionTensors &t) {
    return map_to_qubits(t, FermionMapping::bravyi_kitaev);
}

/// Number of distinct strings in a simplified sum.
[[nodiscard]] inline std::size_t pauli_count(const PauliSum &h) noexcept {
    return h.size();
}

} // namespace hamkit
