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
 * Built-in spin-chain Hamiltonians (Pauli convention, no factors of 1/4).
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "pauli.hpp"

namespace hamkit {

enum class SpinModel { xxz_chain, tfim_chain };
enum class Boundary { open, periodic };

struct SpinModelSpec {
    SpinModel model = SpinModel::xxz_chain;
    std::size_t sites = 2;
    double coupling = 1.0; ///< J
    double field = 0.0;    ///< Delta for xxz, g for tfim
    Boundary boundary = Boundary::open;
};

namespace detail {

inline PauliString two_site(std::size_t n, std::size_t i, std::size_t j,
                            Pauli p) {
    PauliString s(n);
    s.set(i, p);
    s.set(j, p);
    return s;
}

inline PauliString one_site(std::size_t n, std::size_t i, Pauli p) {
    PauliString s(n);
    s.set(i, p);
    return s;
}

} // namespace detail

/**
 * xxz_chain: sum over bonds of J (XX + YY) + J Delta ZZ.
 * tfim_chain: -J sum ZZ - g sum X.
 *
 * Bonds are (i, i+1), plus (L-1, 0) when periodic. Terms with an exactly zero
 * coefficient are omitted; nothing else is merged.
 */
[[nodiscard]] inline PauliSum generate(const SpinModelSpec &spec) {
    const std::size_t n = spec.sites;
    if (n < 2) {
        throw InputError("spin-models", "chain needs at least 2 sites, got " +
                                            std::to_string(n));
    }
    if (!std::isfinite(spec.coupling) || !std::isfinite(spec.field)) {
        throw InputError("spin-models", "non-finite model parameter");
    }
    std::vector<std::pair<std::size_t, std::size_t>> bonds;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        bonds.emplace_back(i, i + 1);
    }
    if (spec.boundary == Boundary::periodic) {
        bonds.emplace_back(n - 1, 0);
    }

    PauliSum h(n);
    auto add = [&h](double c, PauliString s) {
        if (c != 0.0) {
            h.add(c, std::move(s));
        }
    };
    switch (spec.model) {
    case SpinModel::xxz_chain:
        for (auto [i, j] : bonds) {
            add(spec.coupling, detail::two_site(n, i, j, Pauli::X));
            add(spec.coupling, detail::two_site(n, i, j, Pauli::Y));
            add(spec.coupling * spec.field, detail::two_site(n, i, j, Pauli::Z));
        }
        break;
    case SpinModel::tfim_chain:
        for (auto [i, j] : bonds) {
            add(-spec.coupling, detail::two_site(n, i, j, Pauli::Z));
        }
        for (std::size_t i = 0; i < n; ++i) {
            add(-spec.field, detail::one_site(n, i, Pauli::X));
        }
        break;
    }
    return h;
}

} // namespace hamkit
