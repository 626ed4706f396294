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
 * Dense state-vector execution of algorithm graphs, plus the exact
 * (eigendecomposition-based) references that Trotter and phase-estimation
 * results are measured against.
 */

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "circuit.hpp"
#include "errors.hpp"
#include "pauli.hpp"

namespace hamkit {

inline constexpr std::size_t kStateQubitCap = 20;

class StateVector {
  public:
    StateVector() = default;

    /// |index> on n qubits; qubit 0 is the most significant bit.
    [[nodiscard]] static StateVector basis(std::size_t n, std::uint64_t index,
                                           std::size_t cap = kStateQubitCap) {
        check_cap(n, cap);
        StateVector sv;
        sv.n_ = n;
        sv.amps_.assign(std::size_t{1} << n, cplx{});
        if (index >= sv.amps_.size()) {
            throw InputError("statevec-sim", "basis index out of range");
        }
        sv.amps_[index] = 1.0;
        return sv;
    }

    /// Basis state from a bitstring such as "0110" (leftmost is qubit 0).
    [[nodiscard]] static StateVector from_bitstring(std::string_view bits,
                                                    std::size_t cap = kStateQubitCap) {
        std::uint64_t index = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') {
                throw InputError("statevec-sim",
                                 "initial state bitstring must contain only 0/1");
            }
            index = (index << 1) | static_cast<std::uint64_t>(c - '0');
        }
        if (bits.empty()) {
            throw InputError("statevec-sim", "empty initial state bitstring");
        }
        return basis(bits.size(), index, cap);
    }

    /// Amplitudes must have power-of-two length and unit norm (within 1e-6;
    /// they are renormalized exactly).
    [[nodiscard]] static StateVector from_amplitudes(std::vector<cplx> amps,
                                                     std::size_t cap = kStateQubitCap) {
        if (amps.empty() || (amps.size() & (amps.size() - 1)) != 0) {
            throw InputError("statevec-sim",
                             "amplitude count must be a power of two");
        }
        StateVector sv;
        sv.n_ = static_cast<std::size_t>(std::countr_zero(amps.size()));
        check_cap(sv.n_, cap);
        sv.amps_ = std::move(amps);
        const double nrm = sv.norm();
        if (std::abs(nrm - 1.0) > 1e-6) {
            throw InputError("statevec-sim", "initial state is not normalized (norm " +
                                                 std::to_string(nrm) + ")");
        }
        for (auto &a : sv.amps_) {
            a /= nrm;
        }
        return sv;
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] cplx operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm() const noexcept {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    [[nodiscard]] Eigen::VectorXcd to_eigen() const {
        return Eigen::Map<const Eigen::VectorXcd>(
            amps_.data(), static_cast<Eigen::Index>(amps_.size()));
    }
    [[nodiscard]] static StateVector from_eigen(const Eigen::VectorXcd &v) {
        StateVector sv;
        sv.amps_.assign(v.data(), v.data() + v.size());
        sv.n_ = static_cast<std::size_t>(std::countr_zero(sv.amps_.size()));
        return sv;
    }

    void apply(const Gate &g) {
        using K = GateKind;
        constexpr double r = std::numbers::sqrt2 / 2;
        const cplx i{0.0, 1.0};
        switch (g.kind) {
        case K::H:
            apply_1q(g.qubits[0], r, r, r, -r);
            break;
        case K::S:
            apply_diag(g.qubits[0], 1.0, i);
            break;
        case K::Sdg:
            apply_diag(g.qubits[0], 1.0, -i);
            break;
        case K::T:
            apply_diag(g.qubits[0], 1.0, std::polar(1.0, std::numbers::pi / 4));
            break;
        case K::Tdg:
            apply_diag(g.qubits[0], 1.0, std::polar(1.0, -std::numbers::pi / 4));
            break;
        case K::X:
            apply_1q(g.qubits[0], 0.0, 1.0, 1.0, 0.0);
            break;
        case K::Y:
            apply_1q(g.qubits[0], 0.0, -i, i, 0.0);
            break;
        case K::Z:
            apply_diag(g.qubits[0], 1.0, -1.0);
            break;
        case K::Rz:
            apply_diag(g.qubits[0], std::polar(1.0, -g.angle / 2),
                       std::polar(1.0, g.angle / 2));
            break;
        case K::CX: {
            const auto cm = mask(g.qubits[0]);
            const auto tm = mask(g.qubits[1]);
            for (std::uint64_t j = 0; j < amps_.size(); ++j) {
                if ((j & cm) && !(j & tm)) {
                    std::swap(amps_[j], amps_[j | tm]);
                }
            }
            break;
        }
        case K::CZ: {
            const auto both = mask(g.qubits[0]) | mask(g.qubits[1]);
            for (std::uint64_t j = 0; j < amps_.size(); ++j) {
                if ((j & both) == both) {
                    amps_[j] = -amps_[j];
                }
            }
            break;
        }
        case K::PauliRotation:
            apply_pauli_rotation(g);
            break;
        }
    }

  private:
    static void check_cap(std::size_t n, std::size_t cap) {
        if (n > cap) {
            throw CapExceeded("statevec-sim",
                              std::to_string(n) + " qubits exceeds state cap of " +
                                  std::to_string(cap));
        }
    }

    [[nodiscard]] std::uint64_t mask(std::size_t q) const {
        if (q >= n_) {
            throw InputError("statevec-sim", "qubit index out of range");
        }
        return std::uint64_t{1} << (n_ - 1 - q);
    }

    void apply_1q(std::size_t q, cplx m00, cplx m01, cplx m10, cplx m11) {
        const auto m = mask(q);
        for (std::uint64_t j = 0; j < amps_.size(); ++j) {
            if (j & m) {
                continue;
            }
            const cplx a = amps_[j];
            const cplx b = amps_[j | m];
            amps_[j] = m00 * a + m01 * b;
            amps_[j | m] = m10 * a + m11 * b;
        }
    }

    void apply_diag(std::size_t q, cplx d0, cplx d1) {
        const auto m = mask(q);
        for (std::uint64_t j = 0; j < amps_.size(); ++j) {
            amps_[j] *= (j & m) ? d1 : d0;
        }
    }

    // cos(a/2) psi - i sin(a/2) P psi, without decomposing P
    void apply_pauli_rotation(const Gate &g) {
        PauliMasks pm;
        for (std::size_t k = 0; k < g.qubits.size(); ++k) {
            const auto bit = mask(g.qubits[k]);
            if (g.paulis[k] != Pauli::Z) {
                pm.x |= bit;
            }
            if (g.paulis[k] != Pauli::X) {
                pm.z |= bit;
            }
            if (g.paulis[k] == Pauli::Y) {
                ++pm.y_count;
            }
        }
        const double c = std::cos(g.angle / 2);
        const cplx mis{0.0, -std::sin(g.angle / 2)};
        if (pm.x == 0) {
            for (std::uint64_t j = 0; j < amps_.size(); ++j) {
                amps_[j] *= c + mis * column_phase(pm, j);
            }
            return;
        }
        const std::uint64_t top = std::uint64_t{1} << (63 - std::countl_zero(pm.x));
        for (std::uint64_t j = 0; j < amps_.size(); ++j) {
            if (j & top) {
                continue;
            }
            const std::uint64_t k = j ^ pm.x;
            const cplx a = amps_[j];
            const cplx b = amps_[k];
            amps_[k] = c * b + mis * column_phase(pm, j) * a;
            amps_[j] = c * a + mis * column_phase(pm, k) * b;
        }
    }

    std::size_t n_ = 0;
    std::vector<cplx> amps_;
};

/// |<a|b>|^2
[[nodiscard]] inline double fidelity(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw InputError("statevec-sim", "fidelity: dimension mismatch");
    }
    cplx overlap{};
    for (std::size_t j = 0; j < a.dim(); ++j) {
        overlap += std::conj(a[j]) * b[j];
    }
    return std::min(1.0, std::norm(overlap));
}

/// Euclidean distance ||a - b||, sensitive to global phase.
[[nodiscard]] inline double state_distance(const StateVector &a,
                                           const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw InputError("statevec-sim", "distance: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        s += std::norm(a[j] - b[j]);
    }
    return std::sqrt(s);
}

struct SimulationCaps {
    std::size_t max_qubits = kStateQubitCap;
    std::uint64_t max_gates = kFlattenCap;
};

/**
 * @brief Executes the graph's root on `psi0`.
 *
 * The nested structure is walked directly (repeats re-applied, never
 * exponentiated), so no flattened list is materialized.
 */
[[nodiscard]] inline StateVector run(const AlgorithmGraph &g, StateVector psi0,
                                     const SimulationCaps &caps = {}) {
    if (g.width() != psi0.num_qubits()) {
        throw InputError("statevec-sim",
                         "graph width " + std::to_string(g.width()) +
                             " does not match state of " +
                             std::to_string(psi0.num_qubits()) + " qubits");
    }
    if (psi0.num_qubits() > caps.max_qubits) {
        throw CapExceeded("statevec-sim", "state exceeds qubit cap");
    }
    const auto gates = flattened_size(g);
    if (gates > caps.max_gates) {
        throw CapExceeded("statevec-sim",
                          "circuit of " + std::to_string(gates) +
                              " gates exceeds simulation cap of " +
                              std::to_string(caps.max_gates));
    }
    for_each_gate(g, g.root(), std::nullopt,
                  [&psi0](const Gate &gate) { psi0.apply(gate); });
    if (std::abs(psi0.norm() - 1.0) > 1e-10) {
        throw InvariantError("statevec-sim", "norm drifted during simulation");
    }
    return psi0;
}

/// Applies an already-flattened gate list.
[[nodiscard]] inline StateVector run_gates(std::span<const Gate> gates,
                                           StateVector psi) {
    for (const Gate &gate : gates) {
        psi.apply(gate);
    }
    return psi;
}

struct Eigensystem {
    Eigen::VectorXd values;  ///< ascending
    Eigen::MatrixXcd vectors; ///< columns are eigenvectors
};

[[nodiscard]] inline Eigensystem eigendecompose(const PauliSum &h,
                                                std::size_t cap = kMatrixQubitCap) {
    if (!h.is_hermitian()) {
        throw InputError("statevec-sim",
                         "eigendecompose requires a Hermitian Hamiltonian");
    }
    const Eigen::MatrixXcd m = to_matrix(h, cap);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success) {
        throw InvariantError("statevec-sim", "eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// exp(-i H t) psi0 via the eigenbasis of H.
[[nodiscard]] inline StateVector exact_evolution(const Eigensystem &eig,
                                                 double t,
                                                 const StateVector &psi0) {
    if (static_cast<std::size_t>(eig.vectors.rows()) != psi0.dim()) {
        throw InputError("statevec-sim", "exact_evolution: dimension mismatch");
    }
    Eigen::VectorXcd coeffs = eig.vectors.adjoint() * psi0.to_eigen();
    for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
        coeffs(j) *= std::polar(1.0, -eig.values(j) * t);
    }
    return StateVector::from_eigen(eig.vectors * coeffs);
}

[[nodiscard]] inline StateVector exact_evolution(const PauliSum &h, double t,
                                                 const StateVector &psi0,
                                                 std::size_t cap = kMatrixQubitCap) {
    if (h.num_qubits() != psi0.num_qubits()) {
        throw InputError("statevec-sim", "exact_evolution: qubit count mismatch");
    }
    return exact_evolution(eigendecompose(h, cap), t, psi0);
}

/**
 * @brief Textbook phase-estimation kernel |K_m(k, theta)|^2.
 *
 * sin^2(2^m pi d) / (2^{2m} sin^2(pi d)) with d = theta - k/2^m, equal to 1
 * when d is an integer.
 */
[[nodiscard]] inline double qpe_kernel(std::size_t m, double theta,
                                       std::uint64_t k) {
    const double n = std::ldexp(1.0, static_cast<int>(m));
    double d = theta - static_cast<double>(k) / n;
    d -= std::round(d);
    const double den = std::sin(std::numbers::pi * d);
    if (std::abs(den) < 1e-15) {
        return 1.0;
    }
    const double num = std::sin(n * std::numbers::pi * d);
    return (num * num) / (n * n * den * den);
}

/**
 * @brief Outcome distribution of textbook phase estimation on U =
 * exp(-i (H + shift) t) with m phase qubits, from the eigenbasis of H.
 *
 * Outcome k estimates theta = (E + shift) t / (2 pi).
 */
[[nodiscard]] inline std::vector<double>
qpe_distribution_analytic(const PauliSum &h, double shift, double t,
                          std::size_t m, const StateVector &psi0,
                          std::size_t cap = kMatrixQubitCap) {
    if (m == 0 || m > 30) {
        throw InputError("statevec-sim", "phase register size out of range");
    }
    const auto eig = eigendecompose(h, cap);
    if (static_cast<std::size_t>(eig.vectors.rows()) != psi0.dim()) {
        throw InputError("statevec-sim", "initial state dimension mismatch");
    }
    const Eigen::VectorXcd overlaps = eig.vectors.adjoint() * psi0.to_eigen();
    const std::uint64_t outcomes = std::uint64_t{1} << m;
    std::vector<double> probs(outcomes, 0.0);
    for (Eigen::Index j = 0; j < overlaps.size(); ++j) {
        const double w = std::norm(overlaps(j));
        if (w == 0.0) {
            continue;
        }
        const double theta = (eig.values(j) + shift) * t / (2 * std::numbers::pi);
        for (std::uint64_t k = 0; k < outcomes; ++k) {
            probs[k] += w * qpe_kernel(m, theta, k);
        }
    }
    return probs;
}

/**
 * Marginal distribution of a register held on qubits `first .. first+m-1`;
 * qubit first+j contributes 2^j to the outcome.
 */
[[nodiscard]] inline std::vector<double>
register_marginal(const StateVector &psi, std::size_t first, std::size_t m) {
    const std::size_t n = psi.num_qubits();
    if (first + m > n) {
        throw InputError("statevec-sim", "register exceeds state width");
    }
    std::vector<double> probs(std::size_t{1} << m, 0.0);
    for (std::uint64_t j = 0; j < psi.dim(); ++j) {
        std::uint64_t k = 0;
        for (std::size_t b = 0; b < m; ++b) {
            const std::size_t q = first + b;
            if ((j >> (n - 1 - q)) & 1U) {
                k |= std::uint64_t{1} << b;
            }
        }
        probs[k] += std::norm(psi[j]);
    }
    return probs;
}

[[nodiscard]] inline double total_variation(std::span<const double> p,
                                            std::span<const double> q) {
    if (p.size() != q.size()) {
        throw InputError("statevec-sim", "distribution size mismatch");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        s += std::abs(p[k] - q[k]);
    }
    return 0.5 * s;
}

} // namespace hamkit
