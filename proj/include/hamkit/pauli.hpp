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
 * Exact algebra over weighted Pauli strings.
 *
 * Qubit 0 is the leftmost letter of a string and the most significant bit of
 * a computational-basis index. Every other module inherits this convention.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace hamkit {

using cplx = std::complex<double>;

/// Coefficients with magnitude below this are dropped by `simplify`.
inline constexpr double kDropTolerance = 1e-12;

/// Largest qubit count `to_matrix` accepts unless told otherwise.
inline constexpr std::size_t kMatrixQubitCap = 12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

[[nodiscard]] constexpr char to_char(Pauli p) noexcept {
    constexpr char letters[] = {'I', 'X', 'Y', 'Z'};
    return letters[static_cast<std::uint8_t>(p)];
}

[[nodiscard]] inline Pauli pauli_from_char(char c) {
    switch (c) {
    case 'I':
        return Pauli::I;
    case 'X':
        return Pauli::X;
    case 'Y':
        return Pauli::Y;
    case 'Z':
        return Pauli::Z;
    default:
        throw InputError("pauli-core",
                         std::string("invalid Pauli letter '") + c + "'");
    }
}

/**
 * @brief Dense word over {I, X, Y, Z}, one letter per qubit.
 *
 * Ordering is lexicographic on letters with I < X < Y < Z, which is also the
 * order of the textual form.
 */
class PauliString {
  public:
    PauliString() = default;
    explicit PauliString(std::size_t n) : letters_(n, Pauli::I) {}
    explicit PauliString(std::vector<Pauli> letters)
        : letters_(std::move(letters)) {}

    [[nodiscard]] static PauliString parse(std::string_view text) {
        std::vector<Pauli> letters;
        letters.reserve(text.size());
        for (char c : text) {
            letters.push_back(pauli_from_char(c));
        }
        return PauliString(std::move(letters));
    }

    [[nodiscard]] std::size_t size() const noexcept { return letters_.size(); }
    [[nodiscard]] Pauli operator[](std::size_t q) const { return letters_[q]; }
    void set(std::size_t q, Pauli p) { letters_.at(q) = p; }
    [[nodiscard]] const std::vector<Pauli> &letters() const noexcept {
        return letters_;
    }

    [[nodiscard]] std::size_t weight() const noexcept {
        return static_cast<std::size_t>(std::count_if(
            letters_.begin(), letters_.end(),
            [](Pauli p) { return p != Pauli::I; }));
    }
    [[nodiscard]] bool is_identity() const noexcept { return weight() == 0; }

    /// Qubits carrying a non-identity letter, ascending.
    [[nodiscard]] std::vector<std::size_t> support() const {
        std::vector<std::size_t> out;
        for (std::size_t q = 0; q < letters_.size(); ++q) {
            if (letters_[q] != Pauli::I) {
                out.push_back(q);
            }
        }
        return out;
    }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        out.reserve(letters_.size());
        for (Pauli p : letters_) {
            out.push_back(to_char(p));
        }
        return out;
    }

    friend bool operator==(const PauliString &, const PauliString &) = default;
    friend auto operator<=>(const PauliString &a, const PauliString &b) {
        return a.letters_ <=> b.letters_;
    }

  private:
    std::vector<Pauli> letters_;
};

inline std::ostream &operator<<(std::ostream &os, const PauliString &s) {
    return os << s.to_string();
}

struct PauliStringHash {
    std::size_t operator()(const PauliString &s) const noexcept {
        // FNV-1a over the letters
        std::uint64_t h = 1469598103934665603ULL;
        for (Pauli p : s.letters()) {
            h ^= static_cast<std::uint8_t>(p);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

namespace detail {

inline void require_same_length(const PauliString &a, const PauliString &b) {
    if (a.size() != b.size()) {
        throw InputError("pauli-core",
                         "Pauli string length mismatch: " +
                             std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    }
}

/// i^k for k taken mod 4.
[[nodiscard]] inline cplx i_power(int k) noexcept {
    switch (((k % 4) + 4) % 4) {
    case 0:
        return {1.0, 0.0};
    case 1:
        return {0.0, 1.0};
    case 2:
        return {-1.0, 0.0};
    default:
        return {0.0, -1.0};
    }
}

/// Power of i produced by the single-qubit product a*b.
[[nodiscard]] constexpr int letter_phase(Pauli a, Pauli b) noexcept {
    const int x = static_cast<int>(a);
    const int y = static_cast<int>(b);
    if (x == 0 || y == 0 || x == y) {
        return 0;
    }
    // cyclic X -> Y -> Z -> X gives +i
    return ((y - x + 3) % 3 == 1) ? 1 : 3;
}

} // namespace detail

struct PauliProduct {
    cplx phase;
    PauliString string;
};

/// Letter-wise product a*b = phase * string with phase in {1, -1, i, -i}.
[[nodiscard]] inline PauliProduct multiply(const PauliString &a,
                                           const PauliString &b) {
    detail::require_same_length(a, b);
    std::vector<Pauli> out(a.size());
    int power = 0;
    for (std::size_t q = 0; q < a.size(); ++q) {
        power += detail::letter_phase(a[q], b[q]);
        out[q] = static_cast<Pauli>(static_cast<std::uint8_t>(a[q]) ^
                                    static_cast<std::uint8_t>(b[q]));
    }
    return {detail::i_power(power), PauliString(std::move(out))};
}

[[nodiscard]] inline bool commutes(const PauliString &a, const PauliString &b) {
    detail::require_same_length(a, b);
    std::size_t anti = 0;
    for (std::size_t q = 0; q < a.size(); ++q) {
        if (a[q] != Pauli::I && b[q] != Pauli::I && a[q] != b[q]) {
            ++anti;
        }
    }
    return anti % 2 == 0;
}

struct PauliTerm {
    cplx coeff;
    PauliString string;
};

/**
 * @brief Weighted sum of Pauli strings on a fixed number of qubits.
 *
 * Terms keep insertion order. Duplicate strings are allowed until `simplify`
 * merges them; nothing here simplifies implicitly.
 */
class PauliSum {
  public:
    PauliSum() = default;
    explicit PauliSum(std::size_t n) : n_(n) {}
    PauliSum(std::size_t n, std::vector<PauliTerm> terms) : n_(n) {
        terms_.reserve(terms.size());
        for (auto &t : terms) {
            add(t.coeff, std::move(t.string));
        }
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
    [[nodiscard]] bool empty() const noexcept { return terms_.empty(); }
    [[nodiscard]] const std::vector<PauliTerm> &terms() const noexcept {
        return terms_;
    }
    [[nodiscard]] const PauliTerm &operator[](std::size_t i) const {
        return terms_[i];
    }

    void add(cplx coeff, PauliString string) {
        if (string.size() != n_) {
            throw InputError("pauli-core",
                             "term '" + string.to_string() + "' has " +
                                 std::to_string(string.size()) +
                                 " qubits, sum has " + std::to_string(n_));
        }
        if (!std::isfinite(coeff.real()) || !std::isfinite(coeff.imag())) {
            throw InputError("pauli-core", "non-finite coefficient on term '" +
                                               string.to_string() + "'");
        }
        terms_.push_back({coeff, std::move(string)});
    }
    void add(const PauliTerm &term) { add(term.coeff, term.string); }

    /// Merges equal strings (first occurrence fixes position) and drops
    /// coefficients with magnitude below `tol`.
    [[nodiscard]] PauliSum simplify(double tol = kDropTolerance) const;

    /// True when every coefficient has |imag| <= tol.
    [[nodiscard]] bool is_hermitian(double tol = 1e-10) const noexcept {
        return std::all_of(terms_.begin(), terms_.end(), [tol](const auto &t) {
            return std::abs(t.coeff.imag()) <= tol;
        });
    }

    /// Copy with imaginary parts removed. Fails when any exceeds `tol`.
    [[nodiscard]] PauliSum real_part(double tol = 1e-10) const {
        if (!is_hermitian(tol)) {
            throw InputError("pauli-core", "PauliSum is not Hermitian");
        }
        PauliSum out(n_);
        out.terms_.reserve(terms_.size());
        for (const auto &t : terms_) {
            out.terms_.push_back({cplx(t.coeff.real(), 0.0), t.string});
        }
        return out;
    }

    PauliSum &operator+=(const PauliSum &other) {
        if (other.n_ != n_) {
            throw InputError("pauli-core", "qubit count mismatch in sum");
        }
        terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
        return *this;
    }
    PauliSum &operator*=(cplx scale) {
        for (auto &t : terms_) {
            t.coeff *= scale;
        }
        return *this;
    }
    friend PauliSum operator+(PauliSum a, const PauliSum &b) {
        a += b;
        return a;
    }
    friend PauliSum operator*(cplx s, PauliSum a) {
        a *= s;
        return a;
    }

  private:
    std::size_t n_ = 0;
    std::vector<PauliTerm> terms_;
};

/**
 * @brief Accumulates terms with on-the-fly merging of equal strings.
 *
 * Used wherever many products are summed (fermion mappings, commutator
 * bounds) so intermediate sums never hold duplicates.
 */
class PauliAccumulator {
  public:
    explicit PauliAccumulator(std::size_t n) : n_(n) {}

    void add(cplx coeff, const PauliString &string) {
        auto [it, inserted] = index_.try_emplace(string, terms_.size());
        if (inserted) {
            terms_.push_back({coeff, string});
        } else {
            terms_[it->second].coeff += coeff;
        }
    }

    [[nodiscard]] std::size_t distinct() const noexcept {
        return terms_.size();
    }

    [[nodiscard]] PauliSum finish(double tol = kDropTolerance) const {
        PauliSum out(n_);
        for (const auto &t : terms_) {
            if (std::abs(t.coeff) >= tol) {
                out.add(t.coeff, t.string);
            }
        }
        return out;
    }

  private:
    std::size_t n_;
    std::vector<PauliTerm> terms_;
    std::unordered_map<PauliString, std::size_t, PauliStringHash> index_;
};

inline PauliSum PauliSum::simplify(double tol) const {
    PauliAccumulator acc(n_);
    for (const auto &t : terms_) {
        acc.add(t.coeff, t.string);
    }
    return acc.finish(tol);
}

/// Unsimplified product of two sums.
[[nodiscard]] inline PauliSum operator*(const PauliSum &a, const PauliSum &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw InputError("pauli-core", "qubit count mismatch in product");
    }
    PauliSum out(a.num_qubits());
    for (const auto &ta : a.terms()) {
        for (const auto &tb : b.terms()) {
            auto [phase, s] = multiply(ta.string, tb.string);
            out.add(phase * ta.coeff * tb.coeff, std::move(s));
        }
    }
    return out;
}

/// [a, b] = ab - ba. Empty when the strings commute.
[[nodiscard]] inline PauliSum commutator(const PauliTerm &a,
                                         const PauliTerm &b) {
    PauliSum out(a.string.size());
    if (commutes(a.string, b.string)) {
        return out;
    }
    auto [phase, s] = multiply(a.string, b.string);
    const cplx c = 2.0 * phase * a.coeff * b.coeff;
    if (std::abs(c) >= kDropTolerance) {
        out.add(c, std::move(s));
    }
    return out;
}

/// Simplified [a, b] for whole sums.
[[nodiscard]] inline PauliSum commutator(const PauliSum &a, const PauliSum &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw InputError("pauli-core", "qubit count mismatch in commutator");
    }
    PauliAccumulator acc(a.num_qubits());
    for (const auto &ta : a.terms()) {
        for (const auto &tb : b.terms()) {
            if (commutes(ta.string, tb.string)) {
                continue;
            }
            auto [phase, s] = multiply(ta.string, tb.string);
            acc.add(2.0 * phase * ta.coeff * tb.coeff, s);
        }
    }
    return acc.finish();
}

/// Sum of |coeff|; an upper bound on the spectral norm.
[[nodiscard]] inline double coeff_one_norm(const PauliSum &h) noexcept {
    double total = 0.0;
    for (const auto &t : h.terms()) {
        total += std::abs(t.coeff);
    }
    return total;
}

/// Basis-index masks of a string: bit (n-1-q) stands for qubit q.
struct PauliMasks {
    std::uint64_t x = 0; ///< X or Y: flips the bit
    std::uint64_t z = 0; ///< Z or Y: sign from the bit
    int y_count = 0;
};

[[nodiscard]] inline PauliMasks masks_of(const PauliString &s) {
    PauliMasks m;
    const std::size_t n = s.size();
    for (std::size_t q = 0; q < n; ++q) {
        const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
        switch (s[q]) {
        case Pauli::X:
            m.x |= bit;
            break;
        case Pauli::Y:
            m.x |= bit;
            m.z |= bit;
            ++m.y_count;
            break;
        case Pauli::Z:
            m.z |= bit;
            break;
        case Pauli::I:
            break;
        }
    }
    return m;
}

/// <j ^ x | P | j>, i.e. the single nonzero entry of column j.
[[nodiscard]] inline cplx column_phase(const PauliMasks &m,
                                       std::uint64_t j) noexcept {
    const int sign_flips = std::popcount(j & m.z);
    return detail::i_power(m.y_count + 2 * sign_flips);
}

[[nodiscard]] inline Eigen::MatrixXcd
to_matrix(const PauliSum &h, std::size_t max_qubits = kMatrixQubitCap) {
    const std::size_t n = h.num_qubits();
    if (n > max_qubits) {
        throw CapExceeded("pauli-core", "to_matrix: " + std::to_string(n) +
                                            " qubits exceeds cap of " +
                                            std::to_string(max_qubits));
    }
    const std::uint64_t dim = std::uint64_t{1} << n;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(
        static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto &t : h.terms()) {
        const PauliMasks m = masks_of(t.string);
        for (std::uint64_t j = 0; j < dim; ++j) {
            out(static_cast<Eigen::Index>(j ^ m.x),
                static_cast<Eigen::Index>(j)) += t.coeff * column_phase(m, j);
        }
    }
    return out;
}

} // namespace hamkit
