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
 * Analysis reports: ordered sections of named values, written either as one
 * structured JSON document or as comma-separated rows for sweeps.
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "resources.hpp"

namespace hamkit {

/// Decimal digits of a count that may not fit 64 bits.
struct BigCount {
    std::string digits;
    friend bool operator==(const BigCount &, const BigCount &) = default;
};

using ReportValue = std::variant<bool, std::int64_t, std::uint64_t, double,
                                 std::string, std::vector<double>, BigCount>;

struct ReportSection {
    std::string name;
    std::vector<std::pair<std::string, ReportValue>> entries;

    void set(const std::string &key, ReportValue value) {
        for (auto &[k, v] : entries) {
            if (k == key) {
                v = std::move(value);
                return;
            }
        }
        entries.emplace_back(key, std::move(value));
    }
    /// Normalizes scalars so every integer lands on a 64-bit alternative.
    template <class T>
        requires(!std::is_same_v<std::remove_cvref_t<T>, ReportValue>)
    void set(const std::string &key, T &&value) {
        using U = std::remove_cvref_t<T>;
        if constexpr (std::is_same_v<U, BigInt>) {
            set(key, ReportValue{BigCount{value.str()}});
        } else if constexpr (std::is_same_v<U, bool>) {
            set(key, ReportValue{value});
        } else if constexpr (std::is_integral_v<U> && std::is_signed_v<U>) {
            set(key, ReportValue{static_cast<std::int64_t>(value)});
        } else if constexpr (std::is_integral_v<U>) {
            set(key, ReportValue{static_cast<std::uint64_t>(value)});
        } else if constexpr (std::is_floating_point_v<U>) {
            set(key, ReportValue{static_cast<double>(value)});
        } else if constexpr (std::is_convertible_v<T, std::string>) {
            set(key, ReportValue{std::string(std::forward<T>(value))});
        } else {
            set(key, ReportValue{std::forward<T>(value)});
        }
    }
};

struct AnalysisReport {
    std::vector<ReportSection> sections;

    ReportSection &section(const std::string &name) {
        for (auto &s : sections) {
            if (s.name == name) {
                return s;
            }
        }
        sections.push_back({name, {}});
        return sections.back();
    }
    [[nodiscard]] const ReportSection *find(const std::string &name) const {
        for (const auto &s : sections) {
            if (s.name == name) {
                return &s;
            }
        }
        return nullptr;
    }
    [[nodiscard]] const ReportValue *get(const std::string &sec,
                                         const std::string &key) const {
        if (const auto *s = find(sec)) {
            for (const auto &[k, v] : s->entries) {
                if (k == key) {
                    return &v;
                }
            }
        }
        return nullptr;
    }
};

inline void put_resources(ReportSection &s, const ResourceEstimate &est) {
    s.set("qubits", static_cast<std::uint64_t>(est.structural.qubits));
    s.set("clifford", est.structural.clifford);
    s.set("t_gates_native", est.structural.t_gates);
    s.set("rotations", est.structural.rotations);
    s.set("rotation_tolerance", est.rotation_tolerance);
    s.set("t_per_rotation", est.t_per_rotation);
    s.set("t_gates_total", est.total.t_gates);
}

/// Shortest-exact decimal form used in tabular output.
[[nodiscard]] inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace hamkit
