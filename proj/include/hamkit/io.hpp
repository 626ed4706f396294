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
 * On-disk formats.
 *
 * Pauli text, one term per line:
 *
 *     # optional comment lines
 *     <coefficient> <letters>
 *
 * with a decimal (optionally scientific) real coefficient and letters from
 * {I, X, Y, Z}, qubit 0 leftmost. Writers emit 17 significant digits so that
 * doubles survive a round trip.
 *
 * Tensor files, amplitude files, graph dumps and structured reports are JSON
 * documents; their schemas are listed in docs/formats.md.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "circuit.hpp"
#include "errors.hpp"
#include "fermion.hpp"
#include "pauli.hpp"
#include "report.hpp"
#include "statevector.hpp"

namespace hamkit {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kTensorConvention = "half-pqrs-v1";

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::string read_file(const std::string &path, const char *origin) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(origin, "cannot open '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string &path, const std::string &content,
                       const char *origin) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError(origin, "cannot write '" + path + "'");
    }
    out << content;
    if (!out) {
        throw InputError(origin, "write failed for '" + path + "'");
    }
}

inline json parse_json(const std::string &text, const std::string &what,
                       const char *origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw InputError(origin, what + ": " + e.what());
    }
}

inline cplx complex_from_json(const json &v, const std::string &where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number()) {
        throw InputError("ham-io", where + ": expected [re, im]");
    }
    const cplx c(v[0].get<double>(), v[1].get<double>());
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw InputError("ham-io", where + ": non-finite value");
    }
    return c;
}

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline void require_keys(const json &doc, std::set<std::string> allowed,
                         const std::string &what) {
    if (!doc.is_object()) {
        throw InputError("ham-io", what + ": expected a JSON object");
    }
    for (const auto &[k, v] : doc.items()) {
        if (!allowed.count(k)) {
            throw InputError("ham-io", what + ": unknown key '" + k + "'");
        }
    }
}

} // namespace detail

/// Parses Pauli text; `source` names the input in diagnostics.
[[nodiscard]] inline PauliSum parse_pauli_text(std::string_view text,
                                               const std::string &source = "<text>") {
    std::optional<PauliSum> sum;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const auto line = detail::trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto fail = [&](const std::string &msg) {
            return InputError("ham-io", source + ":" + std::to_string(line_no) +
                                            ": " + msg);
        };
        const auto gap = line.find_first_of(" \t");
        if (gap == std::string_view::npos) {
            throw fail("expected '<coefficient> <letters>'");
        }
        const auto coeff_text = line.substr(0, gap);
        const auto letters = detail::trim(line.substr(gap));
        if (letters.find_first_of(" \t") != std::string_view::npos) {
            throw fail("trailing tokens after Pauli letters");
        }
        double coeff = 0.0;
        const auto *first = coeff_text.data();
        const auto *last = first + coeff_text.size();
        if (*first == '+') {
            ++first;
        }
        const auto [ptr, ec] = std::from_chars(first, last, coeff);
        if (ec != std::errc{} || ptr != last || !std::isfinite(coeff)) {
            throw fail("malformed coefficient '" + std::string(coeff_text) + "'");
        }
        if (letters.find_first_not_of("IXYZ") != std::string_view::npos) {
            throw fail("invalid Pauli letters '" + std::string(letters) + "'");
        }
        if (!sum) {
            sum.emplace(letters.size());
        } else if (letters.size() != sum->num_qubits()) {
            throw fail("string length " + std::to_string(letters.size()) +
                       " differs from " + std::to_string(sum->num_qubits()));
        }
        sum->add(coeff, PauliString::parse(letters));
        if (end == text.size()) {
            break;
        }
    }
    if (!sum) {
        throw InputError("ham-io", source + ": no terms");
    }
    return sum->simplify();
}

[[nodiscard]] inline PauliSum read_pauli_text(const std::string &path) {
    return parse_pauli_text(detail::read_file(path, "ham-io"), path);
}

/// Terms sorted by |coeff| descending, then lexicographically.
[[nodiscard]] inline std::string format_pauli_text(const PauliSum &h) {
    std::vector<std::pair<double, std::string>> rows;
    for (const auto &t : h.terms()) {
        if (std::abs(t.coeff.imag()) > 1e-10) {
            throw InputError("ham-io", "cannot write non-real coefficient on '" +
                                           t.string.to_string() + "'");
        }
        rows.emplace_back(t.coeff.real(), t.string.to_string());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto &a, const auto &b) {
        if (std::abs(a.first) != std::abs(b.first)) {
            return std::abs(a.first) > std::abs(b.first);
        }
        return a.second < b.second;
    });
    std::string out = "# hamkit pauli-text v1: " + std::to_string(h.num_qubits()) +
                      " qubits, " + std::to_string(rows.size()) + " terms\n";
    for (const auto &[c, s] : rows) {
        out += format_double(c) + " " + s + "\n";
    }
    return out;
}

inline void write_pauli_text(const PauliSum &h, const std::string &path) {
    detail::write_file(path, format_pauli_text(h), "ham-io");
}

[[nodiscard]] inline json tensors_to_json(const FermionTensors &t) {
    const std::size_t n = t.n_modes;
    json one = json::array();
    for (std::size_t p = 0; p < n; ++p) {
        json row = json::array();
        for (std::size_t q = 0; q < n; ++q) {
            row.push_back(detail::complex_to_json(t.h1(p, q)));
        }
        one.push_back(std::move(row));
    }
    json two = json::array();
    for (std::size_t p = 0; p < n; ++p) {
        json a = json::array();
        for (std::size_t q = 0; q < n; ++q) {
            json b = json::array();
            for (std::size_t r = 0; r < n; ++r) {
                json c = json::array();
                for (std::size_t s = 0; s < n; ++s) {
                    c.push_back(detail::complex_to_json(t.h2(p, q, r, s)));
                }
                b.push_back(std::move(c));
            }
            a.push_back(std::move(b));
        }
        two.push_back(std::move(a));
    }
    return json{{"format_version", 1},
                {"convention", kTensorConvention},
                {"n_modes", n},
                {"constant", t.constant},
                {"one_body", std::move(one)},
                {"two_body", std::move(two)}};
}

[[nodiscard]] inline FermionTensors tensors_from_json(const json &doc,
                                                      const std::string &source) {
    detail::require_keys(doc,
                         {"format_version", "convention", "n_modes", "constant",
                          "one_body", "two_body"},
                         source);
    auto need = [&](const char *key) -> const json & {
        if (!doc.contains(key)) {
            throw InputError("ham-io", source + ": missing '" + key + "'");
        }
        return doc.at(key);
    };
    if (need("format_version") != 1) {
        throw InputError("ham-io", source + ": unsupported format_version");
    }
    if (!need("convention").is_string() ||
        need("convention").get<std::string>() != kTensorConvention) {
        throw InputError("ham-io", source + ": unknown convention tag " +
                                       need("convention").dump() +
                                       " (expected \"half-pqrs-v1\")");
    }
    if (!need("n_modes").is_number_unsigned() || need("n_modes") == 0) {
        throw InputError("ham-io", source + ": n_modes must be a positive integer");
    }
    if (!need("constant").is_number()) {
        throw InputError("ham-io", source + ": constant must be a number");
    }
    const auto n = need("n_modes").get<std::size_t>();
    FermionTensors t = FermionTensors::zeros(n);
    t.constant = need("constant").get<double>();
    auto shape_error = [&](const char *what) {
        return InputError("ham-io", source + ": " + what + " shape does not match n_modes=" +
                                        std::to_string(n));
    };
    auto sized = [&](const json &v, const char *what) -> const json & {
        if (!v.is_array() || v.size() != n) {
            throw shape_error(what);
        }
        return v;
    };
    const json &one = sized(need("one_body"), "one_body");
    for (std::size_t p = 0; p < n; ++p) {
        const json &row = sized(one[p], "one_body");
        for (std::size_t q = 0; q < n; ++q) {
            t.h1(p, q) = detail::complex_from_json(
                row[q], source + ": one_body[" + std::to_string(p) + "][" +
                            std::to_string(q) + "]");
        }
    }
    const json &two = sized(need("two_body"), "two_body");
    for (std::size_t p = 0; p < n; ++p) {
        const json &a = sized(two[p], "two_body");
        for (std::size_t q = 0; q < n; ++q) {
            const json &b = sized(a[q], "two_body");
            for (std::size_t r = 0; r < n; ++r) {
                const json &c = sized(b[r], "two_body");
                for (std::size_t s = 0; s < n; ++s) {
                    t.h2(p, q, r, s) = detail::complex_from_json(c[s], source + ": two_body");
                }
            }
        }
    }
    t.validate();
    return t;
}

[[nodiscard]] inline FermionTensors read_tensor_file(const std::string &path) {
    return tensors_from_json(
        detail::parse_json(detail::read_file(path, "ham-io"), path, "ham-io"), path);
}

inline void write_tensor_file(const FermionTensors &t, const std::string &path) {
    detail::write_file(path, tensors_to_json(t).dump(1) + "\n", "ham-io");
}

/// {"format_version": 1, "amplitudes": [[re, im], ...]}
[[nodiscard]] inline StateVector read_amplitude_file(const std::string &path) {
    const json doc =
        detail::parse_json(detail::read_file(path, "ham-io"), path, "ham-io");
    detail::require_keys(doc, {"format_version", "amplitudes"}, path);
    if (!doc.contains("amplitudes") || !doc["amplitudes"].is_array()) {
        throw InputError("ham-io", path + ": missing 'amplitudes' array");
    }
    std::vector<cplx> amps;
    for (const auto &v : doc["amplitudes"]) {
        amps.push_back(detail::complex_from_json(v, path + ": amplitudes"));
    }
    return StateVector::from_amplitudes(std::move(amps));
}

inline void write_amplitude_file(const StateVector &psi, const std::string &path) {
    json amps = json::array();
    for (const auto &a : psi.amplitudes()) {
        amps.push_back(detail::complex_to_json(a));
    }
    detail::write_file(
        path, json{{"format_version", 1}, {"amplitudes", std::move(amps)}}.dump(1) + "\n",
        "ham-io");
}

/**
 * @brief Canonical graph dump: definitions sorted by name and referenced by
 * name, so insertion order of unrelated definitions does not show.
 */
[[nodiscard]] inline json graph_to_json(const AlgorithmGraph &g) {
    std::map<std::string, json> defs;
    for (const auto &d : g.definitions()) {
        json body = json::array();
        for (const Node &node : d.body) {
            if (const auto *gate = std::get_if<Gate>(&node)) {
                json j{{"gate", gate_name(gate->kind)}, {"qubits", gate->qubits}};
                if (gate->kind == GateKind::Rz ||
                    gate->kind == GateKind::PauliRotation) {
                    j["angle"] = gate->angle;
                }
                if (gate->kind == GateKind::PauliRotation) {
                    std::string letters;
                    for (Pauli p : gate->paulis) {
                        letters.push_back(to_char(p));
                    }
                    j["paulis"] = letters;
                }
                body.push_back(std::move(j));
            } else {
                const auto &call = std::get<Call>(node);
                body.push_back(json{{"call", g.definition(call.callee).name},
                                    {"repeat", call.repeat},
                                    {"controls", call.controls}});
            }
        }
        defs[d.name] = std::move(body);
    }
    json list = json::array();
    for (auto &[name, body] : defs) {
        list.push_back(json{{"name", name}, {"body", std::move(body)}});
    }
    return json{{"format", "hamkit-graph-v1"},
                {"width", g.width()},
                {"root", g.has_root() ? json(g.definition(g.root()).name) : json()},
                {"definitions", std::move(list)}};
}

enum class ReportFormat { structured, tabular };

namespace detail {

inline json report_value_to_json(const ReportValue &v) {
    return std::visit(
        [](const auto &x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, BigCount>) {
                // plain number when it fits 64 bits
                if (x.digits.size() < 20 ||
                    (x.digits.size() == 20 && x.digits <= "18446744073709551615")) {
                    return json(std::stoull(x.digits));
                }
                return json(x.digits);
            } else {
                return json(x);
            }
        },
        v);
}

inline std::string report_value_to_cell(const ReportValue &v) {
    return std::visit(
        [](const auto &x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else if constexpr (std::is_same_v<T, double>) {
                return format_double(x);
            } else if constexpr (std::is_same_v<T, std::string>) {
                if (x.find_first_of(",\"\n") == std::string::npos) {
                    return x;
                }
                std::string q = "\"";
                for (char c : x) {
                    q += c;
                    if (c == '"') {
                        q += '"';
                    }
                }
                return q + "\"";
            } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                std::string out;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    out += (i ? ";" : "") + format_double(x[i]);
                }
                return out;
            } else if constexpr (std::is_same_v<T, BigCount>) {
                return x.digits;
            } else {
                return std::to_string(x);
            }
        },
        v);
}

} // namespace detail

[[nodiscard]] inline json report_to_json(const AnalysisReport &r) {
    json doc = json::object();
    for (const auto &s : r.sections) {
        json sec = json::object();
        for (const auto &[k, v] : s.entries) {
            sec[k] = detail::report_value_to_json(v);
        }
        doc[s.name] = std::move(sec);
    }
    return doc;
}

/// Flattened "section.key" columns in report order.
[[nodiscard]] inline std::vector<std::pair<std::string, std::string>>
report_to_record(const AnalysisReport &r) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto &s : r.sections) {
        for (const auto &[k, v] : s.entries) {
            out.emplace_back(s.name + "." + k, detail::report_value_to_cell(v));
        }
    }
    return out;
}

/// Header from the union of columns (first-seen order), one row per report.
[[nodiscard]] inline std::string format_table(const std::vector<AnalysisReport> &reports) {
    std::vector<std::string> columns;
    std::vector<std::map<std::string, std::string>> rows;
    for (const auto &r : reports) {
        std::map<std::string, std::string> row;
        for (auto &[k, v] : report_to_record(r)) {
            if (std::find(columns.begin(), columns.end(), k) == columns.end()) {
                columns.push_back(k);
            }
            row[k] = std::move(v);
        }
        rows.push_back(std::move(row));
    }
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out += (c ? "," : "") + columns[c];
    }
    out += "\n";
    for (const auto &row : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            auto it = row.find(columns[c]);
            out += (c ? "," : "") + (it == row.end() ? std::string() : it->second);
        }
        out += "\n";
    }
    return out;
}

[[nodiscard]] inline std::string format_report(const AnalysisReport &r,
                                               ReportFormat format) {
    if (format == ReportFormat::structured) {
        return report_to_json(r).dump(2) + "\n";
    }
    return format_table({r});
}

inline void write_report(const AnalysisReport &r, const std::string &path,
                         ReportFormat format) {
    detail::write_file(path, format_report(r, format), "ham-io");
}

} // namespace hamkit
