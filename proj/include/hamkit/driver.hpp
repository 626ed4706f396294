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
 * Config-driven workflow behind the `hamkit` command: `hamgen` writes
 * Hamiltonian files, `analyze` runs load -> encode -> build -> analyze, and
 * `sweep` expands a parameter grid over a template config.
 *
 * Configs are JSON objects with four sections (see docs/config.md). Unknown
 * keys are errors that name the full key path. Relative paths resolve
 * against the directory holding the config file.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <openssl/evp.h>

#include "errors.hpp"
#include "fermion.hpp"
#include "io.hpp"
#include "pauli.hpp"
#include "qpe.hpp"
#include "report.hpp"
#include "resources.hpp"
#include "spin_models.hpp"
#include "statevector.hpp"
#include "trotter.hpp"

namespace hamkit {

namespace fs = std::filesystem;

enum class HamiltonianSource { pauli_file, tensor_file, spin_model };
enum class AlgorithmKind { phase_estimation, time_evolution, controlled_time_evolution };
enum class AnalysisKind { resources, simulate, qpe_distribution, eigen };

struct HamiltonianConfig {
    HamiltonianSource source = HamiltonianSource::spin_model;
    std::string path;
    FermionMapping mapping = FermionMapping::jordan_wigner;
    SpinModelSpec spin;
};

struct EncodingConfig {
    std::optional<double> max_error;
    std::optional<TrotterOrder> order;
    std::optional<std::uint64_t> steps;
    OrderingStrategy ordering;
};

struct CircuitConfig {
    AlgorithmKind algorithm = AlgorithmKind::time_evolution;
    std::optional<double> max_energy_error;
    std::optional<double> failure_probability;
    std::optional<double> evolution_time;
    std::optional<std::size_t> phase_qubits;
    BudgetSplit split;
};

struct AnalysisConfig {
    AnalysisKind type = AnalysisKind::resources;
    std::optional<std::string> initial_bits;
    std::optional<std::string> amplitude_file;
    std::string output = "report";
    SynthesisModel synthesis;
    std::optional<double> synthesis_budget;
};

struct RunConfig {
    HamiltonianConfig hamiltonian;
    EncodingConfig encoding;
    CircuitConfig circuit;
    AnalysisConfig analysis;
    fs::path base_dir;
};

namespace detail {

inline ConfigError config_error(const std::string &path, const std::string &msg) {
    return ConfigError("cli-driver", path + ": " + msg);
}

/// Typed view of one config object that rejects keys outside `allowed`.
class ConfigObject {
  public:
    ConfigObject(const json &j, std::string path, std::set<std::string> allowed)
        : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw config_error(path_, "expected an object");
        }
        for (const auto &[k, v] : j_.items()) {
            if (!allowed.count(k)) {
                throw config_error(key_path(k), "unknown key");
            }
        }
    }

    [[nodiscard]] bool has(const std::string &k) const { return j_.contains(k); }
    [[nodiscard]] std::string key_path(const std::string &k) const {
        return path_.empty() ? k : path_ + "." + k;
    }
    [[nodiscard]] const json &raw(const std::string &k) const { return j_.at(k); }

    [[nodiscard]] std::optional<double> number(const std::string &k) const {
        if (!has(k)) {
            return std::nullopt;
        }
        const json &v = j_.at(k);
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
            throw config_error(key_path(k), "expected a finite number");
        }
        return v.get<double>();
    }
    [[nodiscard]] std::optional<double> positive(const std::string &k) const {
        auto v = number(k);
        if (v && !(*v > 0.0)) {
            throw config_error(key_path(k), "must be positive");
        }
        return v;
    }
    [[nodiscard]] std::optional<std::uint64_t> count(const std::string &k,
                                                     std::uint64_t min = 1) const {
        if (!has(k)) {
            return std::nullopt;
        }
        const json &v = j_.at(k);
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0) ||
            v.get<std::uint64_t>() < min) {
            throw config_error(key_path(k), "expected an integer >= " +
                                                std::to_string(min));
        }
        return v.get<std::uint64_t>();
    }
    [[nodiscard]] std::optional<std::string> string(const std::string &k) const {
        if (!has(k)) {
            return std::nullopt;
        }
        if (!j_.at(k).is_string()) {
            throw config_error(key_path(k), "expected a string");
        }
        return j_.at(k).get<std::string>();
    }
    template <class E>
    [[nodiscard]] std::optional<E>
    choice(const std::string &k, const std::vector<std::pair<std::string, E>> &options) const {
        auto s = string(k);
        if (!s) {
            return std::nullopt;
        }
        std::string names;
        for (const auto &[name, value] : options) {
            if (name == *s) {
                return value;
            }
            names += (names.empty() ? "" : ", ") + name;
        }
        throw config_error(key_path(k), "unknown value '" + *s + "' (expected one of " +
                                            names + ")");
    }
    [[nodiscard]] ConfigObject object(const std::string &k,
                                      std::set<std::string> allowed) const {
        return {j_.at(k), key_path(k), std::move(allowed)};
    }

  private:
    const json &j_;
    std::string path_;
};

template <class T>
T require(std::optional<T> v, const ConfigObject &o, const std::string &k) {
    if (!v) {
        throw config_error(o.key_path(k), "required key is missing");
    }
    return *v;
}

inline HamiltonianConfig parse_hamiltonian(const ConfigObject &o) {
    HamiltonianConfig h;
    h.source = require(o.choice<HamiltonianSource>(
                           "source", {{"pauli_file", HamiltonianSource::pauli_file},
                                      {"tensor_file", HamiltonianSource::tensor_file},
                                      {"spin_model", HamiltonianSource::spin_model}}),
                       o, "source");
    h.mapping = o.choice<FermionMapping>(
                     "mapping", {{"jordan_wigner", FermionMapping::jordan_wigner},
                                 {"bravyi_kitaev", FermionMapping::bravyi_kitaev}})
                    .value_or(FermionMapping::jordan_wigner);
    if (h.source == HamiltonianSource::spin_model) {
        if (o.has("path")) {
            throw config_error(o.key_path("path"), "not used with source spin_model");
        }
        if (!o.has("spin_model")) {
            throw config_error(o.key_path("spin_model"), "required key is missing");
        }
        const auto s = o.object("spin_model",
                                {"model", "sites", "coupling", "delta", "field", "boundary"});
        h.spin.model = require(s.choice<SpinModel>("model", {{"xxz", SpinModel::xxz_chain},
                                                             {"tfim", SpinModel::tfim_chain}}),
                               s, "model");
        h.spin.sites = require(s.count("sites", 2), s, "sites");
        h.spin.coupling = s.number("coupling").value_or(1.0);
        if (h.spin.model == SpinModel::xxz_chain) {
            if (s.has("field")) {
                throw config_error(s.key_path("field"), "only valid for model tfim");
            }
            h.spin.field = s.number("delta").value_or(1.0);
        } else {
            if (s.has("delta")) {
                throw config_error(s.key_path("delta"), "only valid for model xxz");
            }
            h.spin.field = s.number("field").value_or(1.0);
        }
        h.spin.boundary = s.choice<Boundary>("boundary", {{"open", Boundary::open},
                                                          {"periodic", Boundary::periodic}})
                              .value_or(Boundary::open);
    } else {
        if (o.has("spin_model")) {
            throw config_error(o.key_path("spin_model"), "only valid with source spin_model");
        }
        h.path = require(o.string("path"), o, "path");
    }
    if (h.source != HamiltonianSource::tensor_file && o.has("mapping")) {
        throw config_error(o.key_path("mapping"), "only valid with source tensor_file");
    }
    return h;
}

inline EncodingConfig parse_encoding(const ConfigObject &o) {
    EncodingConfig e;
    const auto method = o.string("method").value_or("trotter");
    if (method != "trotter") {
        throw config_error(o.key_path("method"),
                           "unknown value '" + method + "' (expected trotter)");
    }
    e.max_error = o.positive("max_error");
    if (o.has("order")) {
        const auto s = *o.string("order");
        if (s == "first") {
            e.order = TrotterOrder::first;
        } else if (s == "second") {
            e.order = TrotterOrder::second;
        } else if (s != "auto") {
            throw config_error(o.key_path("order"),
                               "unknown value '" + s + "' (expected first, second, auto)");
        }
    }
    e.steps = o.count("steps");
    using K = OrderingStrategy::Kind;
    e.ordering.kind = o.choice<K>("ordering",
                                  {{"as_given", K::as_given},
                                   {"lexicographic", K::lexicographic},
                                   {"magnitude_descending", K::magnitude_descending},
                                   {"random", K::random},
                                   {"custom", K::custom}})
                          .value_or(K::as_given);
    if (o.has("seed")) {
        if (e.ordering.kind != K::random) {
            throw config_error(o.key_path("seed"), "only valid with ordering random");
        }
        e.ordering.seed = *o.count("seed", 0);
    }
    if (e.ordering.kind == K::custom) {
        const auto key = o.key_path("permutation");
        if (!o.has("permutation") || !o.raw("permutation").is_array()) {
            throw config_error(key, "custom ordering needs an index array");
        }
        for (const auto &v : o.raw("permutation")) {
            if (!v.is_number_integer() ||
                (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
                throw config_error(key, "entries must be nonnegative integers");
            }
            e.ordering.permutation.push_back(v.get<std::size_t>());
        }
    } else if (o.has("permutation")) {
        throw config_error(o.key_path("permutation"), "only valid with ordering custom");
    }
    return e;
}

inline CircuitConfig parse_circuit(const ConfigObject &o) {
    CircuitConfig c;
    c.algorithm =
        require(o.choice<AlgorithmKind>(
                    "algorithm",
                    {{"phase_estimation", AlgorithmKind::phase_estimation},
                     {"time_evolution", AlgorithmKind::time_evolution},
                     {"controlled_time_evolution", AlgorithmKind::controlled_time_evolution}}),
                o, "algorithm");
    c.max_energy_error = o.positive("max_energy_error");
    c.failure_probability = o.positive("failure_probability");
    if (c.failure_probability && !(*c.failure_probability < 1.0)) {
        throw config_error(o.key_path("failure_probability"), "must be below 1");
    }
    c.evolution_time = o.positive("evolution_time");
    if (auto m = o.count("phase_qubits")) {
        if (*m > kMaxPhaseQubits) {
            throw config_error(o.key_path("phase_qubits"),
                               "at most " + std::to_string(kMaxPhaseQubits));
        }
        c.phase_qubits = static_cast<std::size_t>(*m);
    }
    if (o.has("budget_split")) {
        const auto s = o.object("budget_split", {"trotter", "discretization", "synthesis"});
        c.split.trotter = require(s.number("trotter"), s, "trotter");
        c.split.discretization = require(s.number("discretization"), s, "discretization");
        c.split.synthesis = require(s.number("synthesis"), s, "synthesis");
        try {
            c.split.validate();
        } catch (const Error &e) {
            throw config_error(o.key_path("budget_split"), e.what());
        }
    }
    return c;
}

inline AnalysisConfig parse_analysis(const ConfigObject &o) {
    AnalysisConfig a;
    a.type = require(o.choice<AnalysisKind>("type",
                                            {{"resources", AnalysisKind::resources},
                                             {"simulate", AnalysisKind::simulate},
                                             {"qpe_distribution", AnalysisKind::qpe_distribution},
                                             {"eigen", AnalysisKind::eigen}}),
                     o, "type");
    if (o.has("initial_state")) {
        const json &v = o.raw("initial_state");
        if (v.is_string()) {
            a.initial_bits = v.get<std::string>();
            if (a.initial_bits->empty() ||
                a.initial_bits->find_first_not_of("01") != std::string::npos) {
                throw config_error(o.key_path("initial_state"),
                                   "bitstring must be a nonempty string of 0/1");
            }
        } else {
            const auto s = o.object("initial_state", {"amplitude_file"});
            a.amplitude_file = require(s.string("amplitude_file"), s, "amplitude_file");
        }
    }
    if (auto out = o.string("output")) {
        if (out->empty() || out->find('/') != std::string::npos) {
            throw config_error(o.key_path("output"), "must be a plain file stem");
        }
        a.output = *out;
    }
    if (o.has("synthesis")) {
        const auto s = o.object("synthesis", {"a", "b", "budget"});
        a.synthesis.a = s.count("a", 0).value_or(a.synthesis.a);
        a.synthesis.b = s.positive("b").value_or(a.synthesis.b);
        a.synthesis_budget = s.positive("budget");
    }
    return a;
}

} // namespace detail

/// Validates a config document; `base_dir` anchors relative paths.
[[nodiscard]] inline RunConfig parse_config(const json &doc, fs::path base_dir = {}) {
    const detail::ConfigObject root(doc, "", {"hamiltonian", "encoding", "circuit", "analysis"});
    RunConfig cfg;
    cfg.base_dir = std::move(base_dir);
    for (const char *k : {"hamiltonian", "circuit", "analysis"}) {
        if (!root.has(k)) {
            throw detail::config_error(k, "required section is missing");
        }
    }
    cfg.hamiltonian = detail::parse_hamiltonian(
        root.object("hamiltonian", {"source", "path", "mapping", "spin_model"}));
    if (root.has("encoding")) {
        cfg.encoding = detail::parse_encoding(root.object(
            "encoding", {"method", "max_error", "order", "steps", "ordering", "seed",
                         "permutation"}));
    }
    cfg.circuit = detail::parse_circuit(root.object(
        "circuit", {"algorithm", "max_energy_error", "failure_probability",
                    "evolution_time", "phase_qubits", "budget_split"}));
    cfg.analysis = detail::parse_analysis(root.object(
        "analysis", {"type", "initial_state", "output", "synthesis"}));
    return cfg;
}

[[nodiscard]] inline json load_config_json(const fs::path &path) {
    std::string text;
    try {
        text = detail::read_file(path.string(), "cli-driver");
    } catch (const InputError &e) {
        throw ConfigError("cli-driver", e.what());
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw ConfigError("cli-driver", path.string() + ": " + e.what());
    }
}

namespace detail {

/// Literal JSON when it parses, otherwise the raw text as a string.
inline json parse_scalar(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &) {
        return json(text);
    }
}

inline std::vector<std::string> split_key(const std::string &key) {
    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string p; std::getline(ss, p, '.');) {
        if (p.empty()) {
            throw ConfigError("cli-driver", "malformed key '" + key + "'");
        }
        parts.push_back(p);
    }
    if (parts.empty()) {
        throw ConfigError("cli-driver", "empty key");
    }
    return parts;
}

} // namespace detail

/// Sets `key` (dotted path) to `value`, creating intermediate objects.
inline void set_key(json &doc, const std::string &key, json value) {
    json *node = &doc;
    const auto parts = detail::split_key(key);
    if (!doc.is_object()) {
        throw ConfigError("cli-driver", key + ": config root is not an object");
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        json &next = (*node)[parts[i]];
        if (next.is_null()) {
            next = json::object();
        }
        if (!next.is_object()) {
            throw ConfigError("cli-driver", key + ": '" + parts[i] + "' is not a section");
        }
        node = &next;
    }
    (*node)[parts.back()] = std::move(value);
}

[[nodiscard]] inline bool has_key(const json &doc, const std::string &key) {
    const json *node = &doc;
    for (const auto &p : detail::split_key(key)) {
        if (!node->is_object() || !node->contains(p)) {
            return false;
        }
        node = &node->at(p);
    }
    return true;
}

/// Applies "a.b.c=value"; the value is read as JSON when possible.
inline void apply_override(json &doc, const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("cli-driver", "override '" + assignment + "' is not KEY=VALUE");
    }
    set_key(doc, assignment.substr(0, eq), detail::parse_scalar(assignment.substr(eq + 1)));
}

[[nodiscard]] inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw InvariantError("cli-driver", "SHA-256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

namespace detail {

inline std::string resolve(const RunConfig &cfg, const std::string &p) {
    const fs::path path(p);
    return (path.is_absolute() || cfg.base_dir.empty() ? path : cfg.base_dir / path)
        .string();
}

inline std::string_view source_name(HamiltonianSource s) {
    switch (s) {
    case HamiltonianSource::pauli_file:
        return "pauli_file";
    case HamiltonianSource::tensor_file:
        return "tensor_file";
    case HamiltonianSource::spin_model:
        return "spin_model";
    }
    return "?";
}

inline std::string_view algorithm_name(AlgorithmKind a) {
    switch (a) {
    case AlgorithmKind::phase_estimation:
        return "phase_estimation";
    case AlgorithmKind::time_evolution:
        return "time_evolution";
    case AlgorithmKind::controlled_time_evolution:
        return "controlled_time_evolution";
    }
    return "?";
}

inline std::string_view analysis_name(AnalysisKind a) {
    switch (a) {
    case AnalysisKind::resources:
        return "resources";
    case AnalysisKind::simulate:
        return "simulate";
    case AnalysisKind::qpe_distribution:
        return "qpe_distribution";
    case AnalysisKind::eigen:
        return "eigen";
    }
    return "?";
}

} // namespace detail

[[nodiscard]] inline PauliSum load_hamiltonian(const RunConfig &cfg) {
    const auto &h = cfg.hamiltonian;
    switch (h.source) {
    case HamiltonianSource::pauli_file:
        return read_pauli_text(detail::resolve(cfg, h.path));
    case HamiltonianSource::tensor_file:
        return map_to_qubits(read_tensor_file(detail::resolve(cfg, h.path)), h.mapping);
    case HamiltonianSource::spin_model:
        return generate(h.spin).simplify();
    }
    throw InvariantError("cli-driver", "unknown Hamiltonian source");
}

struct HamgenStage {
    std::string name;
    std::string input_hash;
    std::vector<std::string> outputs;
    bool reused = false;
};

struct HamgenResult {
    std::vector<HamgenStage> stages;
    std::string pauli_path;
};

namespace detail {

inline std::optional<json> read_manifest(const fs::path &path) {
    if (!fs::exists(path)) {
        return std::nullopt;
    }
    try {
        return json::parse(read_file(path.string(), "cli-driver"));
    } catch (const json::parse_error &) {
        return std::nullopt;
    }
}

/// True when the manifest recorded this stage with the same input hash and
/// every listed output still has the recorded content hash.
inline bool stage_hit(const std::optional<json> &manifest, const fs::path &dir,
                      const std::string &stage, const std::string &input_hash) {
    if (!manifest || !manifest->contains("stages") || !(*manifest)["stages"].is_object() ||
        !(*manifest)["stages"].contains(stage)) {
        return false;
    }
    const json &s = (*manifest)["stages"][stage];
    if (!s.is_object() || s.value("input_hash", "") != input_hash ||
        !s.contains("outputs") || !s["outputs"].is_object()) {
        return false;
    }
    for (const auto &[file, hash] : s["outputs"].items()) {
        const fs::path p = dir / file;
        if (!fs::exists(p) || !hash.is_string() ||
            sha256_hex(read_file(p.string(), "cli-driver")) != hash.get<std::string>()) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/**
 * @brief Writes the Hamiltonian files for `cfg` into `out_dir`.
 *
 * Stages: "tensors" (tensor sources only) normalizes the input into
 * tensors.json; "pauli" writes hamiltonian.pauli. Each stage's input hash
 * covers its upstream content and options, so a rerun skips any stage whose
 * inputs are unchanged.
 */
inline HamgenResult hamgen(const RunConfig &cfg, const fs::path &out_dir,
                           std::ostream &log) {
    fs::create_directories(out_dir);
    const fs::path manifest_path = out_dir / "manifest.json";
    const auto previous = detail::read_manifest(manifest_path);
    json stages = json::object();
    HamgenResult result;

    auto record = [&](HamgenStage stage) {
        json outs = json::object();
        for (const auto &f : stage.outputs) {
            outs[f] = sha256_hex(detail::read_file((out_dir / f).string(), "cli-driver"));
        }
        stages[stage.name] = json{{"input_hash", stage.input_hash}, {"outputs", outs}};
        log << (stage.reused ? "manifest hit: " : "computed: ") << stage.name << " -> ";
        for (std::size_t i = 0; i < stage.outputs.size(); ++i) {
            log << (i ? ", " : "") << stage.outputs[i];
        }
        log << "\n";
        result.stages.push_back(std::move(stage));
    };

    const auto &h = cfg.hamiltonian;
    std::string pauli_input;
    std::optional<FermionTensors> tensors;
    if (h.source == HamiltonianSource::tensor_file) {
        const std::string raw = detail::read_file(detail::resolve(cfg, h.path), "ham-io");
        HamgenStage st{"tensors", sha256_hex("tensors-v1\n" + raw), {"tensors.json"}, false};
        if (detail::stage_hit(previous, out_dir, st.name, st.input_hash)) {
            st.reused = true;
        } else {
            tensors = tensors_from_json(detail::parse_json(raw, h.path, "ham-io"), h.path);
            write_tensor_file(*tensors, (out_dir / "tensors.json").string());
        }
        record(st);
        pauli_input = std::string("mapping=") +
                      (h.mapping == FermionMapping::jordan_wigner ? "jordan_wigner"
                                                                  : "bravyi_kitaev") +
                      "\n" + detail::read_file((out_dir / "tensors.json").string(), "ham-io");
    } else if (h.source == HamiltonianSource::pauli_file) {
        pauli_input = "pauli\n" + detail::read_file(detail::resolve(cfg, h.path), "ham-io");
    } else {
        const auto &s = h.spin;
        pauli_input = std::string("spin_model\nmodel=") +
                      (s.model == SpinModel::xxz_chain ? "xxz" : "tfim") +
                      "\nsites=" + std::to_string(s.sites) +
                      "\ncoupling=" + format_double(s.coupling) +
                      "\nfield=" + format_double(s.field) + "\nboundary=" +
                      (s.boundary == Boundary::open ? "open" : "periodic") + "\n";
    }

    HamgenStage st{"pauli", sha256_hex("pauli-v1\n" + pauli_input), {"hamiltonian.pauli"},
                   false};
    if (detail::stage_hit(previous, out_dir, st.name, st.input_hash)) {
        st.reused = true;
    } else {
        PauliSum sum(1);
        if (h.source == HamiltonianSource::tensor_file) {
            if (!tensors) {
                tensors = read_tensor_file((out_dir / "tensors.json").string());
            }
            sum = map_to_qubits(*tensors, h.mapping);
        } else {
            sum = load_hamiltonian(cfg);
        }
        write_pauli_text(sum, (out_dir / "hamiltonian.pauli").string());
    }
    record(st);
    result.pauli_path = (out_dir / "hamiltonian.pauli").string();

    const json manifest{{"format", "hamkit-manifest-v1"}, {"stages", stages}};
    detail::write_file(manifest_path.string(), manifest.dump(2) + "\n", "cli-driver");
    return result;
}

namespace detail {

inline void put_encoding(ReportSection &s, const TrotterPlan &plan,
                         std::string_view order_source, std::string_view steps_source) {
    s.set("method", "trotter");
    s.set("order", std::string(to_string(plan.order)));
    s.set("order_source", std::string(order_source));
    s.set("steps", plan.steps);
    s.set("steps_source", std::string(steps_source));
    s.set("time", plan.time);
    s.set("ordering", std::string(to_string(plan.ordering.kind)));
    if (plan.ordering.kind == OrderingStrategy::Kind::random) {
        s.set("seed", plan.ordering.seed);
    }
    s.set("operator_error_budget", plan.budget);
    s.set("error_bound", plan.error_bound);
    s.set("terms", static_cast<std::uint64_t>(plan.term_sequence.size()));
}

inline StateVector data_state(const RunConfig &cfg, std::size_t n) {
    const auto &a = cfg.analysis;
    StateVector psi;
    if (a.amplitude_file) {
        psi = read_amplitude_file(resolve(cfg, *a.amplitude_file));
    } else if (a.initial_bits) {
        psi = StateVector::from_bitstring(*a.initial_bits);
    } else {
        psi = StateVector::basis(n, 0);
    }
    if (psi.num_qubits() != n) {
        throw InputError("cli-driver", "analysis.initial_state has " +
                                           std::to_string(psi.num_qubits()) +
                                           " qubits, Hamiltonian has " + std::to_string(n));
    }
    return psi;
}

/// |0...0> on `ancillas` leading qubits tensored with psi; with `set_first`
/// the first ancilla is |1> instead.
inline StateVector with_ancillas(const StateVector &psi, std::size_t ancillas,
                                 bool set_first = false) {
    const std::size_t n = psi.num_qubits() + ancillas;
    if (n > kStateQubitCap) {
        throw CapExceeded("statevec-sim", "register of " + std::to_string(n) +
                                              " qubits exceeds the state cap of " +
                                              std::to_string(kStateQubitCap));
    }
    std::vector<cplx> amps(std::size_t{1} << n, cplx{});
    const std::size_t offset = set_first ? std::size_t{1} << (n - 1) : 0;
    for (std::size_t j = 0; j < psi.dim(); ++j) {
        amps[offset + j] = psi[j];
    }
    return StateVector::from_amplitudes(std::move(amps));
}

} // namespace detail

/**
 * @brief Runs one configured workflow and returns its report.
 *
 * Every derived quantity is echoed together with whether it was derived or
 * pinned by the config.
 */
[[nodiscard]] inline AnalysisReport run_analysis(const RunConfig &cfg) {
    AnalysisReport report;
    const PauliSum h = load_hamiltonian(cfg);
    if (!h.is_hermitian()) {
        throw InputError("cli-driver", "Hamiltonian is not Hermitian");
    }
    const std::size_t n = h.num_qubits();
    {
        auto &s = report.section("hamiltonian");
        s.set("source", std::string(detail::source_name(cfg.hamiltonian.source)));
        if (cfg.hamiltonian.source == HamiltonianSource::tensor_file) {
            s.set("mapping", cfg.hamiltonian.mapping == FermionMapping::jordan_wigner
                                 ? "jordan_wigner"
                                 : "bravyi_kitaev");
        }
        s.set("qubits", static_cast<std::uint64_t>(n));
        s.set("terms", static_cast<std::uint64_t>(h.size()));
        s.set("one_norm", coeff_one_norm(h));
    }

    const auto &enc = cfg.encoding;
    const auto &circ = cfg.circuit;
    const auto &an = cfg.analysis;
    if (an.type == AnalysisKind::eigen) {
        const auto eig = eigendecompose(h);
        std::vector<double> values(eig.values.data(), eig.values.data() + eig.values.size());
        auto &s = report.section("eigen");
        s.set("ground_energy", values.front());
        s.set("spectral_gap", values.size() > 1 ? values[1] - values[0] : 0.0);
        s.set("eigenvalues", values);
        return report;
    }

    const std::string_view order_source = enc.order ? "pinned" : "derived";
    const std::string_view steps_source = enc.steps ? "pinned" : "derived";
    QpeOptions qopt;
    qopt.energy_error = circ.max_energy_error.value_or(qopt.energy_error);
    qopt.failure_probability = circ.failure_probability.value_or(qopt.failure_probability);
    qopt.split = circ.split;
    qopt.order = enc.order;
    qopt.ordering = enc.ordering;
    qopt.synthesis = an.synthesis;
    qopt.evolution_time = circ.evolution_time;
    qopt.phase_qubits = circ.phase_qubits;
    qopt.steps = enc.steps;

    if (circ.algorithm == AlgorithmKind::phase_estimation) {
        if (enc.max_error) {
            throw ConfigError("cli-driver",
                              "encoding.max_error: phase_estimation derives the Trotter "
                              "budget from circuit.max_energy_error and circuit.budget_split");
        }
        if (an.synthesis_budget) {
            throw ConfigError("cli-driver",
                              "analysis.synthesis.budget: phase_estimation derives the "
                              "synthesis budget from circuit.budget_split");
        }
        const QpeParams params = optimize_time(h, qopt);
        detail::put_encoding(report.section("encoding"), params.plan, order_source,
                             steps_source);
        {
            auto &s = report.section("circuit");
            s.set("algorithm", "phase_estimation");
            s.set("evolution_time", params.time);
            s.set("time_source", circ.evolution_time ? "pinned" : "derived");
            s.set("time_candidates", static_cast<std::uint64_t>(params.candidates));
            s.set("shift", params.shift);
            s.set("phase_qubits", static_cast<std::uint64_t>(params.bits.total));
            s.set("phase_qubits_source", circ.phase_qubits ? "pinned" : "derived");
            s.set("precision_bits", static_cast<std::uint64_t>(params.bits.precision));
            s.set("confidence_bits", static_cast<std::uint64_t>(params.bits.confidence));
            s.set("max_energy_error", params.energy_error);
            s.set("failure_probability", params.failure_probability);
            s.set("budget_split_trotter", params.split.trotter);
            s.set("budget_split_discretization", params.split.discretization);
            s.set("budget_split_synthesis", params.split.synthesis);
            s.set("synthesis_budget", params.split.synthesis * params.energy_error * params.time);
            s.set("aliasing_safe", params.aliasing_safe);
            s.set("phase_convention",
                  "U = exp(-i (H + shift) t); outcome k estimates theta = k / 2^m; "
                  "E = 2 pi theta / t - shift");
        }
        switch (an.type) {
        case AnalysisKind::resources:
            put_resources(report.section("resources"), params.resources);
            break;
        case AnalysisKind::qpe_distribution:
        case AnalysisKind::simulate: {
            const StateVector psi0 = detail::data_state(cfg, n);
            const auto probs = qpe_distribution_analytic(h, params, psi0);
            const auto top = static_cast<std::uint64_t>(
                std::max_element(probs.begin(), probs.end()) - probs.begin());
            const double scale = std::ldexp(1.0, static_cast<int>(params.bits.total));
            auto &s = report.section("qpe_distribution");
            s.set("most_likely_outcome", top);
            s.set("most_likely_probability", probs[top]);
            s.set("energy_estimate",
                  2.0 * std::numbers::pi * (static_cast<double>(top) / scale) / params.time -
                      params.shift);
            // success window around the eigenvalue carrying the largest weight
            const auto eig = eigendecompose(h);
            const Eigen::VectorXcd ov = eig.vectors.adjoint() * psi0.to_eigen();
            Eigen::Index jmax = 0;
            ov.cwiseAbs2().maxCoeff(&jmax);
            const double theta =
                (eig.values(jmax) + params.shift) * params.time / (2 * std::numbers::pi);
            s.set("dominant_eigenvalue", eig.values(jmax));
            s.set("dominant_weight", std::norm(ov(jmax)));
            s.set("dominant_window_mass", success_mass(probs, theta, params.bits.precision));
            if (an.type == AnalysisKind::simulate) {
                const auto g = build_qpe(params);
                const auto out = run(g, detail::with_ancillas(psi0, params.bits.total));
                const auto measured = register_marginal(out, 0, params.bits.total);
                auto &sim = report.section("simulation");
                sim.set("width", static_cast<std::uint64_t>(g.width()));
                sim.set("gates", flattened_size(g));
                sim.set("total_variation_vs_analytic", total_variation(measured, probs));
                sim.set("probabilities", measured);
            } else {
                s.set("probabilities", probs);
            }
            break;
        }
        case AnalysisKind::eigen:
            break;
        }
        return report;
    }

    // pure or controlled time evolution
    const bool controlled = circ.algorithm == AlgorithmKind::controlled_time_evolution;
    if (an.type == AnalysisKind::qpe_distribution) {
        throw ConfigError("cli-driver",
                          "analysis.type: qpe_distribution needs circuit.algorithm "
                          "phase_estimation");
    }
    double t = 0.0;
    std::string_view time_source = "pinned";
    if (circ.evolution_time) {
        t = *circ.evolution_time;
    } else {
        t = optimize_time(h, qopt).time;
        time_source = "qpe_optimized";
    }
    TrotterPlan plan;
    std::optional<double> synth_budget = an.synthesis_budget;
    if (!synth_budget && enc.max_error) {
        synth_budget = enc.max_error;
    }
    if (enc.steps) {
        TrotterBound bound(apply_ordering(h, enc.ordering));
        std::optional<TrotterPlan> best;
        for (TrotterOrder o : enc.order ? std::vector{*enc.order}
                                        : std::vector{TrotterOrder::first,
                                                      TrotterOrder::second}) {
            TrotterPlan p = plan_for(bound, o, t, *enc.steps, enc.ordering, 0.0);
            if (!best || (p.error_bound < best->error_bound)) {
                best = std::move(p);
            }
        }
        plan = std::move(*best);
    } else {
        if (!enc.max_error) {
            throw ConfigError("cli-driver",
                              "encoding.max_error: required unless encoding.steps is set");
        }
        OrderSelection sel{an.synthesis, synth_budget};
        plan = derive_steps(h, t, *enc.max_error, enc.order, enc.ordering, sel);
    }
    detail::put_encoding(report.section("encoding"), plan, order_source, steps_source);
    const AlgorithmGraph g = build_time_evolution(plan, controlled);
    {
        auto &s = report.section("circuit");
        s.set("algorithm", std::string(detail::algorithm_name(circ.algorithm)));
        s.set("evolution_time", t);
        s.set("time_source", std::string(time_source));
        s.set("width", static_cast<std::uint64_t>(g.width()));
        s.set("definitions", static_cast<std::uint64_t>(g.size()));
    }
    if (an.type == AnalysisKind::resources) {
        if (!synth_budget) {
            throw ConfigError("cli-driver",
                              "analysis.synthesis.budget: required when encoding.max_error "
                              "is not set");
        }
        auto &s = report.section("resources");
        s.set("synthesis_budget", *synth_budget);
        put_resources(s, count(g, an.synthesis, *synth_budget));
        return report;
    }

    // simulate: compare against exact evolution of the same input
    const StateVector psi0 = detail::data_state(cfg, n);
    const auto eig = eigendecompose(h);
    auto &s = report.section("simulation");
    s.set("gates", flattened_size(g));
    if (!controlled) {
        const StateVector got = run(g, psi0);
        const StateVector want = exact_evolution(eig, t, psi0);
        const double f = fidelity(got, want);
        s.set("fidelity", f);
        s.set("infidelity", 1.0 - f);
        s.set("state_distance", state_distance(got, want));
    } else {
        const StateVector got = run(g, detail::with_ancillas(psi0, 1, true));
        const StateVector want = detail::with_ancillas(exact_evolution(eig, t, psi0), 1, true);
        const double f = fidelity(got, want);
        s.set("control_state", "1");
        s.set("fidelity", f);
        s.set("infidelity", 1.0 - f);
        s.set("state_distance", state_distance(got, want));
    }
    return report;
}

struct AnalyzeOptions {
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    ReportFormat format = ReportFormat::structured;
};

/// Applies overrides and the seed flag to a loaded config document.
inline void prepare_config(json &doc, const AnalyzeOptions &opt) {
    for (const auto &o : opt.overrides) {
        apply_override(doc, o);
    }
    // the seed only feeds random orderings; other configs ignore it
    if (opt.seed && has_key(doc, "encoding.ordering") &&
        doc["encoding"]["ordering"] == "random") {
        set_key(doc, "encoding.seed", *opt.seed);
    }
}

[[nodiscard]] inline fs::path report_path(const RunConfig &cfg, const fs::path &out_dir,
                                          ReportFormat format) {
    return out_dir /
           (cfg.analysis.output + (format == ReportFormat::structured ? ".json" : ".csv"));
}

/// Loads, runs and writes one report; returns the report path.
inline fs::path analyze(const fs::path &config_path, const fs::path &out_dir,
                        const AnalyzeOptions &opt, std::ostream &log) {
    json doc = load_config_json(config_path);
    prepare_config(doc, opt);
    const RunConfig cfg = parse_config(doc, config_path.parent_path());
    const AnalysisReport report = run_analysis(cfg);
    fs::create_directories(out_dir);
    const fs::path out = report_path(cfg, out_dir, opt.format);
    write_report(report, out.string(), opt.format);
    log << "wrote " << out.string() << "\n";
    return out;
}

struct GridAxis {
    std::string key;
    std::vector<json> values;
};

/// Parses "key=v1,v2,..." where an entry "a..b" expands to the integers a..b.
[[nodiscard]] inline GridAxis parse_grid_axis(const std::string &spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("cli-driver", "grid '" + spec + "' is not KEY=V1,V2,...");
    }
    GridAxis axis{spec.substr(0, eq), {}};
    std::stringstream ss(spec.substr(eq + 1));
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) {
            continue;
        }
        const auto dots = item.find("..");
        long long lo = 0;
        long long hi = 0;
        char tail = 0;
        if (dots != std::string::npos &&
            std::sscanf(item.c_str(), "%lld..%lld%c", &lo, &hi, &tail) == 2) {
            if (hi < lo || hi - lo > 100000) {
                throw ConfigError("cli-driver", "grid range '" + item + "' is invalid");
            }
            for (long long v = lo; v <= hi; ++v) {
                axis.values.emplace_back(v);
            }
        } else {
            axis.values.push_back(detail::parse_scalar(item));
        }
    }
    if (axis.values.empty()) {
        throw ConfigError("cli-driver", "grid '" + axis.key + "' has no values");
    }
    return axis;
}

struct SweepPoint {
    std::vector<json> values;
    json config;
    AnalysisReport report;
    std::string error;
    int exit_code = 0;
};

/**
 * @brief Materializes and runs every grid point of `tmpl`.
 *
 * Points are enumerated with the last axis varying fastest and run on up to
 * `jobs` threads; results are stored by index, so output order never depends
 * on scheduling. Grid keys must already exist in the template, except
 * encoding.seed, which may be introduced by a sweep over random orderings.
 */
[[nodiscard]] inline std::vector<SweepPoint>
run_sweep(const json &tmpl, const std::vector<GridAxis> &grid, const fs::path &base_dir,
          unsigned jobs) {
    if (grid.empty()) {
        throw ConfigError("cli-driver", "sweep needs at least one --grid axis");
    }
    std::set<std::string> seen;
    for (const auto &axis : grid) {
        if (!seen.insert(axis.key).second) {
            throw ConfigError("cli-driver", "grid key '" + axis.key + "' given twice");
        }
        if (!has_key(tmpl, axis.key) && axis.key != "encoding.seed") {
            throw ConfigError("cli-driver",
                              "grid key '" + axis.key + "' does not exist in the template");
        }
    }
    std::size_t total = 1;
    for (const auto &axis : grid) {
        total *= axis.values.size();
        if (total > 100000) {
            throw ConfigError("cli-driver", "sweep grid exceeds 100000 points");
        }
    }
    std::vector<SweepPoint> points(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i;
        std::vector<json> values(grid.size());
        for (std::size_t a = grid.size(); a-- > 0;) {
            values[a] = grid[a].values[rem % grid[a].values.size()];
            rem /= grid[a].values.size();
        }
        json cfg = tmpl;
        for (std::size_t a = 0; a < grid.size(); ++a) {
            set_key(cfg, grid[a].key, values[a]);
        }
        points[i].values = std::move(values);
        points[i].config = std::move(cfg);
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            auto &p = points[i];
            try {
                p.report = run_analysis(parse_config(p.config, base_dir));
            } catch (const Error &e) {
                p.error = "[" + e.origin() + "] " + e.what();
                p.exit_code = e.exit_code();
            } catch (const std::exception &e) {
                p.error = e.what();
                p.exit_code = static_cast<int>(ErrorKind::internal);
            }
        }
    };
    const unsigned threads =
        std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < threads; ++k) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &th : pool) {
        th.join();
    }
    return points;
}

/// Aggregate table: grid columns first, then the report columns.
[[nodiscard]] inline std::string format_sweep_table(const std::vector<GridAxis> &grid,
                                                    const std::vector<SweepPoint> &points) {
    std::vector<AnalysisReport> rows;
    for (const auto &p : points) {
        AnalysisReport r;
        auto &g = r.section("grid");
        for (std::size_t a = 0; a < grid.size(); ++a) {
            const json &v = p.values[a];
            g.set(grid[a].key, v.is_string() ? v.get<std::string>() : v.dump());
        }
        if (!p.error.empty()) {
            r.section("status").set("error", p.error);
        }
        for (const auto &s : p.report.sections) {
            r.sections.push_back(s);
        }
        rows.push_back(std::move(r));
    }
    return format_table(rows);
}

/// Runs a sweep and writes point_NNNN/{config.json,report} plus sweep.csv.
/// Returns the number of failed points.
inline std::size_t sweep(const fs::path &template_path, const std::vector<std::string> &specs,
                         const fs::path &out_dir, unsigned jobs, ReportFormat format,
                         std::ostream &log) {
    const json tmpl = load_config_json(template_path);
    std::vector<GridAxis> grid;
    for (const auto &s : specs) {
        grid.push_back(parse_grid_axis(s));
    }
    const auto points = run_sweep(tmpl, grid, template_path.parent_path(), jobs);
    fs::create_directories(out_dir);
    std::size_t failed = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "point_%04zu", i);
        const fs::path dir = out_dir / name;
        fs::create_directories(dir);
        detail::write_file((dir / "config.json").string(), points[i].config.dump(2) + "\n",
                           "cli-driver");
        if (points[i].error.empty()) {
            write_report(points[i].report,
                         (dir / (format == ReportFormat::structured ? "report.json"
                                                                    : "report.csv"))
                             .string(),
                         format);
        } else {
            ++failed;
            log << name << ": " << points[i].error << "\n";
        }
    }
    const fs::path table = out_dir / "sweep.csv";
    detail::write_file(table.string(), format_sweep_table(grid, points), "cli-driver");
    log << "wrote " << table.string() << " (" << points.size() << " points, " << failed
        << " failed)\n";
    return failed;
}

} // namespace hamkit
