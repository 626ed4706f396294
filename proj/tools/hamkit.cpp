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
// hamkit command line: hamgen, analyze, sweep.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hamkit/driver.hpp"

namespace {

hamkit::ReportFormat parse_format(const std::string &s) {
    if (s == "structured") {
        return hamkit::ReportFormat::structured;
    }
    if (s == "tabular") {
        return hamkit::ReportFormat::tabular;
    }
    throw hamkit::ConfigError("cli-driver",
                              "--format: expected structured or tabular, got '" + s + "'");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hamiltonian generation, Trotter encoding and resource analysis"};
    app.require_subcommand(1);

    std::string config;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::vector<std::string> grid;
    std::uint64_t seed = 0;
    std::string format = "structured";
    unsigned jobs = 1;

    auto *hamgen = app.add_subcommand("hamgen", "write Hamiltonian files and a manifest");
    hamgen->add_option("config", config, "run config (JSON)")->required();
    hamgen->add_option("--out", out_dir, "output directory");

    auto *analyze = app.add_subcommand("analyze", "encode, build and analyze");
    analyze->add_option("config", config, "run config (JSON)")->required();
    analyze->add_option("--out", out_dir, "output directory");
    analyze->add_option("--override", overrides, "KEY=VALUE, repeatable");
    auto *seed_opt = analyze->add_option("--seed", seed, "random-ordering seed");
    analyze->add_option("--format", format, "structured or tabular");

    auto *sweep = app.add_subcommand("sweep", "run a template config over a grid");
    sweep->add_option("template", config, "template config (JSON)")->required();
    sweep->add_option("--grid", grid, "KEY=V1,V2,... (integer ranges as A..B), repeatable");
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--jobs", jobs, "concurrent points")
        ->check(CLI::Range(1u, 1024u));
    sweep->add_option("--format", format, "per-point report format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(hamkit::ErrorKind::config);
    }

    try {
        if (*hamgen) {
            const auto cfg = hamkit::parse_config(hamkit::load_config_json(config),
                                                  std::filesystem::path(config).parent_path());
            const auto result = hamkit::hamgen(cfg, out_dir, std::cout);
            std::cout << "wrote " << result.pauli_path << "\n";
        } else if (*analyze) {
            hamkit::AnalyzeOptions opt;
            opt.overrides = overrides;
            if (*seed_opt) {
                opt.seed = seed;
            }
            opt.format = parse_format(format);
            hamkit::analyze(config, out_dir, opt, std::cout);
        } else if (*sweep) {
            const auto failed =
                hamkit::sweep(config, grid, out_dir, jobs, parse_format(format), std::cout);
            if (failed != 0) {
                return static_cast<int>(hamkit::ErrorKind::input);
            }
        }
    } catch (const hamkit::Error &e) {
        std::cerr << "error [" << e.origin() << "]: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "error [io]: " << e.what() << "\n";
        return static_cast<int>(hamkit::ErrorKind::input);
    } catch (const std::exception &e) {
        std::cerr << "error [internal]: " << e.what() << "\n";
        return static_cast<int>(hamkit::ErrorKind::internal);
    }
    return 0;
}
