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
 * Error types shared by every hamkit module.
 *
 * Each error carries a category (mapped onto the CLI exit codes) and the name
 * of the module that raised it.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hamkit {

enum class ErrorKind {
    config = 2,
    input = 3,
    cap_exceeded = 4,
    internal = 5,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string origin, const std::string &what)
        : std::runtime_error(what), kind_(kind), origin_(std::move(origin)) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string &origin() const noexcept { return origin_; }
    [[nodiscard]] int exit_code() const noexcept {
        return static_cast<int>(kind_);
    }

  private:
    ErrorKind kind_;
    std::string origin_;
};

class ConfigError : public Error {
  public:
    ConfigError(std::string origin, const std::string &what)
        : Error(ErrorKind::config, std::move(origin), what) {}
};

class InputError : public Error {
  public:
    InputError(std::string origin, const std::string &what)
        : Error(ErrorKind::input, std::move(origin), what) {}
};

class CapExceeded : public Error {
  public:
    CapExceeded(std::string origin, const std::string &what)
        : Error(ErrorKind::cap_exceeded, std::move(origin), what) {}
};

class InvariantError : public Error {
  public:
    InvariantError(std::string origin, const std::string &what)
        : Error(ErrorKind::internal, std::move(origin), what) {}
};

} // namespace hamkit
