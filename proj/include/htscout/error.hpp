/*
 * SPDX-FileCopyrightText: Copyright 2026 The htscout Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HTSCOUT_ERROR_HPP
#define HTSCOUT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace htscout {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent netlist (parse or structural validation).
class NetlistError : public Error {
public:
    enum class Kind {
        Syntax,
        Arity,
        DuplicateDriver,
        UndeclaredNet,
        Cycle,
        FloatingInput,
        UnknownGateKind,
        UnknownNet,
        UnknownGate,
    };

    NetlistError(Kind kind, const std::string &message, int line = 0,
                 std::vector<std::string> nets = {})
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                         : message),
          kind_(kind), line_(line), nets_(std::move(nets)) {}

    [[nodiscard]] Kind kind() const { return kind_; }
    /// Source line (1-based) or 0 when the error is not tied to a line.
    [[nodiscard]] int line() const { return line_; }
    /// Nets involved, e.g. the members of a combinational cycle.
    [[nodiscard]] const std::vector<std::string> &nets() const { return nets_; }

private:
    Kind kind_;
    int line_;
    std::vector<std::string> nets_;
};

/// Invalid parameters or configuration handed to an operation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (degenerate line, factorization failure, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace htscout

#endif // HTSCOUT_ERROR_HPP
