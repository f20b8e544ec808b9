// SPDX-License-Identifier: Apache-2.0
//
// cfran - pilot and analog combiner design for cell-free uplinks with one-bit ADCs
// Copyright (C) 2026 The cfran Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace cfran {

/// Malformed or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Base class of all numerical failures (CLI exit code 3).
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A received dimension carries zero power, so the one-bit gain is undefined.
class DegenerateSignalError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

/// Normalized correlation outside [-1, 1] beyond roundoff.
class InvalidCovarianceError : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class SingularMatrixError : public NumericalError
{
public:
    SingularMatrixError(const std::string &what, double condition)
        : NumericalError(what + " (condition number ~ " + std::to_string(condition) + ")"),
          condition_(condition)
    {
    }
    double condition() const { return condition_; }

private:
    double condition_;
};

} // namespace cfran
