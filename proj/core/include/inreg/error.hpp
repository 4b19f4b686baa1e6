// Copyright 2026 The inreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace inreg {

using Shape = std::vector<std::size_t>;

std::string shape_to_string(const Shape& shape);

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform for an operation.
class ShapeError : public Error {
public:
    ShapeError(std::string op, Shape lhs, Shape rhs);

    const std::string& op() const noexcept { return op_; }
    const Shape& lhs() const noexcept { return lhs_; }
    const Shape& rhs() const noexcept { return rhs_; }

private:
    std::string op_;
    Shape lhs_;
    Shape rhs_;
};

/// A NaN or Inf showed up where only finite values are allowed.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// File could not be read, written or parsed.
class IoError : public Error {
public:
    IoError(std::string path, const std::string& what);

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace inreg
