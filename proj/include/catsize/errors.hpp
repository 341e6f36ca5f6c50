// Copyright 2026 The catsize Authors
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

#include <stdexcept>
#include <string>

namespace catsize {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside the mathematical domain of the operation
/// (e.g. a precision outside its validity interval).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A parameter is malformed (bad mode index, zero trials, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested joint Fock space exceeds the dense-oracle limit.
class SizingError : public Error {
 public:
  using Error::Error;
};

/// Probability mass lost above the Fock cutoff exceeds the tolerance.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double tail_mass)
      : Error(what), tail_mass_(tail_mass) {}
  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

}  // namespace catsize
