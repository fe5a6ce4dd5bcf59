// Copyright 2026 The SNTH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SNTH_ERROR_HPP_
#define SNTH_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace snth {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the function (negative h, x < 0 for
// W0, mismatched dimensions, malformed parameter sets).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A finite input produced a result that is not representable as a double.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed: non positive-definite matrix, singular
// system, optimizer breakdown.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace snth

#endif  // SNTH_ERROR_HPP_
