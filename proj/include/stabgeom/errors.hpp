// Copyright 2026 The stabgeom Authors
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

namespace stabgeom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (matrix files, census files, CLI values).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a mathematical precondition, e.g. a
/// stabiliser matrix whose rows do not commute or a rank-deficient block.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive enumeration would exceed its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Two independent computations disagree. Never expected to fire.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// A census file does not match the hash recorded in its manifest.
class CensusError : public Error {
 public:
  using Error::Error;
};

}  // namespace stabgeom
