// Copyright 2026 The DMMD Authors. All Rights Reserved.
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

#ifndef DMMD_ERRORS_HPP_
#define DMMD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dmmd {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument is out of range or inconsistent with another argument
// (rank larger than a dimension, mismatched shapes, bad rank profile).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data violates a data contract: non-finite entries, unsorted
// sequences, malformed files.
class InputError : public Error {
 public:
  using Error::Error;
};

// A numerical condition required by an algorithm does not hold: rank
// deficiency of an intermediate matrix, dependent joint vectors, failure of
// an iteration to converge.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

// A numerical precondition of a closed-form solution fails, e.g. the joint
// basis does not carry full rank through the data.
class PreconditionError : public DegeneracyError {
 public:
  using DegeneracyError::DegeneracyError;
};

}  // namespace dmmd

#endif  // DMMD_ERRORS_HPP_
