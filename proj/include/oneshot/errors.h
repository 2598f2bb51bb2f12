//
// Copyright 2026 The oneshot-topk Authors
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
//

#ifndef ONESHOT_ERRORS_H_
#define ONESHOT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace oneshot {

// Violated precondition or malformed input. The CLI maps this to exit code 2.
class InvalidParameterError : public std::invalid_argument {
 public:
  explicit InvalidParameterError(const std::string& what)
      : std::invalid_argument(what) {}
};

// A numerical routine could not reach its requested tolerance.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration or size budget was exceeded.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver did not converge within its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

// A constraint required for a privacy guarantee does not hold; the operation
// refuses to run rather than produce an unprotected result.
class ConstraintError : public std::runtime_error {
 public:
  explicit ConstraintError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace oneshot

#endif  // ONESHOT_ERRORS_H_
