// Copyright 2026 The coopsim Authors
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

#ifndef COOPSIM_ERRORS_HPP_
#define COOPSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace coopsim {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Unknown environment / oracle / policy identifier.
class RegistryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// API misuse: stepping a finished episode, acting out of turn.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_iterate, int iterations)
      : std::runtime_error(what),
        last_iterate_(last_iterate),
        iterations_(iterations) {}

  double last_iterate() const { return last_iterate_; }
  int iterations() const { return iterations_; }

 private:
  double last_iterate_;
  int iterations_;
};

}  // namespace coopsim

#endif  // COOPSIM_ERRORS_HPP_
