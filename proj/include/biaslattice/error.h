// Copyright 2026 The BiasLattice Authors
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

#ifndef BIASLATTICE_ERROR_H_
#define BIASLATTICE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biaslattice {

// Precondition or configuration violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files or byte streams. `position` is a byte offset for
// binary input and a 1-based line number for text input.
class FormatError : public Error {
 public:
  enum class Unit { kByte, kLine };

  FormatError(const std::string& what, std::size_t position, Unit unit)
      : Error(Describe(what, position, unit)),
        position_(position),
        unit_(unit) {}

  std::size_t position() const { return position_; }
  Unit unit() const { return unit_; }

 private:
  static std::string Describe(const std::string& what, std::size_t position,
                              Unit unit) {
    return what + (unit == Unit::kByte ? " at byte offset " : " at line ") +
           std::to_string(position);
  }

  std::size_t position_;
  Unit unit_;
};

}  // namespace biaslattice

#endif  // BIASLATTICE_ERROR_H_
