// Copyright 2026 The TWPA Toolkit Authors
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

#ifndef TWPA_ERRORS_HPP
#define TWPA_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twpa {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (empty list, negative value, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Bias outside the inductive branch of a junction or beyond the kinetic scale current.
class SingularBiasError : public Error {
 public:
  using Error::Error;
};

/// Transfer matrix whose determinant departs from one.
class InconsistentMatrixError : public Error {
 public:
  using Error::Error;
};

/// A requested frequency (typically the idler) falls outside the available grid.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// A mixing tone sits inside a stopband of the line.
class StopbandPlacementError : public Error {
 public:
  using Error::Error;
};

/// The mode amplitudes became non-finite while integrating.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t cell)
      : Error(what), cell_(cell) {}
  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t cell_;
};

/// Phase mismatch is exactly zero, so no quasi-phase-matching structure exists.
class NoMismatchError : public Error {
 public:
  using Error::Error;
};

/// A matching structure cannot be realised with the requested geometry.
class DesignInfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Requested feature is smaller than one cell of the line.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Paired measurement traces are not sampled on the same grid.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Idler scan shows no usable modulation.
class NoModulationError : public Error {
 public:
  using Error::Error;
};

/// Process comparison needs both oxidation labels in the input.
class ComparisonUnavailableError : public Error {
 public:
  using Error::Error;
};

}  // namespace twpa

#endif  // TWPA_ERRORS_HPP
