/*
plcurv

Copyright 2026 the plcurv authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <stdexcept>
#include <string>

namespace plcurv {

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/** @brief Cocircularity slack of the Delaunay predicate: an edge with
 *  opposite-angle sum within kFlipEps of pi counts as Delaunay. */
inline constexpr double kFlipEps = 1e-12;

/** @brief Relative margin below which a length triple counts as a
 *  degenerate triangle. */
inline constexpr double kDegenerateTol = 1e-14;

/** @brief Hard cap on flips per retriangulation sweep, as a multiple of the
 *  edge count. */
inline constexpr int kFlipCapFactor = 100;

/** @brief Base class of every library error. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/** @brief Input data that fails validation: malformed files, bad indices,
 *  inconsistent gluings, ill-posed targets. CLI exit code 2. */
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/** @brief Numeric failure on well-formed input: degenerate triangles,
 *  non-convex flips, factorization or line-search breakdowns. CLI exit
 *  code 1. */
class NumericError : public Error {
 public:
  using Error::Error;
};

/** @brief Retriangulation exceeded the flip cap. */
class FlipCapError : public NumericError {
 public:
  using NumericError::NumericError;
};

/** @brief Filesystem failure. CLI exit code 3. */
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace plcurv
