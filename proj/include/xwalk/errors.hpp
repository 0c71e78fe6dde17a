// Copyright 2026 The xwalk Authors
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

#ifndef XWALK__ERRORS_HPP_
#define XWALK__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace xwalk
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A configuration value violates a domain invariant.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// Config file syntax error; carries the 1-based line number.
class ParseError : public Error
{
public:
  ParseError(const std::string & what, int line)
  : Error("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }
  int line() const noexcept { return line_; }

private:
  int line_;
};

class MalformedTrace : public Error
{
public:
  using Error::Error;
};

class IncomparableConfigs : public Error
{
public:
  using Error::Error;
};

class VehicleNeverFinished : public Error
{
public:
  using Error::Error;
};

/// Gram matrix stayed non positive definite after the maximum jitter.
class SingularGram : public Error
{
public:
  using Error::Error;
};

/// No individual reached the low-PET threshold during the adversarial search.
class EmptyLowPetSet : public Error
{
public:
  using Error::Error;
};

/// Objective evaluation failed inside an optimisation loop.
class EvaluationError : public Error
{
public:
  EvaluationError(const std::string & what, int iteration)
  : Error("iteration " + std::to_string(iteration) + ": " + what), iteration_(iteration)
  {
  }
  int iteration() const noexcept { return iteration_; }

private:
  int iteration_;
};

}  // namespace xwalk

#endif  // XWALK__ERRORS_HPP_
