#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 the organmatch authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include <stdexcept>
#include <string>

namespace organmatch {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A domain invariant was violated (out-of-range score, duplicate id,
/// infeasible allocation, misuse of a size-bounded checker, ...).
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A malformed input file. Carries the 1-based line number (the header
/// counts as line 1) so callers can point at the offending row.
class ParseError : public Error
{
public:
  ParseError(int line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line)
  {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

}  // namespace organmatch
