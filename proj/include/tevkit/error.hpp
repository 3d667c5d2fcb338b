// -*-c++-*---------------------------------------------------------------------------------------
// Copyright 2026 The tevkit Authors
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

#ifndef TEVKIT_ERROR_HPP
#define TEVKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tevkit
{
// Base of every error raised by the toolkit. The CLI maps the concrete
// subclasses onto its exit codes.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A value violates a documented invariant (bad polarity, NaN sample, ...).
class ValidationError : public Error
{
public:
  using Error::Error;
};

// Malformed file contents: bad magic, truncated record, broken header.
class FormatError : public Error
{
public:
  using Error::Error;
};

// Caller passed an inconsistent argument (t0 > t1, rho <= 0, size mismatch).
class ArgumentError : public Error
{
public:
  using Error::Error;
};

// Non-finite intermediate or singular solve.
class NumericError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

}  // namespace tevkit

#endif  // TEVKIT_ERROR_HPP
