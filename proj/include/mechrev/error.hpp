// Copyright 2026 The mechrev Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mechrev {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter or malformed input. `field()` names the offending
/// parameter, or a JSON pointer for documents loaded from disk.
class ValidationError : public Error
{
public:
  ValidationError(std::string field, const std::string &message)
    : Error(field + ": " + message)
    , field_(std::move(field))
  {}

  const std::string &field() const noexcept
  {
    return field_;
  }

private:
  std::string field_;
};

/// A computation would exceed a configured size cap.
class SizeError : public Error
{
public:
  SizeError(const std::string &what, std::size_t requested, std::size_t cap)
    : Error(what + " requires " + std::to_string(requested) + ", cap is " + std::to_string(cap))
    , requested_(requested)
    , cap_(cap)
  {}

  std::size_t requested() const noexcept
  {
    return requested_;
  }
  std::size_t cap() const noexcept
  {
    return cap_;
  }

private:
  std::size_t requested_;
  std::size_t cap_;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// Something that cannot happen did (solver failure, failed certification).
class InternalError : public Error
{
public:
  using Error::Error;
};

}  // namespace mechrev
