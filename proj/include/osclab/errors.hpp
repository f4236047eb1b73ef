// Copyright 2026 The osclab Authors
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

#ifndef OSCLAB_ERRORS_HPP
#define OSCLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace osclab {

// Base class for every failure the library reports. The CLI maps the
// concrete types onto process exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DegenerateHessian : public Error {
public:
  using Error::Error;
};

class RootIsolationFailure : public Error {
public:
  using Error::Error;
};

class DiagonalEvaluation : public Error {
public:
  using Error::Error;
};

class QuadratureFailure : public Error {
public:
  using Error::Error;
};

class ResolutionInadequate : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace osclab

#endif
