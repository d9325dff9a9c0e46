/* Copyright 2026 The LCP Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LCP_ERROR_H_
#define LCP_ERROR_H_

#include <stdexcept>
#include <string>

namespace lcp {

// Every failure raised by the library derives from Error. The kind maps onto
// the CLI exit code: validation problems exit 2, infeasible configurations 3.
class Error : public std::runtime_error {
 public:
  enum class Kind { kParse, kValidation, kInfeasible, kIo };

  Error(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message)
      : Error(Kind::kParse, message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(Kind::kValidation, message) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& message)
      : Error(Kind::kInfeasible, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(Kind::kIo, message) {}
};

// Exit code used by the command-line tool for an error of the given kind.
int ExitCodeFor(const Error& error);

}  // namespace lcp

#endif  // LCP_ERROR_H_
