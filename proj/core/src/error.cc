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

#include "lcp/error.h"

namespace lcp {

int ExitCodeFor(const Error& error) {
  switch (error.kind()) {
    case Error::Kind::kInfeasible:
      return 3;
    case Error::Kind::kParse:
    case Error::Kind::kValidation:
    case Error::Kind::kIo:
      return 2;
  }
  return 1;
}

}  // namespace lcp
