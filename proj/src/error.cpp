// Copyright 2026 The bintemp Authors
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

#include "bintemp/error.hpp"

namespace bintemp {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid input";
    case ErrorKind::kInvalidTemperature: return "invalid temperature";
    case ErrorKind::kEmptyInput: return "empty input";
    case ErrorKind::kInsufficientSamples: return "insufficient samples";
    case ErrorKind::kConsistency: return "consistency error";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kIo: return "i/o error";
  }
  return "error";
}

}  // namespace bintemp
