// Copyright 2026 The Coolcodec Authors. All Rights Reserved.
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

#ifndef COOLCODEC_ERROR_H_
#define COOLCODEC_ERROR_H_

#include <stdexcept>
#include <string>

namespace coolcodec {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kCorruptStream,
  kDivergence,
  // A graph operation was requested out of order (e.g. backprop on a tape
  // that holds no evaluated loss).
  kOrdering,
  kInternal,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type; callers
// switch on code() to map to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kIo:
      return "I/O error";
    case ErrorCode::kCorruptStream:
      return "corrupt stream";
    case ErrorCode::kDivergence:
      return "divergence";
    case ErrorCode::kOrdering:
      return "ordering violation";
    case ErrorCode::kInternal:
      return "internal error";
  }
  return "unknown";
}

}  // namespace coolcodec

#endif  // COOLCODEC_ERROR_H_
