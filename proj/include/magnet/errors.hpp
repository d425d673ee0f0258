// Copyright 2026 The magnet Authors.
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

#ifndef MAGNET_ERRORS_HPP_
#define MAGNET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace magnet {

/// Failure categories. Values mirror the `magnet_status` codes of the C API.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kConfig = 4,
  kShape = 5,
  kNumeric = 6,
  kLabelMismatch = 7,
  kCheckpoint = 8,
  kInternal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define MAGNET_DEFINE_ERROR(Name, Code)                  \
  class Name : public Error {                            \
   public:                                               \
    explicit Name(const std::string& what)               \
        : Error(ErrorCode::Code, what) {}                \
  };

MAGNET_DEFINE_ERROR(InvalidArgumentError, kInvalidArgument)
MAGNET_DEFINE_ERROR(IoError, kIo)
MAGNET_DEFINE_ERROR(ParseError, kParse)
MAGNET_DEFINE_ERROR(ConfigError, kConfig)
MAGNET_DEFINE_ERROR(ShapeError, kShape)
MAGNET_DEFINE_ERROR(NumericError, kNumeric)
MAGNET_DEFINE_ERROR(LabelMismatchError, kLabelMismatch)
MAGNET_DEFINE_ERROR(CheckpointError, kCheckpoint)

#undef MAGNET_DEFINE_ERROR

}  // namespace magnet

#endif  // MAGNET_ERRORS_HPP_
