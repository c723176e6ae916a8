/*
 * Copyright (C) 2026 The apicompat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace apicompat {

enum class ErrorCode {
  kCorpusNotFound,
  kEmptyCorpus,
  kExtraction,
  kSignatureParse,
  kInternalConsistency,
  kPrecondition,
  kConfiguration,
  kMalformedOutput,
  kBackendUnavailable,
  kValidation,
  kManifestParse,
  kManifestMissing,
  kSchema,
  kInput,
  kUndefinedMetric,
  kInsufficientData,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Carries the byte offset into the raw signature text where parsing failed.
class SignatureParseError : public Error {
 public:
  SignatureParseError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::kSignatureParse,
              message + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace apicompat
