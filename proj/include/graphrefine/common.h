// include/graphrefine/common.h

// Copyright 2026  GraphRefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHREFINE_COMMON_H_
#define GRAPHREFINE_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace graphrefine {

enum class ErrorCode {
  kBadMagic,
  kBadVersion,
  kTruncated,
  kTrailingBytes,
  kNonFinite,
  kZeroRow,
  kLengthMismatch,
  kUnassignedLabel,
  kEdgeMissing,
  kOutOfRange,
  kInvalidArgument,
  kEmptySelection,
  kFileIo,
  kBadConfig,
  kNonFiniteLoss,
};

const char* error_code_name(ErrorCode code);

/// Single exception type used across the library; `code()` distinguishes
/// failure classes so callers and tests can react without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// splitmix64 finalizer; used to derive independent RNG streams from one
/// run seed plus stream tags (iteration, anchor class, ...).
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a) {
  return mix_seed(seed ^ mix_seed(a));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a,
                              std::uint64_t b) {
  return mix_seed(mix_seed(seed, a) ^ mix_seed(b + 0x51ed2701ULL));
}

}  // namespace graphrefine

#endif  // GRAPHREFINE_COMMON_H_
