// src/common.cc

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

#include "graphrefine/common.h"

namespace graphrefine {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kBadVersion: return "bad-version";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kTrailingBytes: return "trailing-bytes";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kZeroRow: return "zero-row";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kUnassignedLabel: return "unassigned-label";
    case ErrorCode::kEdgeMissing: return "edge-missing";
    case ErrorCode::kOutOfRange: return "out-of-range";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kEmptySelection: return "empty-selection";
    case ErrorCode::kFileIo: return "file-io";
    case ErrorCode::kBadConfig: return "bad-config";
    case ErrorCode::kNonFiniteLoss: return "non-finite-loss";
  }
  return "unknown";
}

}  // namespace graphrefine
