// src/base/error.cc

// Copyright 2026  The rateinv Authors

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

#include "rateinv/base/error.h"

namespace rateinv {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument: return "argument error";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kConfig: return "configuration error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kUnsupportedFormat: return "unsupported format";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kTooShort: return "input too short";
    case ErrorKind::kEmptyAfterVad: return "empty after VAD";
    case ErrorKind::kEmptyTrials: return "empty trial list";
    case ErrorKind::kDimension: return "dimension mismatch";
    case ErrorKind::kMissingStage: return "missing stage output";
    case ErrorKind::kNumerical: return "numerical failure";
  }
  return "error";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument:
    case ErrorKind::kRange:
    case ErrorKind::kConfig:
      return 1;
    case ErrorKind::kNumerical:
      return 3;
    default:
      return 2;
  }
}

void Fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

}  // namespace rateinv
