// include/rateinv/base/error.h

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

#ifndef RATEINV_BASE_ERROR_H_
#define RATEINV_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace rateinv {

enum class ErrorKind {
  kArgument,           // bad parameter value passed by a caller
  kRange,              // value outside an allowed interval
  kConfig,             // experiment configuration problem
  kFormat,             // malformed file contents
  kUnsupportedFormat,  // well-formed but unsupported (e.g. stereo WAV)
  kIo,                 // file cannot be opened / written
  kTooShort,           // signal or feature matrix too short
  kEmptyAfterVad,
  kEmptyTrials,
  kDimension,          // vector/matrix size mismatch
  kMissingStage,       // predecessor pipeline stage has not run
  kNumerical           // non-finite values, divergence
};

const char *ErrorKindName(ErrorKind kind);

// Process exit code for the CLI: 1 usage/config, 2 data, 3 numerical.
int ExitCodeFor(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string &what);

}  // namespace rateinv

#endif  // RATEINV_BASE_ERROR_H_
