// include/rateinv/base/log.h

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

#ifndef RATEINV_BASE_LOG_H_
#define RATEINV_BASE_LOG_H_

#include <spdlog/spdlog.h>

namespace rateinv {

// All library diagnostics go to stderr through this logger.
spdlog::logger &Logger();

// 0 = warnings only, 1 = info (default), 2 = debug.
void SetVerbosity(int level);

}  // namespace rateinv

#define RATEINV_LOG(...) ::rateinv::Logger().info(__VA_ARGS__)
#define RATEINV_WARN(...) ::rateinv::Logger().warn(__VA_ARGS__)
#define RATEINV_VLOG(...) ::rateinv::Logger().debug(__VA_ARGS__)

#endif  // RATEINV_BASE_LOG_H_
