// include/rateinv/backend/report.h

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

#ifndef RATEINV_BACKEND_REPORT_H_
#define RATEINV_BACKEND_REPORT_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rateinv/backend/eer.h"

namespace rateinv {

// EER matrix, systems x columns (rate scales or rate classes). Missing
// cells carry an entry in `errors`.
struct ReportTable {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::string> systems;
  std::vector<std::vector<std::optional<double>>> eer;  // fractions
  std::vector<std::string> errors;
};

// Fills every cell with cell(system, column). A throwing cell is recorded
// in `errors` and left empty; the sweep continues.
ReportTable RateSweepReport(const std::string &title, const std::vector<std::string> &systems,
                            const std::vector<std::string> &columns,
                            const std::function<EerResult(std::size_t, std::size_t)> &cell);

// Appends an "Average" column: mean of the row's present cells.
void AddAverageColumn(ReportTable *table);

// Column label of a rate scale, e.g. "0.5".
std::string AlphaColumnName(double alpha);

// Aligned plain-text table, EER in percent with two decimals, "-" for a
// missing cell.
std::string FormatReportTable(const ReportTable &table);

// Line plot of EER (%) against column, one polyline per system.
std::string RenderReportSvg(const ReportTable &table);

}  // namespace rateinv

#endif  // RATEINV_BACKEND_REPORT_H_
