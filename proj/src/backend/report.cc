// src/backend/report.cc

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

#include "rateinv/backend/report.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "rateinv/base/error.h"

namespace rateinv {

ReportTable RateSweepReport(const std::string &title, const std::vector<std::string> &systems,
                            const std::vector<std::string> &columns,
                            const std::function<EerResult(std::size_t, std::size_t)> &cell) {
  ReportTable t;
  t.title = title;
  t.systems = systems;
  t.columns = columns;
  t.eer.assign(systems.size(), std::vector<std::optional<double>>(columns.size()));
  for (std::size_t s = 0; s < systems.size(); ++s)
    for (std::size_t c = 0; c < columns.size(); ++c) {
      try {
        t.eer[s][c] = cell(s, c).eer;
      } catch (const std::exception &e) {
        t.errors.push_back(systems[s] + " @ " + columns[c] + ": " + e.what());
      }
    }
  return t;
}

void AddAverageColumn(ReportTable *table) {
  table->columns.push_back("Average");
  for (auto &row : table->eer) {
    double sum = 0.0;
    int n = 0;
    for (const auto &v : row)
      if (v) {
        sum += *v;
        ++n;
      }
    row.push_back(n > 0 ? std::optional<double>(sum / n) : std::nullopt);
  }
}

std::string AlphaColumnName(double alpha) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.1f", alpha);
  return buf;
}

namespace {

std::string Percent(const std::optional<double> &v) {
  if (!v) return "-";
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * *v);
  return buf;
}

std::string Escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string FormatReportTable(const ReportTable &table) {
  std::size_t first = std::string("System").size();
  for (const auto &s : table.systems) first = std::max(first, s.size());
  std::vector<std::size_t> width(table.columns.size());
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    width[c] = std::max<std::size_t>(table.columns[c].size(), 5);
    for (const auto &row : table.eer) width[c] = std::max(width[c], Percent(row[c]).size());
  }
  std::ostringstream os;
  if (!table.title.empty()) os << table.title << "\n";
  auto pad_left = [](const std::string &s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  os << "System" << std::string(first - 6, ' ');
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << "  " << pad_left(table.columns[c], width[c]);
  os << "\n";
  for (std::size_t s = 0; s < table.systems.size(); ++s) {
    os << table.systems[s] << std::string(first - table.systems[s].size(), ' ');
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      os << "  " << pad_left(Percent(table.eer[s][c]), width[c]);
    os << "\n";
  }
  for (const auto &e : table.errors) os << "# error: " << e << "\n";
  return os.str();
}

std::string RenderReportSvg(const ReportTable &table) {
  const double w = 720, h = 420, left = 60, right = 150, top = 40, bottom = 50;
  const double pw = w - left - right, ph = h - top - bottom;
  double ymax = 0.0;
  for (const auto &row : table.eer)
    for (const auto &v : row)
      if (v) ymax = std::max(ymax, 100.0 * *v);
  ymax = ymax <= 0.0 ? 1.0 : ymax * 1.1;
  const std::size_t nc = table.columns.size();
  auto x_of = [&](std::size_t c) {
    return left + (nc <= 1 ? pw / 2 : pw * static_cast<double>(c) / static_cast<double>(nc - 1));
  };
  auto y_of = [&](double pct) { return top + ph * (1.0 - pct / ymax); };
  static const char *kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::ostringstream os;
  char buf[128];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"20\" font-size=\"13\">" << Escape(table.title)
     << "</text>\n";
  std::snprintf(buf, sizeof(buf), "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" ",
                left, top, pw, ph);
  os << buf << "fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = ymax * k / 4.0;
    std::snprintf(buf, sizeof(buf), "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.1f</text>\n",
                  left - 6, y_of(v) + 4, v);
    os << buf;
  }
  for (std::size_t c = 0; c < nc; ++c) {
    std::snprintf(buf, sizeof(buf), "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">",
                  x_of(c), top + ph + 16);
    os << buf << Escape(table.columns[c]) << "</text>\n";
  }
  std::snprintf(buf, sizeof(buf),
                "<text x=\"14\" y=\"%.1f\" transform=\"rotate(-90 14 %.1f)\" "
                "text-anchor=\"middle\">EER (%%)</text>\n",
                top + ph / 2, top + ph / 2);
  os << buf;
  for (std::size_t s = 0; s < table.systems.size(); ++s) {
    const char *color = kColors[s % 10];
    std::string points;
    for (std::size_t c = 0; c < nc; ++c) {
      if (!table.eer[s][c]) continue;
      std::snprintf(buf, sizeof(buf), "%.1f,%.1f ", x_of(c), y_of(100.0 * *table.eer[s][c]));
      points += buf;
      std::snprintf(buf, sizeof(buf), "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"3\" fill=\"%s\"/>\n",
                    x_of(c), y_of(100.0 * *table.eer[s][c]), color);
      os << buf;
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"" << points << "\"/>\n";
    std::snprintf(buf, sizeof(buf), "<text x=\"%.1f\" y=\"%.1f\" fill=\"%s\">", left + pw + 12,
                  top + 14.0 * static_cast<double>(s + 1), color);
    os << buf << Escape(table.systems[s]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rateinv
