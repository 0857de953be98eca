#include "mmsb/result_table.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mmsb {

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v * 100.0);
  return buf;
}

}  // namespace

std::string render_table(const ResultTable& table, TableStyle style) {
  if (table.row_names.empty() || table.col_names.empty())
    throw std::invalid_argument("render_table: empty table");
  std::ostringstream out;
  if (style == TableStyle::kCsv) {
    out << "modality";
    for (const auto& c : table.col_names) out << "," << c;
    out << "\n";
    for (size_t r = 0; r < table.row_names.size(); ++r) {
      out << table.row_names[r];
      for (size_t c = 0; c < table.col_names.size(); ++c)
        out << "," << percent(table.values[r][c]);
      out << "\n";
    }
    return out.str();
  }
  if (style == TableStyle::kMarkdown) {
    out << "| Modality |";
    for (const auto& c : table.col_names) out << " " << c << " |";
    out << "\n|---|";
    for (size_t c = 0; c < table.col_names.size(); ++c) out << "---|";
    out << "\n";
    for (size_t r = 0; r < table.row_names.size(); ++r) {
      out << "| " << table.row_names[r] << " |";
      for (size_t c = 0; c < table.col_names.size(); ++c)
        out << " " << percent(table.values[r][c]) << " |";
      out << "\n";
    }
    return out.str();
  }
  // aligned plain text
  size_t name_w = 8;
  for (const auto& r : table.row_names) name_w = std::max(name_w, r.size());
  size_t col_w = 8;
  for (const auto& c : table.col_names) col_w = std::max(col_w, c.size());
  auto pad = [](const std::string& s, size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  out << pad("Modality", name_w + 2);
  for (const auto& c : table.col_names) out << pad(c, col_w + 2);
  out << "\n";
  for (size_t r = 0; r < table.row_names.size(); ++r) {
    out << pad(table.row_names[r], name_w + 2);
    for (size_t c = 0; c < table.col_names.size(); ++c)
      out << pad(percent(table.values[r][c]), col_w + 2);
    out << "\n";
  }
  return out.str();
}

}  // namespace mmsb
