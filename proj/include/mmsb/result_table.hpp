#pragma once

#include <string>
#include <vector>

namespace mmsb {

// Accuracy grid: rows are modality sets in canonical order, columns are
// models or protocols. Values are fractions in [0, 1].
struct ResultTable {
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<std::vector<double>> values;
};

enum class TableStyle { kCsv, kText, kMarkdown };

// Accuracies render as percentages with one decimal.
std::string render_table(const ResultTable& table, TableStyle style);

}  // namespace mmsb
