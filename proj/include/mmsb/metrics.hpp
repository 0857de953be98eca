#pragma once

#include <vector>

#include "mmsb/corpus.hpp"

namespace mmsb {

struct MetricsReport {
  double accuracy = 0.0;
  double rmse = 0.0;  // over class ids
  std::vector<double> tp_rate;      // per-class recall, 0 when the row is empty
  std::vector<bool> tp_defined;     // false flags an empty confusion row
  std::vector<std::vector<int>> confusion;  // [actual][predicted]
  int n = 0;
};

MetricsReport metrics(const std::vector<int>& predictions,
                      const std::vector<int>& labels, const LabelScheme& scheme);

}  // namespace mmsb
