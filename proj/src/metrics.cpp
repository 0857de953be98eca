#include "mmsb/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace mmsb {

MetricsReport metrics(const std::vector<int>& predictions,
                      const std::vector<int>& labels, const LabelScheme& scheme) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("metrics: prediction/label length mismatch");
  if (predictions.empty()) throw std::invalid_argument("metrics: empty input");
  int C = scheme.num_classes();
  MetricsReport r;
  r.n = static_cast<int>(predictions.size());
  r.confusion.assign(static_cast<size_t>(C), std::vector<int>(static_cast<size_t>(C), 0));
  double sq_sum = 0.0;
  int correct = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    int p = predictions[i], l = labels[i];
    if (p < 0 || p >= C || l < 0 || l >= C)
      throw std::invalid_argument("metrics: class id out of range");
    ++r.confusion[static_cast<size_t>(l)][static_cast<size_t>(p)];
    if (p == l) ++correct;
    double d = static_cast<double>(p - l);
    sq_sum += d * d;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n);
  r.rmse = std::sqrt(sq_sum / static_cast<double>(r.n));
  r.tp_rate.assign(static_cast<size_t>(C), 0.0);
  r.tp_defined.assign(static_cast<size_t>(C), false);
  for (int c = 0; c < C; ++c) {
    int row_sum = 0;
    for (int p = 0; p < C; ++p) row_sum += r.confusion[static_cast<size_t>(c)][static_cast<size_t>(p)];
    if (row_sum > 0) {
      r.tp_rate[static_cast<size_t>(c)] =
          static_cast<double>(r.confusion[static_cast<size_t>(c)][static_cast<size_t>(c)]) / row_sum;
      r.tp_defined[static_cast<size_t>(c)] = true;
    }
  }
  return r;
}

}  // namespace mmsb
