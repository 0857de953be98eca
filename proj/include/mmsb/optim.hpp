#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mmsb/tensor.hpp"

namespace mmsb {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction. Moments are indexed by parameter position, so
// the same parameter list must be passed to every step() call.
class Adam {
 public:
  explicit Adam(const std::vector<Tensor>& params, AdamConfig cfg = {});
  void step(std::vector<Tensor>& params);
  long step_count() const { return t_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

// Central-difference gradient check. Computes analytic gradients via one
// backward pass of loss_fn(), then perturbs up to max_coords coordinates per
// tensor (all of them when the tensor is small, a seeded sample otherwise)
// and returns the max relative error |a - n| / max(|a|, |n|, 1e-6).
double grad_check(const std::function<Tensor()>& loss_fn,
                  std::vector<Tensor>& params, double h = 1e-5,
                  int max_coords = 200, uint64_t seed = 0);

}  // namespace mmsb
