#include "mmsb/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "mmsb/rng.hpp"

namespace mmsb {

Adam::Adam(const std::vector<Tensor>& params, AdamConfig cfg) : cfg_(cfg) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const auto& p : params) {
    m_.emplace_back(static_cast<size_t>(p.size()), 0.0);
    v_.emplace_back(static_cast<size_t>(p.size()), 0.0);
  }
}

void Adam::step(std::vector<Tensor>& params) {
  if (params.size() != m_.size())
    throw std::invalid_argument("Adam::step: parameter count changed");
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (size_t pi = 0; pi < params.size(); ++pi) {
    auto& vals = params[pi].values();
    auto& grad = params[pi].grad();
    auto& m = m_[pi];
    auto& v = v_[pi];
    for (size_t i = 0; i < vals.size(); ++i) {
      double g = grad[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      vals[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

double grad_check(const std::function<Tensor()>& loss_fn,
                  std::vector<Tensor>& params, double h, int max_coords,
                  uint64_t seed) {
  zero_grad(params);
  Tensor loss = loss_fn();
  if (!std::isfinite(loss.item()))
    throw std::runtime_error("grad_check: non-finite loss");
  backward(loss);
  std::vector<std::vector<double>> analytic;
  for (auto& p : params) analytic.push_back(p.grad());

  Rng rng(seed);
  double max_rel = 0.0;
  for (size_t pi = 0; pi < params.size(); ++pi) {
    int n = params[pi].size();
    std::vector<int> coords;
    if (n <= max_coords) {
      for (int i = 0; i < n; ++i) coords.push_back(i);
    } else {
      std::vector<int> all(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
      rng.shuffle(all);
      coords.assign(all.begin(), all.begin() + max_coords);
    }
    auto& vals = params[pi].values();
    for (int c : coords) {
      double orig = vals[static_cast<size_t>(c)];
      vals[static_cast<size_t>(c)] = orig + h;
      double lp = loss_fn().item();
      vals[static_cast<size_t>(c)] = orig - h;
      double lm = loss_fn().item();
      vals[static_cast<size_t>(c)] = orig;
      if (!std::isfinite(lp) || !std::isfinite(lm))
        throw std::runtime_error("grad_check: non-finite loss under perturbation");
      double numeric = (lp - lm) / (2.0 * h);
      double a = analytic[pi][static_cast<size_t>(c)];
      // the floor keeps roundoff on near-zero gradients (noise ~ eps/h)
      // from registering as a large relative error
      double rel = std::abs(a - numeric) /
                   std::max({std::abs(a), std::abs(numeric), 1e-6});
      if (rel > max_rel) max_rel = rel;
    }
  }
  return max_rel;
}

}  // namespace mmsb
