#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace mmsb {

struct ProjectionConfig {
  double perplexity = 30.0;  // clamped below n/3 with a warning flag
  int iterations = 1000;
  double early_exaggeration = 12.0;
  int exaggeration_iters = 250;
  double learning_rate = 200.0;
  uint64_t seed = 0;
};

struct TsneResult {
  std::vector<std::array<double, 2>> points;
  std::vector<double> kl_trace;  // KL against the un-exaggerated affinities
  double effective_perplexity = 0.0;
  bool perplexity_clamped = false;
};

// Exact O(n^2) t-SNE with per-point bandwidths found by binary search on the
// perplexity target, early exaggeration, and momentum 0.5 switching to 0.8
// when exaggeration ends. Deterministic per seed; the embedding is centered.
TsneResult tsne_2d(const std::vector<std::vector<double>>& X,
                   const ProjectionConfig& cfg);

}  // namespace mmsb
