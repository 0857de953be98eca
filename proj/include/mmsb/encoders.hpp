#pragma once

#include <cstdint>
#include <vector>

#include "mmsb/corpus.hpp"
#include "mmsb/rng.hpp"
#include "mmsb/tensor.hpp"

namespace mmsb {

struct TextEncoderConfig {
  int vocab_size = 0;
  int embed_dim = 300;
  std::vector<int> filter_widths = {3, 4, 5};
  int maps_per_width = 50;
  int dense_dim = 100;
  int max_len = 50;
};

struct TextEncoderParams {
  Tensor embedding;                  // [vocab, embed_dim]
  std::vector<Tensor> filters;       // per width: [k, embed_dim, maps]
  std::vector<Tensor> filter_bias;   // per width: [maps]
  Tensor dense_W;                    // [widths*maps, dense_dim]
  Tensor dense_b;                    // [dense_dim]

  static TextEncoderParams init(const TextEncoderConfig& cfg, Rng& rng);
  std::vector<Tensor> parameters() const;
};

struct TrainConfig {
  int epochs = 30;
  int batch_size = 32;
  double lr = 1e-3;
  int patience = 5;          // early stopping on validation accuracy
  double val_fraction = 0.2; // carved at video granularity
};

struct TextTrainReport {
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  int epochs_run = 0;
};

// Kim-style utterance encoder: embed, per-width valid conv, max-over-time
// pool, concatenate, dense to dense_dim, ReLU. Short token lists are padded
// with PAD up to the widest filter; long ones truncated to max_len.
Tensor encode_text(const std::vector<int>& tokens, const TextEncoderParams& params,
                   const TextEncoderConfig& cfg);

// Trains the encoder with a temporary softmax head on utterance labels,
// then discards the head. Deterministic for a fixed seed.
TextEncoderParams train_text_encoder(const Corpus& corpus,
                                     const TextEncoderConfig& cfg,
                                     const TrainConfig& train_cfg, uint64_t seed,
                                     TextTrainReport* report = nullptr);

// Identity adapter for precomputed audio/visual features; no scaling or
// normalization is applied. Non-finite components are rejected.
std::vector<double> adapt_precomputed(const std::vector<double>& vec);

}  // namespace mmsb
