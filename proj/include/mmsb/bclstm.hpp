#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mmsb/encoders.hpp"
#include "mmsb/lstm.hpp"
#include "mmsb/tensor.hpp"

namespace mmsb {

struct BcLstmConfig {
  int hidden = 64;
  TrainConfig train;
};

// A training sequence: one video's fused utterance vectors plus labels.
using LabeledSequence = std::pair<std::vector<std::vector<double>>, std::vector<int>>;

struct BcLstmModel {
  LstmParams fwd, bwd;
  Tensor head_W;  // [2H, num_classes]
  Tensor head_b;  // [num_classes]
  int num_classes = 0;
  int input_dim = 0;

  std::vector<Tensor> parameters() const;
};

struct BcLstmTrainReport {
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  int epochs_run = 0;
};

// Trains on whole-video sequences, loss = mean per-utterance cross-entropy,
// one Adam step per video. Deterministic for a fixed seed.
BcLstmModel bclstm_train(const std::vector<LabeledSequence>& videos,
                         int num_classes, const BcLstmConfig& cfg, uint64_t seed,
                         BcLstmTrainReport* report = nullptr);

// Per-utterance argmax of the softmax head; ties resolve to the lowest id.
std::vector<int> bclstm_predict(const BcLstmModel& model,
                                const std::vector<std::vector<double>>& sequence);

}  // namespace mmsb
