#pragma once

#include <cstdint>
#include <vector>

#include "mmsb/bclstm.hpp"
#include "mmsb/corpus.hpp"
#include "mmsb/encoders.hpp"
#include "mmsb/fusion.hpp"
#include "mmsb/metrics.hpp"
#include "mmsb/svm.hpp"

namespace mmsb {

// One experiment cell: which classifier, which modalities, and the
// training hyperparameters of every trainable piece.
struct ModelConfig {
  enum class Kind { kSvm, kBcLstm };
  Kind kind = Kind::kSvm;
  ModalitySet modalities{true, true, true};
  SvmConfig svm;
  BcLstmConfig bclstm;
  TextEncoderConfig text;       // vocab_size is filled from the train corpus
  TrainConfig text_train;
  uint64_t model_seed = 0;
};

// A trained classifier plus the frozen text encoder it was fused with.
struct TrainedModel {
  ModelConfig cfg;
  TextEncoderParams text_encoder;  // valid only when cfg.modalities.text
  SvmModel svm;
  BcLstmModel bclstm;
};

// Trains the configured model on `train`, including the text encoder when
// the text modality is selected (trained on the train side only, then
// frozen).
TrainedModel train_model(const Corpus& train, const ModelConfig& cfg);

// Predictions for every utterance of `test`, in corpus traversal order.
std::vector<int> predict_corpus(const TrainedModel& model, const Corpus& test);

// train_model + predict_corpus + metrics.
MetricsReport evaluate_split(const Corpus& train, const Corpus& test,
                             const ModelConfig& cfg);

}  // namespace mmsb
