#pragma once

#include <cstdint>

#include "mmsb/corpus.hpp"

namespace mmsb {

// Controls the synthetic corpus generator. Feature vectors are split into an
// "own" half carrying the utterance's label signal and a "context" half that
// carries a neighbor's label signal when that neighbor is context-planted.
struct SynthSpec {
  int num_classes = 2;
  int num_videos = 20;
  int utterances_per_video = 5;
  int audio_dim = 10;
  int visual_dim = 8;
  int vocab_size = 64;
  int tokens_per_utterance = 8;
  double w_text = 1.0;    // modality informativeness weights, in [0, 1]
  double w_audio = 1.0;
  double w_visual = 1.0;
  double p_ctx = 0.0;     // probability of a context plant, in [0, 1]
  double speaker_bias = 0.0;  // norm of the per-speaker constant offset
  int num_speakers = 0;   // 0: one speaker per video
  // Complementary mode (requires num_classes == 4): audio encodes only the
  // low label bit, visual only the high bit, text the low bit. No single
  // modality then determines the class.
  bool complementary = false;
  // Nonzero: prototypes are passed through a seeded random rotation and the
  // informative token ranges are permuted, simulating a domain shift.
  uint64_t rotation_seed = 0;
};

// Deterministic for a given (spec, seed): two calls produce bit-identical
// corpora.
Corpus generate_synthetic(const SynthSpec& spec, uint64_t seed);

}  // namespace mmsb
