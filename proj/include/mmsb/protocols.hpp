#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "mmsb/corpus.hpp"
#include "mmsb/metrics.hpp"
#include "mmsb/pipeline.hpp"
#include "mmsb/result_table.hpp"

namespace mmsb {

struct Fold {
  std::set<std::string> train_speakers;
  std::set<std::string> test_speakers;
};

// Speaker-disjoint folds: test sets partition the roster, train sets are the
// complements.
struct FoldPlan {
  std::vector<Fold> folds;
  int k = 0;
  uint64_t seed = 0;
};

enum class SplitMode {
  kFixed,
  kSpeakerInclusiveRandom,
  kSpeakerExclusiveKfold,
  kCrossDataset,
};

struct SplitSpec {
  SplitMode mode = SplitMode::kSpeakerExclusiveKfold;
  int k = 5;
  double val_fraction = 0.2;
  uint64_t seed = 0;
};

// k == roster size gives leave-one-speaker-out; otherwise speakers are
// shuffled by seed and dealt round-robin into k near-equal groups.
FoldPlan make_speaker_exclusive_folds(const Corpus& corpus, int k, uint64_t seed);

struct FixedSplit {
  Corpus train;
  Corpus val;   // may be empty when val_fraction == 0
  Corpus test;
};

// Splits by explicit video-id lists (which must partition the corpus), then
// carves validation videos out of the shuffled train side.
FixedSplit make_fixed_split(const Corpus& corpus,
                            const std::vector<std::string>& train_videos,
                            const std::vector<std::string>& test_videos,
                            double val_fraction, uint64_t seed);

// Restriction of a corpus to a speaker set (video structure preserved).
Corpus corpus_for_speakers(const Corpus& corpus, const std::set<std::string>& speakers);

// Random utterance-level split ignoring speaker identity.
MetricsReport run_speaker_inclusive(const Corpus& corpus, const SplitSpec& spec,
                                    const ModelConfig& cfg);

struct SpeakerExclusiveResult {
  std::vector<MetricsReport> fold_reports;  // in plan order, skipped folds omitted
  std::vector<int> fold_indices;            // plan index of each report
  std::vector<int> skipped_folds;           // degenerate training data
  double mean_accuracy = 0.0;
  int effective_folds = 0;
};

// Fresh model per fold; aggregate is the unweighted mean of fold accuracies.
SpeakerExclusiveResult run_speaker_exclusive(const Corpus& corpus,
                                             const FoldPlan& plan,
                                             const ModelConfig& cfg);

// Train on one corpus, test on another; test tokens are re-mapped through
// the training vocabulary with UNK fallback. Scheme kinds must match.
MetricsReport run_cross_dataset(const Corpus& train_corpus, const Corpus& test_corpus,
                                const ModelConfig& cfg);

// 7 modality sets x {SVM, bc-LSTM}, every cell evaluated on the same folds.
// Cells are independent; workers > 1 runs them concurrently with the merge
// order fixed by cell index, so results match the serial run.
ResultTable run_modality_grid(const Corpus& corpus, const FoldPlan& plan,
                              const ModelConfig& base_cfg, int workers = 1);

}  // namespace mmsb
