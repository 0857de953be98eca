#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace mmsb {

// Reserved token ids. The vocabulary maps surface tokens to ids >= 2.
constexpr int kUnkTokenId = 0;
constexpr int kPadTokenId = 1;

struct UtteranceRecord {
  std::string utterance_id;
  std::string video_id;
  std::string speaker_id;
  int position = 0;  // 0-based index within its video
  std::vector<int> tokens;
  std::vector<double> audio_features;
  std::vector<double> visual_features;
  int label = -1;
  std::vector<double> raw_scores;  // MOSI-style per-annotator scores, optional
};

struct VideoSequence {
  std::string video_id;
  std::string speaker_id;
  std::vector<UtteranceRecord> utterances;  // ordered by position
};

enum class LabelKind {
  kBinarySentiment,   // negative=0, positive=1
  kTernarySentiment,  // ingestion form only: negative=0, positive=1, neutral=2
  kEmotion4,          // angry=0, happy=1, sad=2, neutral=3
};

struct LabelScheme {
  LabelKind kind = LabelKind::kBinarySentiment;
  std::vector<std::string> class_names;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  std::optional<int> class_id(const std::string& name) const;

  static LabelScheme binary_sentiment();
  static LabelScheme ternary_sentiment();
  static LabelScheme emotion4();
};

struct Corpus {
  std::string name;
  LabelScheme scheme;
  std::vector<VideoSequence> videos;
  std::string language_tag;  // metadata only
  int audio_dim = 0;
  int visual_dim = 0;
  int vocab_size = 0;                // ids in [0, vocab_size)
  std::map<std::string, int> vocab;  // surface token -> id (>= 2)

  int num_utterances() const;
  std::set<std::string> speaker_roster() const;
  std::vector<const UtteranceRecord*> all_utterances() const;
  void check_invariants() const;  // throws on violation
};

// MOSI-style labeling: sign of the mean score. Empty list or a score outside
// [-3, +3] throws; mean exactly 0 returns nullopt (utterance rejected).
std::optional<int> derive_mosi_label(const std::vector<double>& raw_scores);

// IEMOCAP-style labeling: majority class (>= ceil(n/2) votes) among
// {angry, happy, sad, neutral}; anything else returns nullopt. Fewer than 3
// annotations throws.
std::optional<int> derive_iemocap_label(const std::vector<std::string>& annotations);

// Removes neutral utterances from a ternary-sentiment corpus, drops videos
// left empty, re-compacts positions, and switches the scheme to binary.
// Already-binary corpora pass through unchanged.
Corpus drop_neutral(const Corpus& corpus);

// Loads a JSON-lines manifest plus its companion feature CSVs
// (<stem>.audio.csv / <stem>.visual.csv next to the manifest).
Corpus load_corpus(const std::string& manifest_path);

// Writes the manifest and companion CSVs; load_corpus(write_corpus(c))
// round-trips field-for-field.
void write_corpus(const Corpus& corpus, const std::string& manifest_path);

// Re-maps a corpus's token ids through another corpus's vocabulary,
// unknown tokens falling back to UNK. Used for cross-dataset transfer.
Corpus remap_tokens(const Corpus& corpus, const Corpus& vocab_source);

}  // namespace mmsb
