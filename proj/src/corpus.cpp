#include "mmsb/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace mmsb {

namespace {

using nlohmann::json;

const char* kUnkToken = "<unk>";
const char* kPadToken = "<pad>";

std::string feature_csv_path(const std::string& manifest_path, const char* kind) {
  std::string stem = manifest_path;
  size_t dot = stem.rfind('.');
  size_t slash = stem.rfind('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    stem = stem.substr(0, dot);
  return stem + "." + kind + ".csv";
}

std::unordered_map<std::string, std::vector<double>> load_feature_csv(
    const std::string& path, int* dim_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing feature file: " + path);
  std::unordered_map<std::string, std::vector<double>> rows;
  std::string line;
  bool first = true;
  int dim = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {  // header: id,<d columns>
      first = false;
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (!std::getline(ss, cell, ',')) continue;
    std::string id = cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (dim < 0) dim = static_cast<int>(vals.size());
    if (static_cast<int>(vals.size()) != dim)
      throw std::runtime_error("dimension mismatch in " + path + " at row " + id);
    rows.emplace(std::move(id), std::move(vals));
  }
  *dim_out = dim < 0 ? 0 : dim;
  return rows;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::vector<std::string>& sentiment3_names() {
  static const std::vector<std::string> names = {"negative", "positive", "neutral"};
  return names;
}

const std::vector<std::string>& emotion4_names() {
  static const std::vector<std::string> names = {"angry", "happy", "sad", "neutral"};
  return names;
}

}  // namespace

std::optional<int> LabelScheme::class_id(const std::string& name) const {
  for (size_t i = 0; i < class_names.size(); ++i)
    if (class_names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

LabelScheme LabelScheme::binary_sentiment() {
  return {LabelKind::kBinarySentiment, {"negative", "positive"}};
}

LabelScheme LabelScheme::ternary_sentiment() {
  return {LabelKind::kTernarySentiment, sentiment3_names()};
}

LabelScheme LabelScheme::emotion4() {
  return {LabelKind::kEmotion4, emotion4_names()};
}

int Corpus::num_utterances() const {
  int n = 0;
  for (const auto& v : videos) n += static_cast<int>(v.utterances.size());
  return n;
}

std::set<std::string> Corpus::speaker_roster() const {
  std::set<std::string> roster;
  for (const auto& v : videos) roster.insert(v.speaker_id);
  return roster;
}

std::vector<const UtteranceRecord*> Corpus::all_utterances() const {
  std::vector<const UtteranceRecord*> out;
  for (const auto& v : videos)
    for (const auto& u : v.utterances) out.push_back(&u);
  return out;
}

void Corpus::check_invariants() const {
  if (videos.empty()) throw std::runtime_error("corpus is empty");
  std::unordered_set<std::string> seen_ids;
  for (const auto& v : videos) {
    for (size_t i = 0; i < v.utterances.size(); ++i) {
      const auto& u = v.utterances[i];
      if (u.video_id != v.video_id)
        throw std::runtime_error("utterance/video id mismatch in " + v.video_id);
      if (u.position != static_cast<int>(i))
        throw std::runtime_error("non-contiguous positions in video " + v.video_id);
      if (!seen_ids.insert(u.utterance_id).second)
        throw std::runtime_error("duplicate utterance_id: " + u.utterance_id);
      if (static_cast<int>(u.audio_features.size()) != audio_dim)
        throw std::runtime_error("audio dimension mismatch at " + u.utterance_id);
      if (static_cast<int>(u.visual_features.size()) != visual_dim)
        throw std::runtime_error("visual dimension mismatch at " + u.utterance_id);
      if (u.label < 0 || u.label >= scheme.num_classes())
        throw std::runtime_error("label out of scheme range at " + u.utterance_id);
    }
  }
}

std::optional<int> derive_mosi_label(const std::vector<double>& raw_scores) {
  if (raw_scores.empty())
    throw std::invalid_argument("derive_mosi_label: empty score list");
  double sum = 0.0;
  for (double s : raw_scores) {
    if (s < -3.0 || s > 3.0 || !std::isfinite(s))
      throw std::invalid_argument("derive_mosi_label: score outside [-3, +3]");
    sum += s;
  }
  double mean = sum / static_cast<double>(raw_scores.size());
  if (mean > 0.0) return 1;  // positive
  if (mean < 0.0) return 0;  // negative
  return std::nullopt;       // mean exactly 0: rejected
}

std::optional<int> derive_iemocap_label(const std::vector<std::string>& annotations) {
  if (annotations.size() < 3)
    throw std::invalid_argument("derive_iemocap_label: need >= 3 annotations");
  std::map<std::string, int> counts;
  for (const auto& a : annotations) ++counts[a];
  int n = static_cast<int>(annotations.size());
  int needed = (n + 1) / 2;  // ceil(n/2)
  for (const auto& [name, count] : counts) {
    if (count < needed) continue;
    const auto& names = emotion4_names();
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return static_cast<int>(i);
    return std::nullopt;  // majority class outside the four retained
  }
  return std::nullopt;  // no majority
}

Corpus drop_neutral(const Corpus& corpus) {
  if (corpus.scheme.kind == LabelKind::kBinarySentiment) return corpus;
  if (corpus.scheme.kind != LabelKind::kTernarySentiment)
    throw std::invalid_argument("drop_neutral: expects a sentiment corpus");
  int neutral_id = 2;
  Corpus out = corpus;
  out.scheme = LabelScheme::binary_sentiment();
  out.videos.clear();
  for (const auto& v : corpus.videos) {
    VideoSequence nv;
    nv.video_id = v.video_id;
    nv.speaker_id = v.speaker_id;
    for (const auto& u : v.utterances) {
      if (u.label == neutral_id) continue;
      UtteranceRecord nu = u;
      nu.position = static_cast<int>(nv.utterances.size());
      nv.utterances.push_back(std::move(nu));
    }
    if (!nv.utterances.empty()) out.videos.push_back(std::move(nv));
  }
  return out;
}

Corpus load_corpus(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("missing file: " + manifest_path);

  int audio_dim = 0, visual_dim = 0;
  auto audio_rows = load_feature_csv(feature_csv_path(manifest_path, "audio"), &audio_dim);
  auto visual_rows =
      load_feature_csv(feature_csv_path(manifest_path, "visual"), &visual_dim);

  struct RawRecord {
    UtteranceRecord rec;
    std::string label_str;
    std::vector<std::string> annotations;
    std::vector<std::string> token_strings;
  };
  std::vector<RawRecord> raw;
  bool any_scores = false, any_annotations = false, any_label = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    RawRecord r;
    r.rec.utterance_id = j.at("utterance_id").get<std::string>();
    r.rec.video_id = j.at("video_id").get<std::string>();
    r.rec.speaker_id = j.at("speaker_id").get<std::string>();
    r.rec.position = j.at("position").get<int>();
    for (const auto& t : j.at("tokens"))
      r.token_strings.push_back(t.get<std::string>());
    if (j.contains("raw_scores")) {
      r.rec.raw_scores = j["raw_scores"].get<std::vector<double>>();
      any_scores = true;
    }
    if (j.contains("annotations")) {
      r.annotations = j["annotations"].get<std::vector<std::string>>();
      any_annotations = true;
    }
    if (j.contains("label")) {
      r.label_str = j["label"].get<std::string>();
      any_label = true;
    }
    std::string aref = j.at("audio_ref").get<std::string>();
    std::string vref = j.at("visual_ref").get<std::string>();
    auto ait = audio_rows.find(aref);
    if (ait == audio_rows.end())
      throw std::runtime_error("audio_ref not found: " + aref);
    auto vit = visual_rows.find(vref);
    if (vit == visual_rows.end())
      throw std::runtime_error("visual_ref not found: " + vref);
    r.rec.audio_features = ait->second;
    r.rec.visual_features = vit->second;
    raw.push_back(std::move(r));
  }
  if (raw.empty()) throw std::runtime_error("empty manifest: " + manifest_path);

  // Resolve labels. Explicit label strings win; otherwise MOSI scores or
  // IEMOCAP annotations are reduced per the dataset rules, with rejected
  // utterances dropped.
  LabelScheme scheme;
  if (any_label) {
    bool has_sentiment = false, has_emotion = false, has_neutral = false;
    for (const auto& r : raw) {
      if (r.label_str == "positive" || r.label_str == "negative") has_sentiment = true;
      else if (r.label_str == "neutral") has_neutral = true;
      else if (r.label_str == "angry" || r.label_str == "happy" || r.label_str == "sad")
        has_emotion = true;
      else if (!r.label_str.empty())
        throw std::runtime_error("unknown label string: " + r.label_str);
    }
    if (has_sentiment && has_emotion)
      throw std::runtime_error("mixed sentiment and emotion labels in manifest");
    if (has_emotion)
      scheme = LabelScheme::emotion4();
    else
      scheme = has_neutral ? LabelScheme::ternary_sentiment()
                           : LabelScheme::binary_sentiment();
  } else if (any_scores) {
    scheme = LabelScheme::binary_sentiment();
  } else if (any_annotations) {
    scheme = LabelScheme::emotion4();
  } else {
    throw std::runtime_error("manifest records carry no label information");
  }

  Corpus corpus;
  corpus.name = manifest_path;
  corpus.scheme = scheme;
  corpus.audio_dim = audio_dim;
  corpus.visual_dim = visual_dim;

  std::map<std::string, VideoSequence> by_video;
  std::vector<std::string> video_order;
  for (auto& r : raw) {
    std::optional<int> label;
    if (!r.label_str.empty()) {
      label = scheme.class_id(r.label_str);
      if (!label) throw std::runtime_error("unknown label string: " + r.label_str);
    } else if (!r.rec.raw_scores.empty()) {
      label = derive_mosi_label(r.rec.raw_scores);
    } else if (!r.annotations.empty()) {
      label = derive_iemocap_label(r.annotations);
    } else {
      throw std::runtime_error("record without label: " + r.rec.utterance_id);
    }
    if (!label) continue;  // rejected by the labeling rule
    r.rec.label = *label;
    // vocabulary built in manifest order; reserved ids stay reserved
    for (const auto& tok : r.token_strings) {
      if (tok == kUnkToken) {
        r.rec.tokens.push_back(kUnkTokenId);
      } else if (tok == kPadToken) {
        r.rec.tokens.push_back(kPadTokenId);
      } else {
        auto it = corpus.vocab.find(tok);
        if (it == corpus.vocab.end())
          it = corpus.vocab.emplace(tok, 2 + static_cast<int>(corpus.vocab.size())).first;
        r.rec.tokens.push_back(it->second);
      }
    }
    auto it = by_video.find(r.rec.video_id);
    if (it == by_video.end()) {
      VideoSequence v;
      v.video_id = r.rec.video_id;
      v.speaker_id = r.rec.speaker_id;
      it = by_video.emplace(r.rec.video_id, std::move(v)).first;
      video_order.push_back(r.rec.video_id);
    }
    it->second.utterances.push_back(std::move(r.rec));
  }
  corpus.vocab_size = 2 + static_cast<int>(corpus.vocab.size());
  for (const auto& vid : video_order) {
    VideoSequence& v = by_video[vid];
    std::sort(v.utterances.begin(), v.utterances.end(),
              [](const UtteranceRecord& a, const UtteranceRecord& b) {
                return a.position < b.position;
              });
    // positions re-compacted after rejected utterances were dropped
    for (size_t i = 0; i < v.utterances.size(); ++i)
      v.utterances[i].position = static_cast<int>(i);
    corpus.videos.push_back(std::move(v));
  }
  corpus.check_invariants();
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::string& manifest_path) {
  std::map<int, std::string> reverse;
  for (const auto& [tok, id] : corpus.vocab) reverse[id] = tok;

  std::ofstream manifest(manifest_path);
  std::ofstream audio(feature_csv_path(manifest_path, "audio"));
  std::ofstream visual(feature_csv_path(manifest_path, "visual"));
  if (!manifest || !audio || !visual)
    throw std::runtime_error("cannot write corpus files for " + manifest_path);

  audio << "id";
  for (int i = 0; i < corpus.audio_dim; ++i) audio << ",a" << i;
  audio << "\n";
  visual << "id";
  for (int i = 0; i < corpus.visual_dim; ++i) visual << ",v" << i;
  visual << "\n";

  for (const auto& v : corpus.videos) {
    for (const auto& u : v.utterances) {
      json j;
      j["utterance_id"] = u.utterance_id;
      j["video_id"] = u.video_id;
      j["speaker_id"] = u.speaker_id;
      j["position"] = u.position;
      json toks = json::array();
      for (int id : u.tokens) {
        if (id == kUnkTokenId) toks.push_back(kUnkToken);
        else if (id == kPadTokenId) toks.push_back(kPadToken);
        else {
          auto it = reverse.find(id);
          toks.push_back(it != reverse.end() ? it->second
                                             : "tok" + std::to_string(id));
        }
      }
      j["tokens"] = std::move(toks);
      j["label"] = corpus.scheme.class_names[static_cast<size_t>(u.label)];
      if (!u.raw_scores.empty()) j["raw_scores"] = u.raw_scores;
      j["audio_ref"] = u.utterance_id;
      j["visual_ref"] = u.utterance_id;
      manifest << j.dump() << "\n";

      audio << u.utterance_id;
      for (double x : u.audio_features) audio << "," << format_double(x);
      audio << "\n";
      visual << u.utterance_id;
      for (double x : u.visual_features) visual << "," << format_double(x);
      visual << "\n";
    }
  }
}

Corpus remap_tokens(const Corpus& corpus, const Corpus& vocab_source) {
  std::map<int, std::string> reverse;
  for (const auto& [tok, id] : corpus.vocab) reverse[id] = tok;
  Corpus out = corpus;
  out.vocab = vocab_source.vocab;
  out.vocab_size = vocab_source.vocab_size;
  for (auto& v : out.videos) {
    for (auto& u : v.utterances) {
      for (auto& id : u.tokens) {
        if (id == kUnkTokenId || id == kPadTokenId) continue;
        auto rit = reverse.find(id);
        if (rit == reverse.end()) {
          id = kUnkTokenId;
          continue;
        }
        auto it = vocab_source.vocab.find(rit->second);
        id = it == vocab_source.vocab.end() ? kUnkTokenId : it->second;
      }
    }
  }
  return out;
}

}  // namespace mmsb
