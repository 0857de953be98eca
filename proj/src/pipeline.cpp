#include "mmsb/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace mmsb {

namespace {

// Fused vectors for one corpus, grouped by video, plus flat labels in the
// same traversal order.
struct FusedCorpus {
  std::vector<std::vector<std::vector<double>>> video_vectors;
  std::vector<std::vector<int>> video_labels;

  std::vector<std::vector<double>> flat_vectors() const {
    std::vector<std::vector<double>> out;
    for (const auto& v : video_vectors) out.insert(out.end(), v.begin(), v.end());
    return out;
  }
  std::vector<int> flat_labels() const {
    std::vector<int> out;
    for (const auto& v : video_labels) out.insert(out.end(), v.begin(), v.end());
    return out;
  }
};

FusedCorpus fuse_corpus(const Corpus& corpus, const ModalitySet& mods,
                        const TextEncoderParams* enc,
                        const TextEncoderConfig& text_cfg) {
  FusedCorpus out;
  for (const auto& v : corpus.videos) {
    std::vector<std::vector<double>> vecs;
    std::vector<int> labels;
    for (const auto& u : v.utterances) {
      UtteranceFeatures f;
      if (mods.text) {
        Tensor rep = encode_text(u.tokens, *enc, text_cfg);
        f.text = rep.values();
      }
      if (mods.audio) f.audio = adapt_precomputed(u.audio_features);
      if (mods.visual) f.visual = adapt_precomputed(u.visual_features);
      vecs.push_back(fuse(f, mods));
      labels.push_back(u.label);
    }
    out.video_vectors.push_back(std::move(vecs));
    out.video_labels.push_back(std::move(labels));
  }
  return out;
}

}  // namespace

TrainedModel train_model(const Corpus& train, const ModelConfig& cfg) {
  TrainedModel model;
  model.cfg = cfg;
  if (cfg.modalities.text) {
    model.cfg.text.vocab_size = std::max(train.vocab_size, 2);
    model.text_encoder =
        train_text_encoder(train, model.cfg.text, cfg.text_train, cfg.model_seed);
  }
  const TextEncoderParams* enc =
      cfg.modalities.text ? &model.text_encoder : nullptr;
  FusedCorpus train_f = fuse_corpus(train, cfg.modalities, enc, model.cfg.text);

  if (cfg.kind == ModelConfig::Kind::kSvm) {
    SvmConfig svm_cfg = cfg.svm;
    svm_cfg.seed = cfg.model_seed;
    model.svm = svm_train(train_f.flat_vectors(), train_f.flat_labels(), svm_cfg);
  } else {
    std::vector<LabeledSequence> seqs;
    for (size_t i = 0; i < train_f.video_vectors.size(); ++i)
      seqs.emplace_back(train_f.video_vectors[i], train_f.video_labels[i]);
    model.bclstm =
        bclstm_train(seqs, train.scheme.num_classes(), cfg.bclstm, cfg.model_seed);
  }
  return model;
}

std::vector<int> predict_corpus(const TrainedModel& model, const Corpus& test) {
  const TextEncoderParams* enc =
      model.cfg.modalities.text ? &model.text_encoder : nullptr;
  FusedCorpus test_f = fuse_corpus(test, model.cfg.modalities, enc, model.cfg.text);
  std::vector<int> preds;
  if (model.cfg.kind == ModelConfig::Kind::kSvm) {
    for (const auto& x : test_f.flat_vectors())
      preds.push_back(svm_predict(model.svm, x));
  } else {
    for (const auto& seq : test_f.video_vectors) {
      auto p = bclstm_predict(model.bclstm, seq);
      preds.insert(preds.end(), p.begin(), p.end());
    }
  }
  return preds;
}

MetricsReport evaluate_split(const Corpus& train, const Corpus& test,
                             const ModelConfig& cfg) {
  if (train.scheme.kind != test.scheme.kind)
    throw std::runtime_error("evaluate_split: SCHEME_INCOMPATIBLE");
  if (train.audio_dim != test.audio_dim || train.visual_dim != test.visual_dim)
    throw std::runtime_error("evaluate_split: feature dimension mismatch");
  TrainedModel model = train_model(train, cfg);
  std::vector<int> preds = predict_corpus(model, test);
  std::vector<int> labels;
  for (const auto* u : test.all_utterances()) labels.push_back(u->label);
  return metrics(preds, labels, test.scheme);
}

}  // namespace mmsb
