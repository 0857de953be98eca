#include "mmsb/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mmsb/errors.hpp"
#include "mmsb/optim.hpp"

namespace mmsb {

namespace {

Tensor uniform_tensor(std::vector<int> shape, Rng& rng, double scale = 0.1) {
  Tensor t = Tensor::zeros(std::move(shape), /*requires_grad=*/true);
  for (auto& v : t.values()) v = rng.uniform_range(-scale, scale);
  return t;
}

std::vector<int> prepare_tokens(const std::vector<int>& tokens,
                                const TextEncoderConfig& cfg) {
  if (tokens.empty()) throw std::invalid_argument("encode_text: empty token list");
  std::vector<int> ids = tokens;
  if (static_cast<int>(ids.size()) > cfg.max_len) ids.resize(static_cast<size_t>(cfg.max_len));
  int min_len = *std::max_element(cfg.filter_widths.begin(), cfg.filter_widths.end());
  while (static_cast<int>(ids.size()) < min_len) ids.push_back(kPadTokenId);
  for (auto& id : ids)
    if (id < 0 || id >= cfg.vocab_size) id = kUnkTokenId;
  return ids;
}

}  // namespace

TextEncoderParams TextEncoderParams::init(const TextEncoderConfig& cfg, Rng& rng) {
  if (cfg.vocab_size < 2) throw std::invalid_argument("text encoder: vocab_size < 2");
  if (cfg.filter_widths.empty() || cfg.dense_dim <= 0)
    throw std::invalid_argument("text encoder: bad config");
  TextEncoderParams p;
  p.embedding = uniform_tensor({cfg.vocab_size, cfg.embed_dim}, rng);
  for (int k : cfg.filter_widths) {
    p.filters.push_back(uniform_tensor({k, cfg.embed_dim, cfg.maps_per_width}, rng));
    p.filter_bias.push_back(Tensor::zeros({cfg.maps_per_width}, /*requires_grad=*/true));
  }
  int concat_dim = static_cast<int>(cfg.filter_widths.size()) * cfg.maps_per_width;
  p.dense_W = uniform_tensor({concat_dim, cfg.dense_dim}, rng);
  p.dense_b = Tensor::zeros({cfg.dense_dim}, /*requires_grad=*/true);
  return p;
}

std::vector<Tensor> TextEncoderParams::parameters() const {
  std::vector<Tensor> out = {embedding};
  for (const auto& f : filters) out.push_back(f);
  for (const auto& b : filter_bias) out.push_back(b);
  out.push_back(dense_W);
  out.push_back(dense_b);
  return out;
}

Tensor encode_text(const std::vector<int>& tokens, const TextEncoderParams& params,
                   const TextEncoderConfig& cfg) {
  std::vector<int> ids = prepare_tokens(tokens, cfg);
  Tensor embedded = embedding_rows(params.embedding, ids);
  std::vector<Tensor> pooled;
  for (size_t w = 0; w < params.filters.size(); ++w)
    pooled.push_back(max_pool_time(
        conv1d(embedded, params.filters[w], params.filter_bias[w])));
  Tensor features = pooled.size() == 1 ? pooled[0] : concat(pooled);
  return relu(dense(features, params.dense_W, params.dense_b));
}

TextEncoderParams train_text_encoder(const Corpus& corpus,
                                     const TextEncoderConfig& cfg,
                                     const TrainConfig& train_cfg, uint64_t seed,
                                     TextTrainReport* report) {
  std::set<int> classes;
  for (const auto* u : corpus.all_utterances()) classes.insert(u->label);
  if (classes.size() < 2)
    throw std::runtime_error("train_text_encoder: CLASS_DEGENERATE (single-class corpus)");
  int C = corpus.scheme.num_classes();

  Rng rng(seed);
  TextEncoderParams enc = TextEncoderParams::init(cfg, rng);
  Tensor head_W = uniform_tensor({cfg.dense_dim, C}, rng);
  Tensor head_b = Tensor::zeros({C}, /*requires_grad=*/true);
  std::vector<Tensor> params = enc.parameters();
  params.push_back(head_W);
  params.push_back(head_b);

  // validation carved at video granularity
  std::vector<int> video_idx(corpus.videos.size());
  for (size_t i = 0; i < video_idx.size(); ++i) video_idx[i] = static_cast<int>(i);
  rng.shuffle(video_idx);
  int n_val = static_cast<int>(std::floor(train_cfg.val_fraction *
                                          static_cast<double>(video_idx.size())));
  if (train_cfg.val_fraction > 0.0 && n_val == 0 && video_idx.size() > 1) n_val = 1;
  std::vector<const UtteranceRecord*> train_utts, val_utts;
  for (size_t i = 0; i < video_idx.size(); ++i) {
    const auto& v = corpus.videos[static_cast<size_t>(video_idx[i])];
    auto& bucket = static_cast<int>(i) < n_val ? val_utts : train_utts;
    for (const auto& u : v.utterances) bucket.push_back(&u);
  }
  if (train_utts.empty())
    throw std::runtime_error("train_text_encoder: no training utterances after split");

  auto accuracy_on = [&](const std::vector<const UtteranceRecord*>& utts) {
    if (utts.empty()) return 0.0;
    int correct = 0;
    for (const auto* u : utts) {
      Tensor logits = dense(encode_text(u->tokens, enc, cfg), head_W, head_b);
      auto probs = softmax_values(logits);
      int pred = static_cast<int>(
          std::max_element(probs.begin(), probs.end()) - probs.begin());
      if (pred == u->label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(utts.size());
  };

  Adam opt(params, AdamConfig{train_cfg.lr, 0.9, 0.999, 1e-8});
  double best_val = -1.0;
  int bad_epochs = 0;
  std::vector<std::vector<double>> best_values;
  auto snapshot = [&]() {
    best_values.clear();
    for (auto& p : params) best_values.push_back(p.values());
  };
  snapshot();

  int epochs_run = 0;
  std::vector<int> order(train_utts.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (int epoch = 0; epoch < train_cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(train_cfg.batch_size)) {
      size_t end = std::min(order.size(), start + static_cast<size_t>(train_cfg.batch_size));
      std::vector<Tensor> losses;
      for (size_t i = start; i < end; ++i) {
        const auto* u = train_utts[static_cast<size_t>(order[i])];
        Tensor logits = dense(encode_text(u->tokens, enc, cfg), head_W, head_b);
        losses.push_back(softmax_cross_entropy(logits, u->label));
      }
      Tensor loss = mean_scalars(losses);
      if (!std::isfinite(loss.item()))
        throw TrainingDivergence("train_text_encoder: non-finite loss");
      zero_grad(params);
      backward(loss);
      opt.step(params);
    }
    ++epochs_run;
    double val_acc = val_utts.empty() ? accuracy_on(train_utts) : accuracy_on(val_utts);
    if (val_acc > best_val) {
      best_val = val_acc;
      bad_epochs = 0;
      snapshot();
    } else if (++bad_epochs >= train_cfg.patience) {
      break;
    }
  }
  for (size_t i = 0; i < params.size(); ++i) params[i].values() = best_values[i];

  if (report) {
    report->train_accuracy = accuracy_on(train_utts);
    report->val_accuracy = val_utts.empty() ? report->train_accuracy : accuracy_on(val_utts);
    report->epochs_run = epochs_run;
  }
  return enc;
}

std::vector<double> adapt_precomputed(const std::vector<double>& vec) {
  for (double v : vec)
    if (!std::isfinite(v))
      throw std::invalid_argument("adapt_precomputed: REJECT_NONFINITE component");
  return vec;
}

}  // namespace mmsb
