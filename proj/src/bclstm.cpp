#include "mmsb/bclstm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mmsb/errors.hpp"
#include "mmsb/optim.hpp"

namespace mmsb {

namespace {

std::vector<Tensor> sequence_inputs(const std::vector<std::vector<double>>& seq,
                                    int input_dim) {
  std::vector<Tensor> inputs;
  inputs.reserve(seq.size());
  for (const auto& v : seq) {
    if (static_cast<int>(v.size()) != input_dim)
      throw std::invalid_argument("bclstm: fused vector dimension mismatch");
    inputs.push_back(Tensor::from_values({input_dim}, v));
  }
  return inputs;
}

std::vector<Tensor> sequence_logits(const BcLstmModel& model,
                                    const std::vector<std::vector<double>>& seq) {
  auto inputs = sequence_inputs(seq, model.input_dim);
  auto states = bilstm_sequence(inputs, model.fwd, model.bwd);
  std::vector<Tensor> logits;
  logits.reserve(states.size());
  for (const auto& s : states)
    logits.push_back(dense(s, model.head_W, model.head_b));
  return logits;
}

int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[static_cast<size_t>(best)]) best = static_cast<int>(i);
  return best;
}

}  // namespace

std::vector<Tensor> BcLstmModel::parameters() const {
  std::vector<Tensor> out;
  for (const auto& t : fwd.parameters()) out.push_back(t);
  for (const auto& t : bwd.parameters()) out.push_back(t);
  out.push_back(head_W);
  out.push_back(head_b);
  return out;
}

BcLstmModel bclstm_train(const std::vector<LabeledSequence>& videos,
                         int num_classes, const BcLstmConfig& cfg, uint64_t seed,
                         BcLstmTrainReport* report) {
  if (videos.empty()) throw std::invalid_argument("bclstm_train: empty video list");
  if (num_classes < 2) throw std::invalid_argument("bclstm_train: need >= 2 classes");
  int input_dim = static_cast<int>(videos[0].first.at(0).size());

  Rng rng(seed);
  BcLstmModel model;
  model.num_classes = num_classes;
  model.input_dim = input_dim;
  model.fwd = LstmParams::init(input_dim, cfg.hidden, rng);
  model.bwd = LstmParams::init(input_dim, cfg.hidden, rng);
  model.head_W = Tensor::zeros({2 * cfg.hidden, num_classes}, /*requires_grad=*/true);
  for (auto& v : model.head_W.values()) v = rng.uniform_range(-0.1, 0.1);
  model.head_b = Tensor::zeros({num_classes}, /*requires_grad=*/true);
  std::vector<Tensor> params = model.parameters();

  std::vector<int> order(videos.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  rng.shuffle(order);
  int n_val = static_cast<int>(std::floor(cfg.train.val_fraction *
                                          static_cast<double>(videos.size())));
  if (cfg.train.val_fraction > 0.0 && n_val == 0 && videos.size() > 1) n_val = 1;
  std::vector<int> val_idx(order.begin(), order.begin() + n_val);
  std::vector<int> train_idx(order.begin() + n_val, order.end());
  if (train_idx.empty())
    throw std::runtime_error("bclstm_train: no training videos after split");

  auto accuracy_on = [&](const std::vector<int>& idx) {
    int correct = 0, total = 0;
    for (int i : idx) {
      const auto& [seq, labels] = videos[static_cast<size_t>(i)];
      auto preds = bclstm_predict(model, seq);
      for (size_t t = 0; t < preds.size(); ++t) {
        if (preds[t] == labels[t]) ++correct;
        ++total;
      }
    }
    return total == 0 ? 0.0 : static_cast<double>(correct) / total;
  };

  Adam opt(params, AdamConfig{cfg.train.lr, 0.9, 0.999, 1e-8});
  double best_val = -1.0;
  int bad_epochs = 0;
  std::vector<std::vector<double>> best_values;
  auto snapshot = [&]() {
    best_values.clear();
    for (auto& p : params) best_values.push_back(p.values());
  };
  snapshot();

  int epochs_run = 0;
  for (int epoch = 0; epoch < cfg.train.epochs; ++epoch) {
    rng.shuffle(train_idx);
    for (int i : train_idx) {
      const auto& [seq, labels] = videos[static_cast<size_t>(i)];
      if (seq.size() != labels.size())
        throw std::invalid_argument("bclstm_train: sequence/label length mismatch");
      auto logits = sequence_logits(model, seq);
      std::vector<Tensor> losses;
      for (size_t t = 0; t < logits.size(); ++t)
        losses.push_back(softmax_cross_entropy(logits[t], labels[t]));
      Tensor loss = mean_scalars(losses);
      if (!std::isfinite(loss.item()))
        throw TrainingDivergence("bclstm_train: non-finite loss");
      zero_grad(params);
      backward(loss);
      opt.step(params);
    }
    ++epochs_run;
    double val_acc = val_idx.empty() ? accuracy_on(train_idx) : accuracy_on(val_idx);
    if (val_acc > best_val) {
      best_val = val_acc;
      bad_epochs = 0;
      snapshot();
    } else if (++bad_epochs >= cfg.train.patience) {
      break;
    }
  }
  for (size_t i = 0; i < params.size(); ++i) params[i].values() = best_values[i];

  if (report) {
    report->train_accuracy = accuracy_on(train_idx);
    report->val_accuracy = val_idx.empty() ? report->train_accuracy : accuracy_on(val_idx);
    report->epochs_run = epochs_run;
  }
  return model;
}

std::vector<int> bclstm_predict(const BcLstmModel& model,
                                const std::vector<std::vector<double>>& sequence) {
  if (sequence.empty())
    throw std::invalid_argument("bclstm_predict: empty sequence");
  auto logits = sequence_logits(model, sequence);
  std::vector<int> preds;
  preds.reserve(logits.size());
  for (const auto& l : logits) preds.push_back(argmax_lowest(l.values()));
  return preds;
}

}  // namespace mmsb
