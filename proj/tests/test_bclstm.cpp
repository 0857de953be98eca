#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmsb/bclstm.hpp"
#include "mmsb/errors.hpp"
#include "mmsb/rng.hpp"
#include "test_util.hpp"

using namespace mmsb;

namespace {

// Sequences where an utterance's label is readable only from the *previous*
// element's feature vector: position p carries the class signal of p+1.
// A per-utterance classifier is stuck near chance; a bidirectional sequence
// model is not.
struct ContextData {
  std::vector<LabeledSequence> seqs;
  std::vector<std::vector<double>> flat_X;
  std::vector<int> flat_y;
};

ContextData make_context_data(uint64_t seed, int n_seqs, int len, int dim) {
  Rng rng(seed);
  ContextData out;
  for (int s = 0; s < n_seqs; ++s) {
    std::vector<std::vector<double>> X;
    std::vector<int> y(static_cast<size_t>(len));
    for (int t = 0; t < len; ++t) y[static_cast<size_t>(t)] = rng.uniform_int(2);
    for (int t = 0; t < len; ++t) {
      std::vector<double> x(static_cast<size_t>(dim));
      for (auto& v : x) v = rng.normal() * 0.3;
      if (t + 1 < len) {
        double sig = y[static_cast<size_t>(t + 1)] == 1 ? 2.0 : -2.0;
        for (int k = 0; k < dim / 2; ++k) x[static_cast<size_t>(k)] += sig;
      }
      X.push_back(std::move(x));
    }
    for (int t = 0; t < len; ++t) {
      out.flat_X.push_back(X[static_cast<size_t>(t)]);
      out.flat_y.push_back(y[static_cast<size_t>(t)]);
    }
    out.seqs.emplace_back(std::move(X), std::move(y));
  }
  return out;
}

}  // namespace

TEST_CASE("bclstm learns context a per-utterance oracle cannot") {
  ContextData data = make_context_data(21, 30, 6, 8);
  BcLstmConfig cfg;
  cfg.hidden = 16;
  cfg.train.epochs = 30;
  cfg.train.patience = 30;
  BcLstmTrainReport report;
  BcLstmModel model = bclstm_train(data.seqs, 2, cfg, 5, &report);

  int correct = 0, total = 0;
  for (const auto& [seq, labels] : data.seqs) {
    auto preds = bclstm_predict(model, seq);
    for (size_t t = 0; t < preds.size(); ++t) {
      if (preds[t] == labels[t]) ++correct;
      ++total;
    }
  }
  double lstm_acc = static_cast<double>(correct) / total;
  // per-utterance oracle on the same vectors: the signal simply is not there
  double centroid_acc = testutil::nearest_centroid_accuracy(
      data.flat_X, data.flat_y, data.flat_X, data.flat_y);
  CHECK(lstm_acc > 0.85);
  CHECK(centroid_acc < lstm_acc - 0.15);
}

TEST_CASE("prediction shape and determinism") {
  ContextData data = make_context_data(3, 8, 5, 6);
  BcLstmConfig cfg;
  cfg.hidden = 8;
  cfg.train.epochs = 3;
  BcLstmModel a = bclstm_train(data.seqs, 2, cfg, 7);
  BcLstmModel b = bclstm_train(data.seqs, 2, cfg, 7);
  BcLstmModel c = bclstm_train(data.seqs, 2, cfg, 8);
  CHECK(a.head_W.values() == b.head_W.values());
  CHECK(a.fwd.Wx.values() == b.fwd.Wx.values());
  CHECK(a.head_W.values() != c.head_W.values());

  auto preds = bclstm_predict(a, data.seqs[0].first);
  CHECK(preds.size() == data.seqs[0].first.size());
  for (int p : preds) {
    CHECK(p >= 0);
    CHECK(p < 2);
  }
  CHECK(bclstm_predict(a, data.seqs[0].first) == preds);
}

TEST_CASE("training rejects malformed input") {
  CHECK_THROWS(bclstm_train({}, 2, BcLstmConfig{}, 1));
  ContextData data = make_context_data(4, 3, 4, 5);
  CHECK_THROWS(bclstm_train(data.seqs, 1, BcLstmConfig{}, 1));
  // ragged fused vectors
  auto bad = data.seqs;
  bad[0].first[1].push_back(0.0);
  BcLstmConfig cfg;
  cfg.train.epochs = 1;
  CHECK_THROWS(bclstm_train(bad, 2, cfg, 1));
  // sequence/label length mismatch (every video, so the validation carve
  // cannot hide the malformed one)
  auto mismatched = data.seqs;
  for (auto& [seq, labels] : mismatched) labels.pop_back();
  CHECK_THROWS(bclstm_train(mismatched, 2, cfg, 1));
}

TEST_CASE("an absurd learning rate raises a divergence error") {
  ContextData data = make_context_data(9, 6, 4, 5);
  BcLstmConfig cfg;
  cfg.hidden = 8;
  cfg.train.epochs = 50;
  cfg.train.patience = 50;
  // large enough that the weights overflow and the forward pass sums mixed
  // infinities into NaN
  cfg.train.lr = 1e308;
  CHECK_THROWS_AS(bclstm_train(data.seqs, 2, cfg, 2), TrainingDivergence);
}

TEST_CASE("empty prediction input throws") {
  ContextData data = make_context_data(2, 4, 4, 5);
  BcLstmConfig cfg;
  cfg.train.epochs = 1;
  BcLstmModel model = bclstm_train(data.seqs, 2, cfg, 3);
  CHECK_THROWS(bclstm_predict(model, {}));
}
