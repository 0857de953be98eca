// Acceptance suite: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. The process exit code is the number of
// failed criteria. Tolerances are pinned here, next to each check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mmsb/cli.hpp"
#include "mmsb/corpus.hpp"
#include "mmsb/encoders.hpp"
#include "mmsb/lstm.hpp"
#include "mmsb/metrics.hpp"
#include "mmsb/optim.hpp"
#include "mmsb/pipeline.hpp"
#include "mmsb/protocols.hpp"
#include "mmsb/rng.hpp"
#include "mmsb/svm.hpp"
#include "mmsb/synthetic.hpp"
#include "mmsb/tensor.hpp"
#include "mmsb/tsne.hpp"
#include "test_util.hpp"

using namespace mmsb;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

Tensor random_tensor(std::vector<int> shape, Rng& rng) {
  Tensor t = Tensor::zeros(std::move(shape), /*requires_grad=*/true);
  for (auto& v : t.values()) v = rng.normal() * 0.5;
  return t;
}

// -------------------------------------------------------------------- 1
// Gradient fidelity: conv1d, dense, lstm_cell, bilstm_sequence,
// softmax_cross_entropy and the composed text CNN vs central finite
// differences, h = 1e-5, max relative error < 1e-4, >= 20 seeds.
void check_gradients() {
  const double kTol = 1e-4;
  const double kH = 1e-5;
  double worst = 0.0;
  int seeds_run = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed, ++seeds_run) {
    Rng rng(seed * 7919);
    {  // dense + softmax_cross_entropy
      Tensor x = random_tensor({5}, rng);
      Tensor W = random_tensor({5, 3}, rng);
      Tensor b = random_tensor({3}, rng);
      std::vector<Tensor> params = {x, W, b};
      auto fn = [&]() {
        return softmax_cross_entropy(dense(x, W, b), static_cast<int>(seed % 3));
      };
      worst = std::max(worst, grad_check(fn, params, kH, 200, seed));
    }
    {  // conv1d + max pool
      Tensor input = random_tensor({6, 4}, rng);
      Tensor filters = random_tensor({3, 4, 5}, rng);
      Tensor bias = random_tensor({5}, rng);
      std::vector<Tensor> params = {input, filters, bias};
      auto fn = [&]() {
        return softmax_cross_entropy(max_pool_time(conv1d(input, filters, bias)),
                                     static_cast<int>(seed % 5));
      };
      worst = std::max(worst, grad_check(fn, params, kH, 200, seed));
    }
    {  // lstm_cell
      LstmParams p = LstmParams::init(3, 4, rng);
      Tensor x = random_tensor({3}, rng);
      Tensor h0 = random_tensor({4}, rng);
      Tensor c0 = random_tensor({4}, rng);
      Tensor W = random_tensor({4, 2}, rng);
      Tensor b = random_tensor({2}, rng);
      std::vector<Tensor> params = p.parameters();
      params.insert(params.end(), {x, h0, c0, W, b});
      auto fn = [&]() {
        auto [h, c] = lstm_cell(x, h0, c0, p);
        return softmax_cross_entropy(dense(mul(h, tanh_op(c)), W, b),
                                     static_cast<int>(seed % 2));
      };
      worst = std::max(worst, grad_check(fn, params, kH, 150, seed));
    }
    {  // bilstm over a short sequence
      LstmParams fwd = LstmParams::init(3, 3, rng);
      LstmParams bwd = LstmParams::init(3, 3, rng);
      Tensor W = random_tensor({6, 2}, rng);
      Tensor b = random_tensor({2}, rng);
      std::vector<Tensor> inputs;
      for (int t = 0; t < 3; ++t) inputs.push_back(random_tensor({3}, rng));
      std::vector<Tensor> params = fwd.parameters();
      for (auto& p : bwd.parameters()) params.push_back(p);
      params.insert(params.end(), {W, b});
      for (auto& x : inputs) params.push_back(x);
      auto fn = [&]() {
        auto states = bilstm_sequence(inputs, fwd, bwd);
        std::vector<Tensor> losses;
        for (size_t t = 0; t < states.size(); ++t)
          losses.push_back(softmax_cross_entropy(dense(states[t], W, b),
                                                 static_cast<int>(t % 2)));
        return mean_scalars(losses);
      };
      worst = std::max(worst, grad_check(fn, params, kH, 120, seed));
    }
    {  // composed text CNN (embedding -> conv -> pool -> dense -> relu -> head)
      TextEncoderConfig cfg;
      cfg.vocab_size = 12;
      cfg.embed_dim = 5;
      cfg.filter_widths = {2, 3};
      cfg.maps_per_width = 3;
      cfg.dense_dim = 6;
      cfg.max_len = 10;
      TextEncoderParams enc = TextEncoderParams::init(cfg, rng);
      Tensor W = random_tensor({6, 2}, rng);
      Tensor b = random_tensor({2}, rng);
      std::vector<int> ids = {2, 5, 9, 3, 11, 4};
      std::vector<Tensor> params = enc.parameters();
      params.insert(params.end(), {W, b});
      auto fn = [&]() {
        return softmax_cross_entropy(dense(encode_text(ids, enc, cfg), W, b),
                                     static_cast<int>(seed % 2));
      };
      worst = std::max(worst, grad_check(fn, params, kH, 120, seed));
    }
  }
  std::ostringstream detail;
  detail << "max rel err " << worst << " over " << seeds_run << " seeds (tol 1e-4)";
  report("gradient_fidelity", worst < kTol && seeds_run >= 20, detail.str());
}

// -------------------------------------------------------------------- 2
// SMO vs brute-force projected-gradient dual oracle: >= 50 problems with
// n <= 200; dual objectives within 1e-6, identical predictions, KKT at 1e-3.
void check_svm_oracle() {
  const double kObjTol = 1e-6;
  const double kKktTol = 1e-3;
  int problems = 0;
  double worst_obj = 0.0;
  int pred_mismatches = 0, kkt_violations = 0;
  for (uint64_t seed = 1; seed <= 50 && g_failures >= 0; ++seed) {
    Rng rng(seed * 104729);
    int n = 16 + static_cast<int>(seed % 5) * 12;      // 16..64
    if (seed == 49) n = 120;
    if (seed == 50) n = 200;
    int d = 2 + static_cast<int>(seed % 3);
    double C = (seed % 2) ? 1.0 : 3.0;
    double sep = (seed % 3) ? 1.2 : 0.3;
    double gamma = 0.5 / d;
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int i = 0; i < n; ++i) {
      int yi = i % 2 == 0 ? 1 : -1;
      std::vector<double> x(static_cast<size_t>(d));
      for (auto& v : x) v = rng.normal() + yi * sep;
      X.push_back(std::move(x));
      y.push_back(yi);
    }
    SmoSolution sol = smo_solve(X, y, C, gamma, seed);
    int oracle_iters = n > 100 ? 3000 : 6000;
    auto cold = testutil::svm_dual_oracle(X, y, C, gamma, oracle_iters);
    // warm start from the SMO point: if SMO were short of the optimum, ascent
    // from its own iterate would have to uncover the gap
    auto warm = testutil::svm_dual_oracle(X, y, C, gamma, 1000, &sol.alpha);
    double best = std::max(cold.objective, warm.objective);
    worst_obj = std::max(worst_obj, std::abs(sol.dual_objective - best));

    // decision function from the cold-start oracle's multipliers
    double bias_num = 0.0;
    int bias_cnt = 0;
    auto oracle_raw = [&](const std::vector<double>& x) {
      double f = 0.0;
      for (int i = 0; i < n; ++i)
        f += cold.alpha[static_cast<size_t>(i)] * y[static_cast<size_t>(i)] *
             testutil::rbf(X[static_cast<size_t>(i)], x, gamma);
      return f;
    };
    for (int i = 0; i < n; ++i)
      if (cold.alpha[static_cast<size_t>(i)] > 1e-6 * C &&
          cold.alpha[static_cast<size_t>(i)] < C * (1.0 - 1e-6)) {
        bias_num += y[static_cast<size_t>(i)] - oracle_raw(X[static_cast<size_t>(i)]);
        ++bias_cnt;
      }
    double oracle_bias = bias_cnt > 0 ? bias_num / bias_cnt : sol.bias;
    for (int i = 0; i < n; ++i) {
      double f_smo = sol.bias;
      for (int j = 0; j < n; ++j)
        f_smo += sol.alpha[static_cast<size_t>(j)] * y[static_cast<size_t>(j)] *
                 rbf_kernel(X[static_cast<size_t>(j)], X[static_cast<size_t>(i)], gamma);
      double f_orc = oracle_raw(X[static_cast<size_t>(i)]) + oracle_bias;
      if ((f_smo > 0) != (f_orc > 0)) ++pred_mismatches;
      // KKT conditions of the SMO solution
      double margin = y[static_cast<size_t>(i)] * f_smo;
      double a = sol.alpha[static_cast<size_t>(i)];
      if (a < 1e-8) {
        if (margin < 1.0 - kKktTol) ++kkt_violations;
      } else if (a > C - 1e-8) {
        if (margin > 1.0 + kKktTol) ++kkt_violations;
      } else if (std::abs(margin - 1.0) > kKktTol) {
        ++kkt_violations;
      }
    }
    ++problems;
  }
  std::ostringstream detail;
  detail << problems << " problems, max |dual gap| " << worst_obj
         << " (tol 1e-6), pred mismatches " << pred_mismatches
         << ", KKT violations " << kkt_violations;
  report("svm_oracle_equivalence",
         problems >= 50 && worst_obj < kObjTol && pred_mismatches == 0 &&
             kkt_violations == 0,
         detail.str());
}

// -------------------------------------------------------------------- 3
// Fold invariants over 100 seeds x k in {2,5,10}, plus fixed-split fixtures
// reproducing the published train/test utterance totals.
void check_split_soundness() {
  bool ok = true;
  std::ostringstream detail;

  SynthSpec spec;
  spec.num_videos = 22;
  spec.utterances_per_video = 2;
  spec.num_speakers = 11;
  Corpus corpus = generate_synthetic(spec, 5);
  auto roster = corpus.speaker_roster();
  for (int k : {2, 5, 10}) {
    for (uint64_t seed = 0; seed < 100; ++seed) {
      FoldPlan plan = make_speaker_exclusive_folds(corpus, k, seed);
      std::set<std::string> covered;
      for (const auto& fold : plan.folds) {
        for (const auto& s : fold.test_speakers) {
          if (fold.train_speakers.count(s)) ok = false;         // disjoint
          if (!covered.insert(s).second) ok = false;            // partition
        }
        if (fold.train_speakers.size() + fold.test_speakers.size() !=
            roster.size())
          ok = false;                                           // coverage
      }
      if (covered != roster) ok = false;
    }
  }
  if (!ok) detail << "fold invariant violated; ";

  struct Fixture {
    const char* name;
    int train, test;
  };
  for (Fixture fx : {Fixture{"emotion", 4290, 1208}, Fixture{"sentiment", 1447, 752},
                     Fixture{"transfer_target", 322, 115},
                     Fixture{"transfer_source", 2199, 437}}) {
    std::vector<std::string> train_ids, test_ids;
    Corpus fixture;
    fixture.scheme = LabelScheme::binary_sentiment();
    fixture.audio_dim = 1;
    fixture.visual_dim = 1;
    fixture.vocab_size = 3;
    fixture.vocab = {{"w", 2}};
    int vid = 0;
    auto add_videos = [&](int total, std::vector<std::string>& ids) {
      while (total > 0) {
        int sz = std::min(20, total);
        VideoSequence v;
        v.video_id = "vid" + std::to_string(vid);
        v.speaker_id = "spk" + std::to_string(vid % 40);
        for (int u = 0; u < sz; ++u) {
          UtteranceRecord rec;
          rec.utterance_id = v.video_id + "_u" + std::to_string(u);
          rec.video_id = v.video_id;
          rec.speaker_id = v.speaker_id;
          rec.position = u;
          rec.tokens = {2};
          rec.audio_features = {0.0};
          rec.visual_features = {0.0};
          rec.label = u % 2;
          v.utterances.push_back(std::move(rec));
        }
        ids.push_back(v.video_id);
        fixture.videos.push_back(std::move(v));
        ++vid;
        total -= sz;
      }
    };
    add_videos(fx.train, train_ids);
    add_videos(fx.test, test_ids);
    FixedSplit split = make_fixed_split(fixture, train_ids, test_ids, 0.0, 1);
    if (split.train.num_utterances() != fx.train ||
        split.test.num_utterances() != fx.test) {
      ok = false;
      detail << fx.name << " counts " << split.train.num_utterances() << "/"
             << split.test.num_utterances() << " != " << fx.train << "/" << fx.test
             << "; ";
    }
  }
  if (ok) detail << "300 fold plans and 4 fixed-split fixtures exact";
  report("split_soundness", ok, detail.str());
}

// Shared helper: split a corpus into train/test by whole videos.
FixedSplit video_split(const Corpus& corpus, double test_fraction, uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& v : corpus.videos) ids.push_back(v.video_id);
  Rng rng(seed);
  rng.shuffle(ids);
  size_t n_test = std::max<size_t>(1, static_cast<size_t>(ids.size() * test_fraction));
  std::vector<std::string> test_ids(ids.begin(), ids.begin() + n_test);
  std::vector<std::string> train_ids(ids.begin() + n_test, ids.end());
  return make_fixed_split(corpus, train_ids, test_ids, 0.0, seed);
}

// -------------------------------------------------------------------- 4
// Context benefit: with p_ctx = 0.6 the sequence model must beat an SVM on
// the identical fused features by >= 10 accuracy points (mean of 5 seeds).
void check_context_benefit() {
  double svm_sum = 0.0, lstm_sum = 0.0;
  const int kSeeds = 5;
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    SynthSpec spec;
    spec.num_videos = 30;
    spec.utterances_per_video = 6;
    spec.audio_dim = 8;
    spec.visual_dim = 8;
    spec.p_ctx = 0.6;
    spec.w_audio = 1.0;
    spec.w_visual = 1.0;
    Corpus corpus = generate_synthetic(spec, seed * 31);
    FixedSplit split = video_split(corpus, 0.3, seed);

    ModelConfig cfg;
    cfg.modalities = ModalitySet{false, true, true};
    cfg.model_seed = seed;
    cfg.kind = ModelConfig::Kind::kSvm;
    svm_sum += evaluate_split(split.train, split.test, cfg).accuracy;

    cfg.kind = ModelConfig::Kind::kBcLstm;
    cfg.bclstm.hidden = 32;
    cfg.bclstm.train.epochs = 40;
    cfg.bclstm.train.patience = 10;
    lstm_sum += evaluate_split(split.train, split.test, cfg).accuracy;
  }
  double svm_mean = svm_sum / kSeeds, lstm_mean = lstm_sum / kSeeds;
  std::ostringstream detail;
  detail << "bc-LSTM " << lstm_mean * 100 << "% vs SVM " << svm_mean * 100
         << "% (need +10 pts)";
  report("context_benefit", lstm_mean >= svm_mean + 0.10, detail.str());
}

// -------------------------------------------------------------------- 5
// Multimodality benefit: on the complementary corpus the trimodal model must
// beat the best unimodal model by >= 10 points (mean of 5 seeds).
void check_multimodal_benefit() {
  const int kSeeds = 5;
  double tri_sum = 0.0, best_uni_sum = 0.0;
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    SynthSpec spec;
    spec.num_classes = 4;
    spec.complementary = true;
    spec.num_videos = 28;
    spec.utterances_per_video = 5;
    spec.audio_dim = 8;
    spec.visual_dim = 8;
    spec.vocab_size = 48;
    Corpus corpus = generate_synthetic(spec, seed * 57);
    FixedSplit split = video_split(corpus, 0.3, seed);

    ModelConfig base;
    base.kind = ModelConfig::Kind::kSvm;
    base.model_seed = seed;
    base.text.embed_dim = 12;
    base.text.maps_per_width = 6;
    base.text.dense_dim = 16;
    base.text_train.epochs = 12;
    base.text_train.lr = 1e-2;

    auto acc = [&](ModalitySet mods) {
      ModelConfig cfg = base;
      cfg.modalities = mods;
      return evaluate_split(split.train, split.test, cfg).accuracy;
    };
    double best_uni = std::max({acc({false, true, false}), acc({false, false, true}),
                                acc({true, false, false})});
    tri_sum += acc({true, true, true});
    best_uni_sum += best_uni;
  }
  double tri = tri_sum / kSeeds, uni = best_uni_sum / kSeeds;
  std::ostringstream detail;
  detail << "T+A+V " << tri * 100 << "% vs best unimodal " << uni * 100
         << "% (need +10 pts)";
  report("multimodal_benefit", tri >= uni + 0.10, detail.str());
}

// -------------------------------------------------------------------- 6
// Speaker-overlap inflation: with a strong per-speaker offset (norm 5) the
// speaker-inclusive protocol must score >= 5 points above the
// speaker-exclusive mean (mean of 5 seeds).
void check_speaker_overlap() {
  const int kSeeds = 5;
  double in_sum = 0.0, ex_sum = 0.0;
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    SynthSpec spec;
    spec.num_videos = 20;
    spec.utterances_per_video = 6;
    spec.num_speakers = 10;
    spec.audio_dim = 8;
    spec.visual_dim = 8;
    spec.speaker_bias = 5.0;
    Corpus corpus = generate_synthetic(spec, seed * 73);

    ModelConfig cfg;
    cfg.kind = ModelConfig::Kind::kSvm;
    cfg.modalities = ModalitySet{false, true, true};
    cfg.model_seed = seed;

    FoldPlan plan = make_speaker_exclusive_folds(corpus, 5, seed);
    ex_sum += run_speaker_exclusive(corpus, plan, cfg).mean_accuracy;

    SplitSpec in_spec;
    in_spec.mode = SplitMode::kSpeakerInclusiveRandom;
    in_spec.k = 5;
    in_spec.seed = seed;
    in_sum += run_speaker_inclusive(corpus, in_spec, cfg).accuracy;
  }
  double sp_in = in_sum / kSeeds, sp_ex = ex_sum / kSeeds;
  std::ostringstream detail;
  detail << "speaker-inclusive " << sp_in * 100 << "% vs exclusive " << sp_ex * 100
         << "% (need +5 pts)";
  report("speaker_overlap_inflation", sp_in >= sp_ex + 0.05, detail.str());
}

// -------------------------------------------------------------------- 7
// Cross-dataset degradation: training on corpus A and testing on a
// prototype-rotated corpus B must cost >= 10 points vs the in-domain test.
void check_cross_dataset() {
  const int kSeeds = 3;
  double in_sum = 0.0, cross_sum = 0.0;
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    SynthSpec spec;
    spec.num_videos = 30;
    spec.utterances_per_video = 5;
    spec.audio_dim = 8;
    spec.visual_dim = 8;
    Corpus corpus = generate_synthetic(spec, seed * 91);
    FixedSplit split = video_split(corpus, 0.3, seed);

    SynthSpec shifted = spec;
    shifted.num_videos = 10;
    shifted.rotation_seed = seed * 17 + 3;
    Corpus rotated = generate_synthetic(shifted, seed * 91);

    ModelConfig cfg;
    cfg.kind = ModelConfig::Kind::kSvm;
    cfg.modalities = ModalitySet{false, true, true};
    cfg.model_seed = seed;

    in_sum += evaluate_split(split.train, split.test, cfg).accuracy;
    cross_sum += run_cross_dataset(split.train, rotated, cfg).accuracy;
  }
  double in_acc = in_sum / kSeeds, cross_acc = cross_sum / kSeeds;
  std::ostringstream detail;
  detail << "in-domain " << in_acc * 100 << "% vs shifted " << cross_acc * 100
         << "% (need -10 pts)";
  report("cross_dataset_degradation", cross_acc <= in_acc - 0.10, detail.str());
}

// -------------------------------------------------------------------- 8
// Metrics vs hand-computed oracles on 1000 random pairs: accuracy and
// TP-rate exact, RMSE within 1e-12.
void check_metrics() {
  Rng rng(2024);
  LabelScheme scheme = LabelScheme::emotion4();
  std::vector<int> preds(1000), labels(1000);
  for (int i = 0; i < 1000; ++i) {
    preds[static_cast<size_t>(i)] = rng.uniform_int(4);
    labels[static_cast<size_t>(i)] = rng.uniform_int(4);
  }
  MetricsReport r = metrics(preds, labels, scheme);
  int correct = 0;
  double sq = 0.0;
  std::vector<std::vector<int>> conf(4, std::vector<int>(4, 0));
  for (int i = 0; i < 1000; ++i) {
    if (preds[static_cast<size_t>(i)] == labels[static_cast<size_t>(i)]) ++correct;
    double d = preds[static_cast<size_t>(i)] - labels[static_cast<size_t>(i)];
    sq += d * d;
    ++conf[static_cast<size_t>(labels[static_cast<size_t>(i)])]
          [static_cast<size_t>(preds[static_cast<size_t>(i)])];
  }
  bool ok = r.accuracy == correct / 1000.0;
  ok = ok && std::abs(r.rmse - std::sqrt(sq / 1000.0)) <= 1e-12;
  for (int c = 0; c < 4 && ok; ++c) {
    int row = 0;
    for (int p = 0; p < 4; ++p) row += conf[static_cast<size_t>(c)][static_cast<size_t>(p)];
    double expect = static_cast<double>(conf[static_cast<size_t>(c)][static_cast<size_t>(c)]) / row;
    ok = r.tp_defined[static_cast<size_t>(c)] && r.tp_rate[static_cast<size_t>(c)] == expect;
  }
  report("metrics_correctness", ok,
         ok ? "accuracy/TP exact, RMSE within 1e-12 on 1000 pairs"
            : "metric disagrees with the hand computation");
}

// -------------------------------------------------------------------- 9
// t-SNE: 3 separated Gaussian clusters, n = 150, trustworthiness(k=10) >
// 0.90, KL at the end below KL right after exaggeration.
void check_tsne() {
  Rng rng(7);
  std::vector<std::vector<double>> X;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 50; ++i) {
      std::vector<double> x(6, 0.0);
      x[static_cast<size_t>(c)] = 20.0;
      for (auto& v : x) v += rng.normal();
      X.push_back(std::move(x));
    }
  ProjectionConfig cfg;
  cfg.perplexity = 30.0;
  cfg.iterations = 1000;
  cfg.seed = 3;
  TsneResult result = tsne_2d(X, cfg);
  double trust = testutil::trustworthiness(X, result.points, 10);
  bool kl_drops = result.kl_trace.back() < result.kl_trace[250];
  std::ostringstream detail;
  detail << "trustworthiness(k=10) " << trust << " (need > 0.90), KL "
         << result.kl_trace[250] << " -> " << result.kl_trace.back();
  report("tsne_quality", trust > 0.90 && kl_drops, detail.str());
}

// -------------------------------------------------------------------- 10
// End-to-end determinism: two CLI runs of the bundled quickstart config must
// produce byte-identical result tables.
void check_determinism() {
  const char* env = std::getenv("MMSB_QUICKSTART");
  std::string config = env ? env : "configs/quickstart.json";
  if (!fs::exists(config)) {
    report("end_to_end_determinism", false, "quickstart config not found: " + config);
    return;
  }
  fs::path base = fs::temp_directory_path() / "mmsb_acceptance_det";
  fs::remove_all(base);
  auto run_once = [&](const char* tag) {
    cli::RunOptions opts;
    opts.config_path = config;
    opts.out_dir_override = (base / tag).string();
    return cli::run_experiment(opts);
  };
  int rc1 = run_once("a");
  int rc2 = run_once("b");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string a = slurp(base / "a" / "results.csv");
  std::string b = slurp(base / "b" / "results.csv");
  bool ok = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  std::ostringstream detail;
  detail << "exit codes " << rc1 << "/" << rc2 << ", "
         << (a == b ? "tables byte-identical" : "tables differ");
  report("end_to_end_determinism", ok, detail.str());
}

}  // namespace

int main() {
  check_gradients();
  check_svm_oracle();
  check_split_soundness();
  check_context_benefit();
  check_multimodal_benefit();
  check_speaker_overlap();
  check_cross_dataset();
  check_metrics();
  check_tsne();
  check_determinism();
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
