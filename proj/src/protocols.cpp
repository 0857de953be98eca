#include "mmsb/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "mmsb/rng.hpp"

namespace mmsb {

namespace {

int count_classes(const Corpus& corpus) {
  std::set<int> classes;
  for (const auto& v : corpus.videos)
    for (const auto& u : v.utterances) classes.insert(u.label);
  return static_cast<int>(classes.size());
}

Corpus corpus_shell(const Corpus& corpus) {
  Corpus out;
  out.name = corpus.name;
  out.scheme = corpus.scheme;
  out.language_tag = corpus.language_tag;
  out.audio_dim = corpus.audio_dim;
  out.visual_dim = corpus.visual_dim;
  out.vocab_size = corpus.vocab_size;
  out.vocab = corpus.vocab;
  return out;
}

}  // namespace

FoldPlan make_speaker_exclusive_folds(const Corpus& corpus, int k, uint64_t seed) {
  auto roster_set = corpus.speaker_roster();
  std::vector<std::string> roster(roster_set.begin(), roster_set.end());
  if (k < 2) throw std::invalid_argument("make_speaker_exclusive_folds: k must be >= 2");
  if (k > static_cast<int>(roster.size()))
    throw std::invalid_argument(
        "make_speaker_exclusive_folds: k exceeds speaker roster size");
  Rng rng(seed);
  rng.shuffle(roster);
  // round-robin dealing: group sizes differ by at most one; k == roster size
  // degenerates to leave-one-speaker-out
  std::vector<std::set<std::string>> groups(static_cast<size_t>(k));
  for (size_t i = 0; i < roster.size(); ++i)
    groups[i % static_cast<size_t>(k)].insert(roster[i]);
  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  for (int g = 0; g < k; ++g) {
    Fold fold;
    fold.test_speakers = groups[static_cast<size_t>(g)];
    for (const auto& s : roster_set)
      if (!fold.test_speakers.count(s)) fold.train_speakers.insert(s);
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

Corpus corpus_for_speakers(const Corpus& corpus, const std::set<std::string>& speakers) {
  Corpus out = corpus_shell(corpus);
  for (const auto& v : corpus.videos)
    if (speakers.count(v.speaker_id)) out.videos.push_back(v);
  return out;
}

FixedSplit make_fixed_split(const Corpus& corpus,
                            const std::vector<std::string>& train_videos,
                            const std::vector<std::string>& test_videos,
                            double val_fraction, uint64_t seed) {
  if (val_fraction < 0.0 || val_fraction >= 1.0)
    throw std::invalid_argument("make_fixed_split: val_fraction outside [0, 1)");
  std::unordered_set<std::string> train_set(train_videos.begin(), train_videos.end());
  std::unordered_set<std::string> test_set(test_videos.begin(), test_videos.end());
  for (const auto& id : train_videos)
    if (test_set.count(id))
      throw std::invalid_argument("make_fixed_split: overlapping video id lists: " + id);
  std::unordered_set<std::string> corpus_ids;
  for (const auto& v : corpus.videos) corpus_ids.insert(v.video_id);
  for (const auto& id : train_set)
    if (!corpus_ids.count(id))
      throw std::invalid_argument("make_fixed_split: unknown train video id: " + id);
  for (const auto& id : test_set)
    if (!corpus_ids.count(id))
      throw std::invalid_argument("make_fixed_split: unknown test video id: " + id);
  if (train_set.size() + test_set.size() != corpus_ids.size())
    throw std::invalid_argument("make_fixed_split: id lists do not cover the corpus");

  FixedSplit split;
  split.train = corpus_shell(corpus);
  split.val = corpus_shell(corpus);
  split.test = corpus_shell(corpus);
  std::vector<const VideoSequence*> train_pool;
  for (const auto& v : corpus.videos) {
    if (test_set.count(v.video_id)) split.test.videos.push_back(v);
    else train_pool.push_back(&v);
  }
  std::vector<int> idx(train_pool.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  Rng rng(seed);
  rng.shuffle(idx);
  int n_val = static_cast<int>(val_fraction * static_cast<double>(train_pool.size()));
  std::unordered_set<int> val_ids(idx.begin(), idx.begin() + n_val);
  for (size_t i = 0; i < train_pool.size(); ++i) {
    auto& dst = val_ids.count(static_cast<int>(i)) ? split.val : split.train;
    dst.videos.push_back(*train_pool[i]);
  }
  return split;
}

MetricsReport run_speaker_inclusive(const Corpus& corpus, const SplitSpec& spec,
                                    const ModelConfig& cfg) {
  if (corpus.videos.size() < 2)
    throw std::runtime_error("run_speaker_inclusive: corpus too small to split");
  if (spec.k < 2) throw std::invalid_argument("run_speaker_inclusive: k must be >= 2");
  double test_fraction = 1.0 / static_cast<double>(spec.k);
  Rng rng(spec.seed);
  Corpus train = corpus_shell(corpus);
  Corpus test = corpus_shell(corpus);
  for (const auto& v : corpus.videos) {
    VideoSequence tr, te;
    tr.video_id = te.video_id = v.video_id;
    tr.speaker_id = te.speaker_id = v.speaker_id;
    for (const auto& u : v.utterances) {
      auto& dst = rng.uniform() < test_fraction ? te : tr;
      UtteranceRecord nu = u;
      nu.position = static_cast<int>(dst.utterances.size());
      dst.utterances.push_back(std::move(nu));
    }
    if (!tr.utterances.empty()) train.videos.push_back(std::move(tr));
    if (!te.utterances.empty()) test.videos.push_back(std::move(te));
  }
  if (train.videos.empty() || test.videos.empty() || count_classes(train) < 2)
    throw std::runtime_error("run_speaker_inclusive: degenerate random split");
  return evaluate_split(train, test, cfg);
}

SpeakerExclusiveResult run_speaker_exclusive(const Corpus& corpus,
                                             const FoldPlan& plan,
                                             const ModelConfig& cfg) {
  SpeakerExclusiveResult result;
  double acc_sum = 0.0;
  for (size_t f = 0; f < plan.folds.size(); ++f) {
    Corpus train = corpus_for_speakers(corpus, plan.folds[f].train_speakers);
    Corpus test = corpus_for_speakers(corpus, plan.folds[f].test_speakers);
    if (train.videos.empty() || test.videos.empty() || count_classes(train) < 2) {
      result.skipped_folds.push_back(static_cast<int>(f));
      continue;
    }
    MetricsReport report = evaluate_split(train, test, cfg);
    acc_sum += report.accuracy;
    result.fold_reports.push_back(std::move(report));
    result.fold_indices.push_back(static_cast<int>(f));
  }
  result.effective_folds = static_cast<int>(result.fold_reports.size());
  if (result.effective_folds == 0)
    throw std::runtime_error("run_speaker_exclusive: every fold was degenerate");
  result.mean_accuracy = acc_sum / static_cast<double>(result.effective_folds);
  return result;
}

MetricsReport run_cross_dataset(const Corpus& train_corpus, const Corpus& test_corpus,
                                const ModelConfig& cfg) {
  if (train_corpus.scheme.kind != test_corpus.scheme.kind)
    throw std::runtime_error("run_cross_dataset: SCHEME_INCOMPATIBLE");
  if (train_corpus.audio_dim != test_corpus.audio_dim ||
      train_corpus.visual_dim != test_corpus.visual_dim)
    throw std::runtime_error("run_cross_dataset: feature dimension mismatch");
  Corpus test = remap_tokens(test_corpus, train_corpus);
  return evaluate_split(train_corpus, test, cfg);
}

ResultTable run_modality_grid(const Corpus& corpus, const FoldPlan& plan,
                              const ModelConfig& base_cfg, int workers) {
  if (corpus.audio_dim <= 0 || corpus.visual_dim <= 0)
    throw std::runtime_error("run_modality_grid: all three modalities required");
  ResultTable table;
  table.col_names = {"SVM", "bc-LSTM"};
  struct Cell {
    size_t row, col;
    ModelConfig cfg;
  };
  std::vector<Cell> cells;
  for (const auto& mods : all_modality_sets()) {
    table.row_names.push_back(mods.to_string());
    size_t r = table.row_names.size() - 1;
    size_t c = 0;
    for (auto kind : {ModelConfig::Kind::kSvm, ModelConfig::Kind::kBcLstm}) {
      ModelConfig cfg = base_cfg;
      cfg.kind = kind;
      cfg.modalities = mods;
      cells.push_back({r, c++, std::move(cfg)});
    }
  }
  table.values.assign(table.row_names.size(),
                      std::vector<double>(table.col_names.size(), 0.0));

  auto run_cell = [&](const Cell& cell) {
    table.values[cell.row][cell.col] =
        run_speaker_exclusive(corpus, plan, cell.cfg).mean_accuracy;
  };
  workers = std::max(1, std::min<int>(workers, static_cast<int>(cells.size())));
  if (workers == 1) {
    for (const auto& cell : cells) run_cell(cell);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1))
            run_cell(cells[i]);
        } catch (...) {
          errors[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return table;
}

}  // namespace mmsb
