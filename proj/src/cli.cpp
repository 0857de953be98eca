#include "mmsb/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mmsb/checkpoint.hpp"
#include "mmsb/corpus.hpp"
#include "mmsb/errors.hpp"
#include "mmsb/pipeline.hpp"
#include "mmsb/protocols.hpp"
#include "mmsb/synthetic.hpp"
#include "mmsb/tsne.hpp"

namespace mmsb::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "mmsb 1.0.0";

struct DatasetSpec {
  bool synthetic = false;
  SynthSpec synth;
  std::string manifest;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  DatasetSpec test_dataset;  // cross-dataset only
  bool has_test_dataset = false;

  SplitMode mode = SplitMode::kSpeakerExclusiveKfold;
  int k = 5;
  double val_fraction = 0.2;
  bool grid = false;
  std::vector<std::string> train_videos, test_videos;

  ModelConfig model;

  bool has_projection = false;
  ProjectionConfig projection;
  std::vector<ModalitySet> projection_modalities;

  uint64_t data_seed = 1, model_seed = 2, split_seed = 3;
  std::string output_dir = "out";
  int workers = 1;
};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

SynthSpec parse_synth(const json& j) {
  SynthSpec s;
  s.num_classes = get_or(j, "num_classes", s.num_classes);
  s.num_videos = get_or(j, "num_videos", s.num_videos);
  s.utterances_per_video = get_or(j, "utterances_per_video", s.utterances_per_video);
  s.audio_dim = get_or(j, "audio_dim", s.audio_dim);
  s.visual_dim = get_or(j, "visual_dim", s.visual_dim);
  s.vocab_size = get_or(j, "vocab_size", s.vocab_size);
  s.tokens_per_utterance = get_or(j, "tokens_per_utterance", s.tokens_per_utterance);
  s.w_text = get_or(j, "w_text", s.w_text);
  s.w_audio = get_or(j, "w_audio", s.w_audio);
  s.w_visual = get_or(j, "w_visual", s.w_visual);
  s.p_ctx = get_or(j, "p_ctx", s.p_ctx);
  s.speaker_bias = get_or(j, "speaker_bias", s.speaker_bias);
  s.num_speakers = get_or(j, "num_speakers", s.num_speakers);
  s.complementary = get_or(j, "complementary", s.complementary);
  s.rotation_seed = get_or(j, "rotation_seed", s.rotation_seed);
  return s;
}

DatasetSpec parse_dataset(const json& j) {
  DatasetSpec d;
  if (j.contains("manifest")) {
    d.manifest = j.at("manifest").get<std::string>();
  } else if (j.contains("synthetic")) {
    d.synthetic = true;
    d.synth = parse_synth(j.at("synthetic"));
  } else {
    throw ConfigError("config: dataset needs either 'manifest' or 'synthetic'");
  }
  return d;
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  if (!j.contains("dataset")) throw ConfigError("config: missing 'dataset'");
  cfg.dataset = parse_dataset(j.at("dataset"));

  if (!j.contains("protocol")) throw ConfigError("config: missing 'protocol'");
  const json& p = j.at("protocol");
  std::string mode = get_or<std::string>(p, "mode", "speaker_exclusive_kfold");
  if (mode == "speaker_exclusive_kfold") cfg.mode = SplitMode::kSpeakerExclusiveKfold;
  else if (mode == "speaker_inclusive") cfg.mode = SplitMode::kSpeakerInclusiveRandom;
  else if (mode == "fixed") cfg.mode = SplitMode::kFixed;
  else if (mode == "cross_dataset") cfg.mode = SplitMode::kCrossDataset;
  else throw ConfigError("config: unknown protocol mode '" + mode + "'");
  cfg.k = get_or(p, "k", cfg.k);
  cfg.val_fraction = get_or(p, "val_fraction", cfg.val_fraction);
  cfg.grid = get_or(p, "grid", cfg.grid);
  cfg.train_videos = get_or(p, "train_videos", cfg.train_videos);
  cfg.test_videos = get_or(p, "test_videos", cfg.test_videos);
  if (cfg.mode == SplitMode::kFixed &&
      (cfg.train_videos.empty() || cfg.test_videos.empty()))
    throw ConfigError("config: fixed mode requires train_videos and test_videos");
  if (cfg.mode == SplitMode::kCrossDataset) {
    if (!p.contains("test_dataset"))
      throw ConfigError("config: cross_dataset mode requires protocol.test_dataset");
    cfg.test_dataset = parse_dataset(p.at("test_dataset"));
    cfg.has_test_dataset = true;
  }

  if (j.contains("model")) {
    const json& m = j.at("model");
    std::string kind = get_or<std::string>(m, "classifier", "svm");
    if (kind == "svm") cfg.model.kind = ModelConfig::Kind::kSvm;
    else if (kind == "bclstm") cfg.model.kind = ModelConfig::Kind::kBcLstm;
    else throw ConfigError("config: unknown classifier '" + kind + "'");
    cfg.model.modalities =
        ModalitySet::parse(get_or<std::string>(m, "modalities", "T+A+V"));
    if (m.contains("svm")) {
      const json& s = m.at("svm");
      cfg.model.svm.C = get_or(s, "C", cfg.model.svm.C);
      cfg.model.svm.gamma = get_or(s, "gamma", cfg.model.svm.gamma);
    }
    if (m.contains("bclstm")) {
      const json& b = m.at("bclstm");
      cfg.model.bclstm.hidden = get_or(b, "hidden", cfg.model.bclstm.hidden);
      cfg.model.bclstm.train.epochs = get_or(b, "epochs", cfg.model.bclstm.train.epochs);
      cfg.model.bclstm.train.lr = get_or(b, "lr", cfg.model.bclstm.train.lr);
      cfg.model.bclstm.train.patience =
          get_or(b, "patience", cfg.model.bclstm.train.patience);
      cfg.model.bclstm.train.val_fraction =
          get_or(b, "val_fraction", cfg.model.bclstm.train.val_fraction);
    }
    if (m.contains("text_train")) {
      const json& t = m.at("text_train");
      cfg.model.text_train.epochs = get_or(t, "epochs", cfg.model.text_train.epochs);
      cfg.model.text_train.batch_size =
          get_or(t, "batch_size", cfg.model.text_train.batch_size);
      cfg.model.text_train.lr = get_or(t, "lr", cfg.model.text_train.lr);
      cfg.model.text_train.patience =
          get_or(t, "patience", cfg.model.text_train.patience);
      cfg.model.text_train.val_fraction =
          get_or(t, "val_fraction", cfg.model.text_train.val_fraction);
    }
  }
  if (j.contains("encoder")) {
    const json& e = j.at("encoder");
    cfg.model.text.embed_dim = get_or(e, "embed_dim", cfg.model.text.embed_dim);
    cfg.model.text.filter_widths =
        get_or(e, "filter_widths", cfg.model.text.filter_widths);
    cfg.model.text.maps_per_width =
        get_or(e, "maps_per_width", cfg.model.text.maps_per_width);
    cfg.model.text.dense_dim = get_or(e, "dense_dim", cfg.model.text.dense_dim);
    cfg.model.text.max_len = get_or(e, "max_len", cfg.model.text.max_len);
  }

  if (j.contains("projection")) {
    const json& pr = j.at("projection");
    cfg.has_projection = true;
    cfg.projection.perplexity = get_or(pr, "perplexity", cfg.projection.perplexity);
    cfg.projection.iterations = get_or(pr, "iterations", cfg.projection.iterations);
    cfg.projection.learning_rate =
        get_or(pr, "learning_rate", cfg.projection.learning_rate);
    if (cfg.projection.perplexity < 2.0)
      throw ConfigError("config: projection.perplexity must be >= 2");
    if (cfg.projection.iterations < 250)
      throw ConfigError("config: projection.iterations must be >= 250");
    std::vector<std::string> mods =
        get_or<std::vector<std::string>>(pr, "modalities", {"T+A+V"});
    for (const auto& m : mods) {
      try {
        cfg.projection_modalities.push_back(ModalitySet::parse(m));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: projection: ") + e.what());
      }
    }
  }

  if (j.contains("seeds")) {
    const json& s = j.at("seeds");
    cfg.data_seed = get_or(s, "data_seed", cfg.data_seed);
    cfg.model_seed = get_or(s, "model_seed", cfg.model_seed);
    cfg.split_seed = get_or(s, "split_seed", cfg.split_seed);
  }
  cfg.model.model_seed = cfg.model_seed;
  cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir);
  cfg.workers = get_or(j, "workers", cfg.workers);
  return cfg;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

Corpus realize_dataset(const DatasetSpec& d, uint64_t data_seed) {
  if (d.synthetic) return generate_synthetic(d.synth, data_seed);
  return load_corpus(d.manifest);
}

json metrics_to_json(const MetricsReport& r) {
  json j;
  j["accuracy"] = r.accuracy;
  j["rmse"] = r.rmse;
  j["tp_rate"] = r.tp_rate;
  j["tp_defined"] = r.tp_defined;
  j["confusion"] = r.confusion;
  j["n"] = r.n;
  return j;
}

void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& files) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  files.push_back(path.filename().string());
}

void save_trained_model(const TrainedModel& model, const fs::path& out_dir,
                        std::vector<std::string>& files) {
  std::map<std::string, Tensor> tensors;
  if (model.cfg.modalities.text) {
    tensors["text.embedding"] = model.text_encoder.embedding;
    for (size_t i = 0; i < model.text_encoder.filters.size(); ++i) {
      tensors["text.filters." + std::to_string(i)] = model.text_encoder.filters[i];
      tensors["text.filter_bias." + std::to_string(i)] =
          model.text_encoder.filter_bias[i];
    }
    tensors["text.dense_W"] = model.text_encoder.dense_W;
    tensors["text.dense_b"] = model.text_encoder.dense_b;
  }
  if (model.cfg.kind == ModelConfig::Kind::kSvm) {
    write_file(out_dir / "model.svm.json", svm_to_json(model.svm), files);
  } else {
    auto add = [&](const std::string& prefix, const LstmParams& p) {
      tensors[prefix + ".Wx"] = p.Wx;
      tensors[prefix + ".Wh"] = p.Wh;
      tensors[prefix + ".b"] = p.b;
    };
    add("bclstm.fwd", model.bclstm.fwd);
    add("bclstm.bwd", model.bclstm.bwd);
    tensors["bclstm.head_W"] = model.bclstm.head_W;
    tensors["bclstm.head_b"] = model.bclstm.head_b;
  }
  if (!tensors.empty()) {
    save_checkpoint(tensors, (out_dir / "model.ckpt.json").string());
    files.push_back("model.ckpt.json");
  }
}

void write_projections(const ExperimentConfig& cfg, const Corpus& corpus,
                       const fs::path& out_dir, std::vector<std::string>& files) {
  // one frozen text encoder, trained on the full corpus, shared by every
  // projection that includes the text modality
  TextEncoderParams enc;
  TextEncoderConfig text_cfg = cfg.model.text;
  bool need_text = false;
  for (const auto& m : cfg.projection_modalities) need_text |= m.text;
  if (need_text) {
    text_cfg.vocab_size = std::max(corpus.vocab_size, 2);
    enc = train_text_encoder(corpus, text_cfg, cfg.model.text_train, cfg.model_seed);
  }
  for (const auto& mods : cfg.projection_modalities) {
    std::vector<std::vector<double>> X;
    std::vector<std::string> ids;
    std::vector<int> labels;
    for (const auto& v : corpus.videos) {
      for (const auto& u : v.utterances) {
        UtteranceFeatures f;
        if (mods.text) f.text = encode_text(u.tokens, enc, text_cfg).values();
        if (mods.audio) f.audio = u.audio_features;
        if (mods.visual) f.visual = u.visual_features;
        X.push_back(fuse(f, mods));
        ids.push_back(u.utterance_id);
        labels.push_back(u.label);
      }
    }
    ProjectionConfig pc = cfg.projection;
    pc.seed = cfg.model_seed;
    TsneResult result = tsne_2d(X, pc);
    std::ostringstream csv;
    csv << "utterance_id,x,y,label,modality_set\n";
    std::string mod_name = mods.to_string();
    for (size_t i = 0; i < ids.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f", result.points[i][0],
                    result.points[i][1]);
      csv << ids[i] << "," << buf << ","
          << corpus.scheme.class_names[static_cast<size_t>(labels[i])] << ","
          << mod_name << "\n";
    }
    std::string fname = "projection_";
    for (char c : mod_name)
      if (c != ' ') fname += (c == '+' ? '_' : c);
    fname += ".csv";
    write_file(out_dir / fname, csv.str(), files);
  }
}

int classify_exception_and_report(const char* stage) {
  try {
    throw;
  } catch (const ConfigError& e) {
    std::cerr << "error (" << stage << "): " << e.what() << "\n";
    return kExitConfigError;
  } catch (const TrainingDivergence& e) {
    std::cerr << "error (" << stage << "): " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error (" << stage << "): " << e.what() << "\n";
    return kExitDataError;
  }
}

struct LoadedConfig {
  ExperimentConfig cfg;
  uint64_t config_hash = 0;
};

LoadedConfig load_and_apply(const RunOptions& opts) {
  json j = read_config_file(opts.config_path);
  LoadedConfig lc;
  lc.cfg = parse_config(j);
  lc.config_hash = fnv1a_file(opts.config_path);
  if (!opts.out_dir_override.empty()) lc.cfg.output_dir = opts.out_dir_override;
  if (opts.workers > 0) {
    lc.cfg.workers = opts.workers;
  } else if (lc.cfg.workers <= 1) {
    if (const char* env = std::getenv("MMSB_WORKERS")) {
      int w = std::atoi(env);
      if (w > 0) lc.cfg.workers = w;
    }
  }
  return lc;
}

fs::path prepare_out_dir(const ExperimentConfig& cfg, bool overwrite) {
  fs::path out_dir(cfg.output_dir);
  if (fs::exists(out_dir) && !fs::is_empty(out_dir) && !overwrite)
    throw std::runtime_error("output directory not empty (use --overwrite): " +
                             out_dir.string());
  fs::create_directories(out_dir);
  return out_dir;
}

void write_manifest(const ExperimentConfig& cfg, uint64_t config_hash,
                    const fs::path& out_dir, std::vector<std::string>& files) {
  json manifest;
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(config_hash));
  manifest["config_hash"] = hash_buf;
  manifest["version"] = kVersion;
  manifest["seeds"] = {{"data_seed", cfg.data_seed},
                       {"model_seed", cfg.model_seed},
                       {"split_seed", cfg.split_seed}};
  manifest["files"] = files;
  std::ofstream out(out_dir / "manifest.json");
  out << manifest.dump(2) << "\n";
}

}  // namespace

int run_experiment(const RunOptions& opts) {
  LoadedConfig lc;
  try {
    lc = load_and_apply(opts);
  } catch (...) {
    return classify_exception_and_report("config");
  }
  ExperimentConfig& cfg = lc.cfg;
  try {
    fs::path out_dir = prepare_out_dir(cfg, opts.overwrite);
    std::vector<std::string> files;
    Corpus corpus = realize_dataset(cfg.dataset, cfg.data_seed);

    switch (cfg.mode) {
      case SplitMode::kSpeakerExclusiveKfold: {
        FoldPlan plan = make_speaker_exclusive_folds(corpus, cfg.k, cfg.split_seed);
        if (cfg.grid) {
          ResultTable table = run_modality_grid(corpus, plan, cfg.model, cfg.workers);
          write_file(out_dir / "results.csv", render_table(table, TableStyle::kCsv),
                     files);
          write_file(out_dir / "results.txt", render_table(table, TableStyle::kText),
                     files);
        } else {
          SpeakerExclusiveResult result = run_speaker_exclusive(corpus, plan, cfg.model);
          json out;
          out["mean_accuracy"] = result.mean_accuracy;
          out["effective_folds"] = result.effective_folds;
          out["skipped_folds"] = result.skipped_folds;
          out["folds"] = json::array();
          for (const auto& r : result.fold_reports)
            out["folds"].push_back(metrics_to_json(r));
          write_file(out_dir / "metrics.json", out.dump(2) + "\n", files);
        }
        break;
      }
      case SplitMode::kSpeakerInclusiveRandom: {
        SplitSpec spec{SplitMode::kSpeakerInclusiveRandom, cfg.k, cfg.val_fraction,
                       cfg.split_seed};
        MetricsReport report = run_speaker_inclusive(corpus, spec, cfg.model);
        write_file(out_dir / "metrics.json", metrics_to_json(report).dump(2) + "\n",
                   files);
        break;
      }
      case SplitMode::kFixed: {
        FixedSplit split = make_fixed_split(corpus, cfg.train_videos, cfg.test_videos,
                                            cfg.val_fraction, cfg.split_seed);
        TrainedModel model = train_model(split.train, cfg.model);
        std::vector<int> preds = predict_corpus(model, split.test);
        std::vector<int> labels;
        for (const auto* u : split.test.all_utterances()) labels.push_back(u->label);
        MetricsReport report = metrics(preds, labels, split.test.scheme);
        write_file(out_dir / "metrics.json", metrics_to_json(report).dump(2) + "\n",
                   files);
        save_trained_model(model, out_dir, files);
        break;
      }
      case SplitMode::kCrossDataset: {
        Corpus test = realize_dataset(cfg.test_dataset, cfg.data_seed);
        MetricsReport report = run_cross_dataset(corpus, test, cfg.model);
        write_file(out_dir / "metrics.json", metrics_to_json(report).dump(2) + "\n",
                   files);
        break;
      }
    }
    if (cfg.has_projection) write_projections(cfg, corpus, out_dir, files);
    write_manifest(cfg, lc.config_hash, out_dir, files);
    return kExitOk;
  } catch (...) {
    return classify_exception_and_report("run");
  }
}

int validate_config(const std::string& config_path) {
  try {
    parse_config(read_config_file(config_path));
    std::cout << "config ok: " << config_path << "\n";
    return kExitOk;
  } catch (...) {
    return classify_exception_and_report("validate");
  }
}

int run_projection_only(const RunOptions& opts) {
  LoadedConfig lc;
  try {
    lc = load_and_apply(opts);
  } catch (...) {
    return classify_exception_and_report("config");
  }
  try {
    if (!lc.cfg.has_projection)
      throw ConfigError("config: 'projection' section required for project");
    fs::path out_dir = prepare_out_dir(lc.cfg, opts.overwrite);
    std::vector<std::string> files;
    Corpus corpus = realize_dataset(lc.cfg.dataset, lc.cfg.data_seed);
    write_projections(lc.cfg, corpus, out_dir, files);
    write_manifest(lc.cfg, lc.config_hash, out_dir, files);
    return kExitOk;
  } catch (...) {
    return classify_exception_and_report("project");
  }
}

}  // namespace mmsb::cli
