#include "mmsb/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mmsb/rng.hpp"

namespace mmsb {

namespace {

constexpr double kPrototypeNorm = 3.0;

void normalize_to(std::vector<double>& v, double target_norm) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) return;
  for (double& x : v) x *= target_norm / norm;
}

std::vector<double> random_unit(Rng& rng, int dim, double norm) {
  std::vector<double> v(static_cast<size_t>(dim));
  for (double& x : v) x = rng.normal();
  normalize_to(v, norm);
  return v;
}

// Random orthogonal matrix via Gram-Schmidt on a Gaussian matrix.
std::vector<std::vector<double>> random_rotation(Rng& rng, int dim) {
  std::vector<std::vector<double>> q;
  for (int i = 0; i < dim; ++i) {
    std::vector<double> v(static_cast<size_t>(dim));
    for (double& x : v) x = rng.normal();
    for (const auto& u : q) {
      double dot = 0.0;
      for (int j = 0; j < dim; ++j) dot += v[static_cast<size_t>(j)] * u[static_cast<size_t>(j)];
      for (int j = 0; j < dim; ++j) v[static_cast<size_t>(j)] -= dot * u[static_cast<size_t>(j)];
    }
    normalize_to(v, 1.0);
    q.push_back(std::move(v));
  }
  return q;
}

std::vector<double> rotate(const std::vector<std::vector<double>>& R,
                           const std::vector<double>& v) {
  std::vector<double> out(v.size(), 0.0);
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) out[i] += R[i][j] * v[j];
  return out;
}

}  // namespace

Corpus generate_synthetic(const SynthSpec& spec, uint64_t seed) {
  if (spec.num_classes < 2)
    throw std::invalid_argument("generate_synthetic: need >= 2 classes");
  if (spec.p_ctx < 0.0 || spec.p_ctx > 1.0)
    throw std::invalid_argument("generate_synthetic: p_ctx outside [0, 1]");
  for (double w : {spec.w_text, spec.w_audio, spec.w_visual})
    if (w < 0.0 || w > 1.0)
      throw std::invalid_argument("generate_synthetic: modality weight outside [0, 1]");
  if (spec.speaker_bias < 0.0)
    throw std::invalid_argument("generate_synthetic: negative speaker bias");
  if (spec.complementary && spec.num_classes != 4)
    throw std::invalid_argument("generate_synthetic: complementary mode needs 4 classes");
  if (spec.audio_dim < 2 || spec.visual_dim < 2)
    throw std::invalid_argument("generate_synthetic: feature dims must be >= 2");
  if (spec.num_videos < 1 || spec.utterances_per_video < 1)
    throw std::invalid_argument("generate_synthetic: empty corpus requested");

  const int C = spec.num_classes;
  // label-group per modality: in complementary mode each modality sees one bit
  auto group_audio = [&](int c) { return spec.complementary ? (c & 1) : c; };
  auto group_visual = [&](int c) { return spec.complementary ? ((c >> 1) & 1) : c; };
  auto group_text = [&](int c) { return spec.complementary ? (c & 1) : c; };

  const int a_own = spec.audio_dim / 2, a_ctx = spec.audio_dim - a_own;
  const int v_own = spec.visual_dim / 2, v_ctx = spec.visual_dim - v_own;

  // Prototypes drawn from a stream independent of the per-record stream so
  // structural parameters match across corpora generated with the same seed.
  Rng proto_rng(seed ^ 0x5eed0707c0ffee11ULL);
  std::vector<std::vector<double>> proto_a_own(static_cast<size_t>(C)),
      proto_a_ctx(static_cast<size_t>(C)), proto_v_own(static_cast<size_t>(C)),
      proto_v_ctx(static_cast<size_t>(C));
  for (int c = 0; c < C; ++c) {
    proto_a_own[static_cast<size_t>(c)] = random_unit(proto_rng, a_own, kPrototypeNorm);
    proto_a_ctx[static_cast<size_t>(c)] = random_unit(proto_rng, a_ctx, kPrototypeNorm);
    proto_v_own[static_cast<size_t>(c)] = random_unit(proto_rng, v_own, kPrototypeNorm);
    proto_v_ctx[static_cast<size_t>(c)] = random_unit(proto_rng, v_ctx, kPrototypeNorm);
  }

  // Token range layout: ids 0/1 reserved, then C own-ranges of width K, then
  // C context-ranges of width K.
  int K = std::max(1, (spec.vocab_size - 2) / (2 * C));
  std::vector<int> text_group_map(static_cast<size_t>(C));
  for (int c = 0; c < C; ++c) text_group_map[static_cast<size_t>(c)] = group_text(c);

  if (spec.rotation_seed != 0) {
    Rng rot_rng(spec.rotation_seed);
    auto Ra = random_rotation(rot_rng, a_own);
    auto Rv = random_rotation(rot_rng, v_own);
    auto Rac = random_rotation(rot_rng, a_ctx);
    auto Rvc = random_rotation(rot_rng, v_ctx);
    for (int c = 0; c < C; ++c) {
      proto_a_own[static_cast<size_t>(c)] = rotate(Ra, proto_a_own[static_cast<size_t>(c)]);
      proto_v_own[static_cast<size_t>(c)] = rotate(Rv, proto_v_own[static_cast<size_t>(c)]);
      proto_a_ctx[static_cast<size_t>(c)] = rotate(Rac, proto_a_ctx[static_cast<size_t>(c)]);
      proto_v_ctx[static_cast<size_t>(c)] = rotate(Rvc, proto_v_ctx[static_cast<size_t>(c)]);
    }
    // shift the class-to-token-range mapping so text cues mislead
    for (int c = 0; c < C; ++c)
      text_group_map[static_cast<size_t>(c)] = (group_text(c) + 1) % C;
  }

  int num_speakers = spec.num_speakers > 0 ? spec.num_speakers : spec.num_videos;
  Rng speaker_rng(seed ^ 0xb1a5edULL);
  std::vector<std::vector<double>> spk_audio(static_cast<size_t>(num_speakers)),
      spk_visual(static_cast<size_t>(num_speakers));
  for (int s = 0; s < num_speakers; ++s) {
    spk_audio[static_cast<size_t>(s)] =
        random_unit(speaker_rng, spec.audio_dim, spec.speaker_bias);
    spk_visual[static_cast<size_t>(s)] =
        random_unit(speaker_rng, spec.visual_dim, spec.speaker_bias);
  }

  Corpus corpus;
  corpus.name = "synthetic";
  corpus.scheme = C == 4 ? LabelScheme::emotion4() : LabelScheme::binary_sentiment();
  if (C != 2 && C != 4)
    corpus.scheme = LabelScheme{LabelKind::kEmotion4, {}};
  if (corpus.scheme.class_names.empty())
    for (int c = 0; c < C; ++c) corpus.scheme.class_names.push_back("class" + std::to_string(c));
  corpus.language_tag = "synthetic";
  corpus.audio_dim = spec.audio_dim;
  corpus.visual_dim = spec.visual_dim;
  corpus.vocab_size = std::max(spec.vocab_size, 2 + 2 * C * K);
  for (int i = 2; i < corpus.vocab_size; ++i)
    corpus.vocab.emplace("tok" + std::to_string(i), i);

  Rng rng(seed);
  for (int vi = 0; vi < spec.num_videos; ++vi) {
    VideoSequence video;
    video.video_id = "vid" + std::to_string(vi);
    video.speaker_id = "spk" + std::to_string(vi % num_speakers);
    int spk = vi % num_speakers;
    int n = spec.utterances_per_video;

    std::vector<int> labels(static_cast<size_t>(n));
    std::vector<bool> planted(static_cast<size_t>(n), false);
    for (int p = 0; p < n; ++p) labels[static_cast<size_t>(p)] = rng.uniform_int(C);
    for (int p = 1; p < n; ++p)
      planted[static_cast<size_t>(p)] = rng.uniform() < spec.p_ctx;

    for (int p = 0; p < n; ++p) {
      UtteranceRecord u;
      u.video_id = video.video_id;
      u.speaker_id = video.speaker_id;
      u.utterance_id = video.video_id + "_u" + std::to_string(p);
      u.position = p;
      int c = labels[static_cast<size_t>(p)];

      // audio / visual: own half then context half
      auto build = [&](int own_dim, int ctx_dim, double w,
                       const std::vector<std::vector<double>>& own_protos,
                       const std::vector<std::vector<double>>& ctx_protos,
                       int own_group, const std::vector<double>& spk_offset) {
        std::vector<double> f;
        f.reserve(static_cast<size_t>(own_dim + ctx_dim));
        for (int j = 0; j < own_dim; ++j) {
          double signal = planted[static_cast<size_t>(p)]
                              ? 0.0
                              : w * own_protos[static_cast<size_t>(own_group)][static_cast<size_t>(j)];
          f.push_back(signal + rng.normal());
        }
        for (int j = 0; j < ctx_dim; ++j) {
          double signal = 0.0;
          // the utterance right after this one is planted: carry its label
          if (p + 1 < n && planted[static_cast<size_t>(p + 1)]) {
            int nc = labels[static_cast<size_t>(p + 1)];
            int ng = &own_protos == &proto_a_own ? group_audio(nc) : group_visual(nc);
            signal = w * ctx_protos[static_cast<size_t>(ng)][static_cast<size_t>(j)];
          }
          f.push_back(signal + rng.normal());
        }
        for (int j = 0; j < own_dim + ctx_dim; ++j)
          f[static_cast<size_t>(j)] += spk_offset[static_cast<size_t>(j)];
        return f;
      };
      u.audio_features = build(a_own, a_ctx, spec.w_audio, proto_a_own, proto_a_ctx,
                               group_audio(c), spk_audio[static_cast<size_t>(spk)]);
      u.visual_features = build(v_own, v_ctx, spec.w_visual, proto_v_own, proto_v_ctx,
                                group_visual(c), spk_visual[static_cast<size_t>(spk)]);

      // tokens: class-indicative draws unless this utterance is planted
      for (int t = 0; t < spec.tokens_per_utterance; ++t) {
        bool informative =
            !planted[static_cast<size_t>(p)] && rng.uniform() < spec.w_text;
        int id;
        if (informative) {
          int g = text_group_map[static_cast<size_t>(c)];
          id = 2 + g * K + rng.uniform_int(K);
        } else {
          id = 2 + rng.uniform_int(corpus.vocab_size - 2);
        }
        u.tokens.push_back(id);
      }
      if (p + 1 < n && planted[static_cast<size_t>(p + 1)]) {
        // carrier tokens for the planted neighbor, from its context range
        int g = text_group_map[static_cast<size_t>(labels[static_cast<size_t>(p + 1)])];
        int extra = std::max(2, spec.tokens_per_utterance / 2);
        for (int t = 0; t < extra; ++t)
          u.tokens.push_back(2 + C * K + g * K + rng.uniform_int(K));
      }

      u.label = c;
      video.utterances.push_back(std::move(u));
    }
    corpus.videos.push_back(std::move(video));
  }
  corpus.check_invariants();
  return corpus;
}

}  // namespace mmsb
