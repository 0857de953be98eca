#include "mmsb/fusion.hpp"

namespace mmsb {

std::string ModalitySet::to_string() const {
  std::string out;
  auto append = [&](const char* tag) {
    if (!out.empty()) out += " + ";
    out += tag;
  };
  // display order follows the grid tables: T before A before V only inside
  // combinations that include text
  if (text) append("T");
  if (audio) append("A");
  if (visual) append("V");
  return out;
}

ModalitySet ModalitySet::parse(const std::string& s) {
  ModalitySet m;
  for (char c : s) {
    switch (c) {
      case 'T': case 't': m.text = true; break;
      case 'A': case 'a': m.audio = true; break;
      case 'V': case 'v': m.visual = true; break;
      case '+': case ' ': break;
      default:
        throw std::invalid_argument("ModalitySet::parse: bad modality string: " + s);
    }
  }
  if (!m.valid())
    throw std::invalid_argument("ModalitySet::parse: empty modality set: " + s);
  return m;
}

const std::vector<ModalitySet>& all_modality_sets() {
  static const std::vector<ModalitySet> sets = {
      {false, true, false},  // A
      {false, false, true},  // V
      {true, false, false},  // T
      {true, true, false},   // T + A
      {true, false, true},   // T + V
      {false, true, true},   // A + V
      {true, true, true},    // T + A + V
  };
  return sets;
}

std::vector<double> fuse(const UtteranceFeatures& features, const ModalitySet& mods) {
  if (!mods.valid()) throw std::invalid_argument("fuse: empty modality set");
  std::vector<double> out;
  if (mods.text) {
    if (!features.text) throw std::invalid_argument("fuse: text modality absent");
    out.insert(out.end(), features.text->begin(), features.text->end());
  }
  if (mods.audio) {
    if (!features.audio) throw std::invalid_argument("fuse: audio modality absent");
    out.insert(out.end(), features.audio->begin(), features.audio->end());
  }
  if (mods.visual) {
    if (!features.visual) throw std::invalid_argument("fuse: visual modality absent");
    out.insert(out.end(), features.visual->begin(), features.visual->end());
  }
  return out;
}

}  // namespace mmsb
