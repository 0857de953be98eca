#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmsb {

// Per-utterance modality feature vectors; absent modalities are empty
// optionals.
struct UtteranceFeatures {
  std::optional<std::vector<double>> text;
  std::optional<std::vector<double>> audio;
  std::optional<std::vector<double>> visual;
};

// Non-empty subset of {T, A, V}. The seven legal values are the rows of the
// modality grid.
struct ModalitySet {
  bool text = false;
  bool audio = false;
  bool visual = false;

  bool valid() const { return text || audio || visual; }
  std::string to_string() const;
  static ModalitySet parse(const std::string& s);  // e.g. "T+A+V", "A"
  bool operator==(const ModalitySet&) const = default;
};

// The canonical report ordering: A, V, T, T+A, T+V, A+V, T+A+V.
const std::vector<ModalitySet>& all_modality_sets();

// Concatenation in canonical T, A, V order; no scaling or normalization.
std::vector<double> fuse(const UtteranceFeatures& features, const ModalitySet& mods);

}  // namespace mmsb
