#pragma once

#include <stdexcept>
#include <string>

namespace mmsb {

// Invalid experiment configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Training produced a non-finite loss (CLI exit code 4).
struct TrainingDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mmsb
