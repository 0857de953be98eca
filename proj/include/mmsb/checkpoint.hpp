#pragma once

#include <map>
#include <string>

#include "mmsb/tensor.hpp"

namespace mmsb {

// Versioned parameter checkpoint: a JSON map name -> (shape, values) with a
// "MMSB-CKPT-1" header string.
void save_checkpoint(const std::map<std::string, Tensor>& tensors,
                     const std::string& path);
std::map<std::string, Tensor> load_checkpoint(const std::string& path);

}  // namespace mmsb
