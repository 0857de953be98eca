#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mmsb/rng.hpp"
#include "mmsb/tensor.hpp"

namespace mmsb {

// One direction's LSTM parameters. Gate layout along the 4H axis is
// [input | forget | candidate | output].
struct LstmParams {
  Tensor Wx;  // [input_dim, 4H]
  Tensor Wh;  // [H, 4H]
  Tensor b;   // [4H]
  int hidden = 0;

  static LstmParams init(int input_dim, int hidden, Rng& rng, double scale = 0.1);
  std::vector<Tensor> parameters() const { return {Wx, Wh, b}; }
};

// Standard LSTM step with forget gate:
//   i,f,o = sigmoid(affine), g = tanh(affine)
//   c = f*c_prev + i*g, h = o*tanh(c)
std::pair<Tensor, Tensor> lstm_cell(const Tensor& x, const Tensor& h_prev,
                                    const Tensor& c_prev, const LstmParams& p);

// Forward pass left-to-right plus an independent pass right-to-left; output
// at position t is concat(h_fwd[t], h_bwd[t]), dimension 2H.
std::vector<Tensor> bilstm_sequence(const std::vector<Tensor>& inputs,
                                    const LstmParams& fwd, const LstmParams& bwd);

}  // namespace mmsb
