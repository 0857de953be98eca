#include "mmsb/lstm.hpp"

#include <stdexcept>

namespace mmsb {

LstmParams LstmParams::init(int input_dim, int hidden, Rng& rng, double scale) {
  LstmParams p;
  p.hidden = hidden;
  auto uniform_tensor = [&](std::vector<int> shape) {
    Tensor t = Tensor::zeros(std::move(shape), /*requires_grad=*/true);
    for (auto& v : t.values()) v = rng.uniform_range(-scale, scale);
    return t;
  };
  p.Wx = uniform_tensor({input_dim, 4 * hidden});
  p.Wh = uniform_tensor({hidden, 4 * hidden});
  p.b = Tensor::zeros({4 * hidden}, /*requires_grad=*/true);
  return p;
}

std::pair<Tensor, Tensor> lstm_cell(const Tensor& x, const Tensor& h_prev,
                                    const Tensor& c_prev, const LstmParams& p) {
  int H = p.hidden;
  if (h_prev.shape()[0] != H || c_prev.shape()[0] != H)
    throw std::invalid_argument("lstm_cell: state dimension mismatch");
  Tensor z = add(add(matvec(x, p.Wx), matvec(h_prev, p.Wh)), p.b);
  Tensor i = sigmoid(slice(z, 0, H));
  Tensor f = sigmoid(slice(z, H, H));
  Tensor g = tanh_op(slice(z, 2 * H, H));
  Tensor o = sigmoid(slice(z, 3 * H, H));
  Tensor c = add(mul(f, c_prev), mul(i, g));
  Tensor h = mul(o, tanh_op(c));
  return {h, c};
}

std::vector<Tensor> bilstm_sequence(const std::vector<Tensor>& inputs,
                                    const LstmParams& fwd, const LstmParams& bwd) {
  if (inputs.empty()) throw std::invalid_argument("bilstm_sequence: empty sequence");
  int n = static_cast<int>(inputs.size());
  int H = fwd.hidden;
  std::vector<Tensor> h_fwd(static_cast<size_t>(n)), h_bwd(static_cast<size_t>(n));
  Tensor h = Tensor::zeros({H});
  Tensor c = Tensor::zeros({H});
  for (int t = 0; t < n; ++t) {
    auto [nh, nc] = lstm_cell(inputs[static_cast<size_t>(t)], h, c, fwd);
    h = nh;
    c = nc;
    h_fwd[static_cast<size_t>(t)] = h;
  }
  h = Tensor::zeros({bwd.hidden});
  c = Tensor::zeros({bwd.hidden});
  for (int t = n - 1; t >= 0; --t) {
    auto [nh, nc] = lstm_cell(inputs[static_cast<size_t>(t)], h, c, bwd);
    h = nh;
    c = nc;
    h_bwd[static_cast<size_t>(t)] = h;
  }
  std::vector<Tensor> out(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t)
    out[static_cast<size_t>(t)] =
        concat({h_fwd[static_cast<size_t>(t)], h_bwd[static_cast<size_t>(t)]});
  return out;
}

}  // namespace mmsb
