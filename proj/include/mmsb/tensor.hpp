#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmsb {

namespace detail {

struct Node {
  std::vector<int> shape;
  std::vector<double> values;
  std::vector<double> grad;  // allocated on first use, same length as values
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  // Pushes this node's grad into its parents' grads. Parents are kept
  // alive through the parents vector; `this` is live while invoked.
  std::function<void(Node&)> backprop;

  void ensure_grad() {
    if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
  }
};

}  // namespace detail

// Dense n-dimensional double tensor participating in reverse-mode
// differentiation. Copying a Tensor copies the handle, not the data.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(std::vector<int> shape, bool requires_grad = false);
  static Tensor from_values(std::vector<int> shape, std::vector<double> values,
                            bool requires_grad = false);
  static Tensor scalar(double v, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const std::vector<int>& shape() const { return node_->shape; }
  int size() const { return static_cast<int>(node_->values.size()); }
  std::vector<double>& values() { return node_->values; }
  const std::vector<double>& values() const { return node_->values; }
  std::vector<double>& grad() {
    node_->ensure_grad();
    return node_->grad;
  }
  bool requires_grad() const { return node_->requires_grad; }
  double item() const;

  std::shared_ptr<detail::Node> node() const { return node_; }
  static Tensor wrap(std::shared_ptr<detail::Node> n) {
    Tensor t;
    t.node_ = std::move(n);
    return t;
  }

 private:
  std::shared_ptr<detail::Node> node_;
};

// Elementwise, shapes must match.
Tensor add(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
Tensor relu(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor tanh_op(const Tensor& x);

// x: [n], W: [n, m] -> [m]
Tensor matvec(const Tensor& x, const Tensor& W);
// dense(x, W, b) = matvec(x, W) + b
Tensor dense(const Tensor& x, const Tensor& W, const Tensor& b);

// 1-D concatenation / slicing.
Tensor concat(const std::vector<Tensor>& xs);
Tensor slice(const Tensor& x, int offset, int len);

// Valid (no-padding) 1-D convolution over time.
// input: [L, d], filters: [k, d, F], bias: [F] -> [L-k+1, F]
Tensor conv1d(const Tensor& input, const Tensor& filters, const Tensor& bias);

// input: [T, F] -> [F]; gradient routed to the earliest argmax on ties.
Tensor max_pool_time(const Tensor& input);

// table: [V, e], ids in [0, V) -> [L, e]
Tensor embedding_rows(const Tensor& table, const std::vector<int>& ids);

// logits: [C] -> scalar loss; gradient is softmax - onehot.
Tensor softmax_cross_entropy(const Tensor& logits, int label);

// Mean of scalar losses, fixed summation order.
Tensor mean_scalars(const std::vector<Tensor>& xs);

// Inference-only softmax of a logits vector.
std::vector<double> softmax_values(const Tensor& logits);

// Reverse accumulation from a scalar loss; each reachable node's backprop
// runs exactly once.
void backward(const Tensor& loss);
void zero_grad(std::vector<Tensor>& params);

}  // namespace mmsb
