#include "mmsb/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace mmsb {

namespace {

int shape_size(const std::vector<int>& shape) {
  int n = 1;
  for (int d : shape) {
    if (d <= 0) throw std::invalid_argument("tensor shape entries must be positive");
    n *= d;
  }
  return n;
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

using detail::Node;

std::shared_ptr<Node> make_node(std::vector<int> shape, std::vector<double> values,
                                std::vector<std::shared_ptr<Node>> parents) {
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->values = std::move(values);
  n->parents = std::move(parents);
  for (const auto& p : n->parents)
    if (p->requires_grad) n->requires_grad = true;
  return n;
}

}  // namespace

Tensor Tensor::zeros(std::vector<int> shape, bool requires_grad) {
  int n = shape_size(shape);
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->values.assign(static_cast<size_t>(n), 0.0);
  node->requires_grad = requires_grad;
  return wrap(node);
}

Tensor Tensor::from_values(std::vector<int> shape, std::vector<double> values,
                           bool requires_grad) {
  if (static_cast<size_t>(shape_size(shape)) != values.size())
    throw std::invalid_argument("values length does not match shape");
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  return wrap(node);
}

Tensor Tensor::scalar(double v, bool requires_grad) {
  return from_values({1}, {v}, requires_grad);
}

double Tensor::item() const {
  if (size() != 1) throw std::logic_error("item() on non-scalar tensor");
  return node_->values[0];
}

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "add");
  int n = a.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = a.values()[i] + b.values()[i];
  auto node = make_node(a.shape(), std::move(out), {a.node(), b.node()});
  node->backprop = [](Node& self) {
    for (int p = 0; p < 2; ++p) {
      Node& par = *self.parents[p];
      if (!par.requires_grad) continue;
      par.ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i) par.grad[i] += self.grad[i];
    }
  };
  return Tensor::wrap(node);
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "mul");
  int n = a.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = a.values()[i] * b.values()[i];
  auto node = make_node(a.shape(), std::move(out), {a.node(), b.node()});
  node->backprop = [](Node& self) {
    Node& pa = *self.parents[0];
    Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      pa.ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i)
        pa.grad[i] += self.grad[i] * pb.values[i];
    }
    if (pb.requires_grad) {
      pb.ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i)
        pb.grad[i] += self.grad[i] * pa.values[i];
    }
  };
  return Tensor::wrap(node);
}

Tensor scale(const Tensor& a, double s) {
  int n = a.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = a.values()[i] * s;
  auto node = make_node(a.shape(), std::move(out), {a.node()});
  node->backprop = [s](Node& self) {
    Node& par = *self.parents[0];
    if (!par.requires_grad) return;
    par.ensure_grad();
    for (size_t i = 0; i < self.grad.size(); ++i) par.grad[i] += self.grad[i] * s;
  };
  return Tensor::wrap(node);
}

Tensor relu(const Tensor& x) {
  int n = x.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = x.values()[i] > 0.0 ? x.values()[i] : 0.0;
  auto node = make_node(x.shape(), std::move(out), {x.node()});
  // subgradient at exactly 0 is 0
  node->backprop = [](Node& self) {
    Node& par = *self.parents[0];
    if (!par.requires_grad) return;
    par.ensure_grad();
    for (size_t i = 0; i < self.grad.size(); ++i)
      if (par.values[i] > 0.0) par.grad[i] += self.grad[i];
  };
  return Tensor::wrap(node);
}

Tensor sigmoid(const Tensor& x) {
  int n = x.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = 1.0 / (1.0 + std::exp(-x.values()[i]));
  auto node = make_node(x.shape(), std::move(out), {x.node()});
  node->backprop = [](Node& self) {
    Node& par = *self.parents[0];
    if (!par.requires_grad) return;
    par.ensure_grad();
    for (size_t i = 0; i < self.grad.size(); ++i) {
      double s = self.values[i];
      par.grad[i] += self.grad[i] * s * (1.0 - s);
    }
  };
  return Tensor::wrap(node);
}

Tensor tanh_op(const Tensor& x) {
  int n = x.size();
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = std::tanh(x.values()[i]);
  auto node = make_node(x.shape(), std::move(out), {x.node()});
  node->backprop = [](Node& self) {
    Node& par = *self.parents[0];
    if (!par.requires_grad) return;
    par.ensure_grad();
    for (size_t i = 0; i < self.grad.size(); ++i) {
      double t = self.values[i];
      par.grad[i] += self.grad[i] * (1.0 - t * t);
    }
  };
  return Tensor::wrap(node);
}

Tensor matvec(const Tensor& x, const Tensor& W) {
  if (x.shape().size() != 1 || W.shape().size() != 2 || W.shape()[0] != x.shape()[0])
    throw std::invalid_argument("matvec: shape mismatch");
  int n = x.shape()[0];
  int m = W.shape()[1];
  std::vector<double> out(static_cast<size_t>(m), 0.0);
  for (int i = 0; i < n; ++i) {
    double xi = x.values()[i];
    const double* wrow = W.values().data() + static_cast<size_t>(i) * m;
    for (int j = 0; j < m; ++j) out[j] += xi * wrow[j];
  }
  auto node = make_node({m}, std::move(out), {x.node(), W.node()});
  node->backprop = [n, m](Node& self) {
    Node& px = *self.parents[0];
    Node& pw = *self.parents[1];
    if (px.requires_grad) {
      px.ensure_grad();
      for (int i = 0; i < n; ++i) {
        const double* wrow = pw.values.data() + static_cast<size_t>(i) * m;
        double acc = 0.0;
        for (int j = 0; j < m; ++j) acc += wrow[j] * self.grad[j];
        px.grad[i] += acc;
      }
    }
    if (pw.requires_grad) {
      pw.ensure_grad();
      for (int i = 0; i < n; ++i) {
        double xi = px.values[i];
        double* grow = pw.grad.data() + static_cast<size_t>(i) * m;
        for (int j = 0; j < m; ++j) grow[j] += xi * self.grad[j];
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor dense(const Tensor& x, const Tensor& W, const Tensor& b) {
  return add(matvec(x, W), b);
}

Tensor concat(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw std::invalid_argument("concat: empty input list");
  int total = 0;
  std::vector<std::shared_ptr<detail::Node>> parents;
  for (const auto& x : xs) {
    if (x.shape().size() != 1) throw std::invalid_argument("concat: 1-D tensors only");
    total += x.shape()[0];
    parents.push_back(x.node());
  }
  std::vector<double> out;
  out.reserve(static_cast<size_t>(total));
  for (const auto& x : xs)
    out.insert(out.end(), x.values().begin(), x.values().end());
  auto node = make_node({total}, std::move(out), std::move(parents));
  node->backprop = [](Node& self) {
    size_t off = 0;
    for (auto& p : self.parents) {
      if (p->requires_grad) {
        p->ensure_grad();
        for (size_t i = 0; i < p->values.size(); ++i)
          p->grad[i] += self.grad[off + i];
      }
      off += p->values.size();
    }
  };
  return Tensor::wrap(node);
}

Tensor slice(const Tensor& x, int offset, int len) {
  if (x.shape().size() != 1) throw std::invalid_argument("slice: 1-D tensors only");
  if (offset < 0 || len <= 0 || offset + len > x.shape()[0])
    throw std::invalid_argument("slice: out of range");
  std::vector<double> out(x.values().begin() + offset,
                          x.values().begin() + offset + len);
  auto node = make_node({len}, std::move(out), {x.node()});
  node->backprop = [offset](Node& self) {
    Node& par = *self.parents[0];
    if (!par.requires_grad) return;
    par.ensure_grad();
    for (size_t i = 0; i < self.grad.size(); ++i)
      par.grad[static_cast<size_t>(offset) + i] += self.grad[i];
  };
  return Tensor::wrap(node);
}

Tensor conv1d(const Tensor& input, const Tensor& filters, const Tensor& bias) {
  if (input.shape().size() != 2 || filters.shape().size() != 3 ||
      bias.shape().size() != 1)
    throw std::invalid_argument("conv1d: bad ranks");
  int L = input.shape()[0], d = input.shape()[1];
  int k = filters.shape()[0], fd = filters.shape()[1], F = filters.shape()[2];
  if (fd != d || bias.shape()[0] != F)
    throw std::invalid_argument("conv1d: shape mismatch");
  if (L < k)
    throw std::invalid_argument("conv1d: SEQUENCE_TOO_SHORT (L < filter width)");
  int T = L - k + 1;
  std::vector<double> out(static_cast<size_t>(T) * F);
  for (int t = 0; t < T; ++t) {
    for (int f = 0; f < F; ++f) {
      double acc = bias.values()[f];
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < d; ++j)
          acc += input.values()[static_cast<size_t>(t + i) * d + j] *
                 filters.values()[(static_cast<size_t>(i) * d + j) * F + f];
      out[static_cast<size_t>(t) * F + f] = acc;
    }
  }
  auto node = make_node({T, F}, std::move(out),
                        {input.node(), filters.node(), bias.node()});
  node->backprop = [L, d, k, F, T](Node& self) {
    Node& pin = *self.parents[0];
    Node& pfl = *self.parents[1];
    Node& pb = *self.parents[2];
    (void)L;
    if (pin.requires_grad) pin.ensure_grad();
    if (pfl.requires_grad) pfl.ensure_grad();
    if (pb.requires_grad) pb.ensure_grad();
    for (int t = 0; t < T; ++t) {
      for (int f = 0; f < F; ++f) {
        double g = self.grad[static_cast<size_t>(t) * F + f];
        if (g == 0.0) continue;
        if (pb.requires_grad) pb.grad[f] += g;
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < d; ++j) {
            size_t in_idx = static_cast<size_t>(t + i) * d + j;
            size_t fl_idx = (static_cast<size_t>(i) * d + j) * F + f;
            if (pin.requires_grad) pin.grad[in_idx] += g * pfl.values[fl_idx];
            if (pfl.requires_grad) pfl.grad[fl_idx] += g * pin.values[in_idx];
          }
        }
      }
    }
  };
  return Tensor::wrap(node);
}

Tensor max_pool_time(const Tensor& input) {
  if (input.shape().size() != 2) throw std::invalid_argument("max_pool_time: 2-D input");
  int T = input.shape()[0], F = input.shape()[1];
  if (T < 1) throw std::invalid_argument("max_pool_time: empty time axis");
  std::vector<double> out(static_cast<size_t>(F));
  auto argmax = std::make_shared<std::vector<int>>(static_cast<size_t>(F), 0);
  for (int f = 0; f < F; ++f) {
    double best = input.values()[f];
    int best_t = 0;
    for (int t = 1; t < T; ++t) {
      double v = input.values()[static_cast<size_t>(t) * F + f];
      if (v > best) {  // strict: ties keep the earliest index
        best = v;
        best_t = t;
      }
    }
    out[f] = best;
    (*argmax)[f] = best_t;
  }
  auto node = make_node({F}, std::move(out), {input.node()});
  node->backprop = [F, argmax](Node& self) {
    Node& par = *self.parents[0];
    if (!par.requires_grad) return;
    par.ensure_grad();
    for (int f = 0; f < F; ++f)
      par.grad[static_cast<size_t>((*argmax)[f]) * F + f] += self.grad[f];
  };
  return Tensor::wrap(node);
}

Tensor embedding_rows(const Tensor& table, const std::vector<int>& ids) {
  if (table.shape().size() != 2) throw std::invalid_argument("embedding_rows: 2-D table");
  int V = table.shape()[0], e = table.shape()[1];
  if (ids.empty()) throw std::invalid_argument("embedding_rows: empty id list");
  for (int id : ids)
    if (id < 0 || id >= V) throw std::out_of_range("embedding_rows: id out of range");
  int L = static_cast<int>(ids.size());
  std::vector<double> out(static_cast<size_t>(L) * e);
  for (int t = 0; t < L; ++t)
    std::copy_n(table.values().data() + static_cast<size_t>(ids[t]) * e, e,
                out.data() + static_cast<size_t>(t) * e);
  auto ids_copy = std::make_shared<std::vector<int>>(ids);
  auto node = make_node({L, e}, std::move(out), {table.node()});
  node->backprop = [e, ids_copy](Node& self) {
    Node& par = *self.parents[0];
    if (!par.requires_grad) return;
    par.ensure_grad();
    for (size_t t = 0; t < ids_copy->size(); ++t) {
      size_t row = static_cast<size_t>((*ids_copy)[t]) * e;
      for (int j = 0; j < e; ++j)
        par.grad[row + j] += self.grad[t * e + j];
    }
  };
  return Tensor::wrap(node);
}

Tensor softmax_cross_entropy(const Tensor& logits, int label) {
  if (logits.shape().size() != 1 || logits.shape()[0] < 2)
    throw std::invalid_argument("softmax_cross_entropy: need >= 2 logits");
  int C = logits.shape()[0];
  if (label < 0 || label >= C)
    throw std::out_of_range("softmax_cross_entropy: label out of range");
  double mx = *std::max_element(logits.values().begin(), logits.values().end());
  double denom = 0.0;
  for (int c = 0; c < C; ++c) denom += std::exp(logits.values()[c] - mx);
  double log_denom = std::log(denom);
  double loss = -(logits.values()[label] - mx - log_denom);
  auto probs = std::make_shared<std::vector<double>>(static_cast<size_t>(C));
  for (int c = 0; c < C; ++c)
    (*probs)[c] = std::exp(logits.values()[c] - mx) / denom;
  auto node = make_node({1}, {loss}, {logits.node()});
  node->backprop = [label, probs](Node& self) {
    Node& par = *self.parents[0];
    if (!par.requires_grad) return;
    par.ensure_grad();
    double g = self.grad[0];
    for (size_t c = 0; c < probs->size(); ++c) {
      double delta = (static_cast<int>(c) == label) ? 1.0 : 0.0;
      par.grad[c] += g * ((*probs)[c] - delta);
    }
  };
  return Tensor::wrap(node);
}

Tensor mean_scalars(const std::vector<Tensor>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_scalars: empty list");
  double acc = 0.0;
  std::vector<std::shared_ptr<detail::Node>> parents;
  for (const auto& x : xs) {
    if (x.size() != 1) throw std::invalid_argument("mean_scalars: scalars only");
    acc += x.values()[0];
    parents.push_back(x.node());
  }
  double inv_n = 1.0 / static_cast<double>(xs.size());
  auto node = make_node({1}, {acc * inv_n}, std::move(parents));
  node->backprop = [inv_n](Node& self) {
    for (auto& p : self.parents) {
      if (!p->requires_grad) continue;
      p->ensure_grad();
      p->grad[0] += self.grad[0] * inv_n;
    }
  };
  return Tensor::wrap(node);
}

std::vector<double> softmax_values(const Tensor& logits) {
  int C = logits.shape()[0];
  double mx = *std::max_element(logits.values().begin(), logits.values().end());
  std::vector<double> p(static_cast<size_t>(C));
  double denom = 0.0;
  for (int c = 0; c < C; ++c) {
    p[c] = std::exp(logits.values()[c] - mx);
    denom += p[c];
  }
  for (int c = 0; c < C; ++c) p[c] /= denom;
  return p;
}

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1)
    throw std::invalid_argument("backward: loss must be a scalar");
  // iterative post-order DFS over parents
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  struct Frame {
    detail::Node* node;
    size_t next_parent;
  };
  std::vector<Frame> stack;
  detail::Node* root = loss.node().get();
  if (visited.insert(root).second) stack.push_back({root, 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next_parent < f.node->parents.size()) {
      detail::Node* p = f.node->parents[f.next_parent++].get();
      if (visited.insert(p).second) stack.push_back({p, 0});
    } else {
      order.push_back(f.node);
      stack.pop_back();
    }
  }
  root->ensure_grad();
  root->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    if (n->backprop && n->requires_grad) {
      n->ensure_grad();
      n->backprop(*n);
    }
  }
}

void zero_grad(std::vector<Tensor>& params) {
  for (auto& p : params) std::fill(p.grad().begin(), p.grad().end(), 0.0);
}

}  // namespace mmsb
