// Copyright 2026 The SocialCircle Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Minimal dense tensor engine with reverse-mode differentiation.
//
// Tensors are handles onto shared graph nodes. Every op whose inputs require
// gradients records its parents and a backward closure; `Tensor::backward`
// walks the recorded graph in reverse topological order and accumulates
// gradients into every ancestor that requires them.
//
// Ops treat a tensor as a matrix of `rows() x cols()` where `cols()` is the
// size of the last axis. The only broadcast supported is adding a bias row.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace socialcircle {

using Shape = std::vector<std::size_t>;

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline std::string shape_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

inline std::size_t shape_numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> data;
  std::vector<double> grad;
  bool requires_grad = false;
  std::string op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  std::vector<double>& ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
    return grad;
  }
};

}  // namespace detail

class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false) {
    std::vector<double> data(shape_numel(shape), 0.0);
    return from(std::move(shape), std::move(data), requires_grad);
  }

  static Tensor from(Shape shape, std::vector<double> data, bool requires_grad = false) {
    if (shape.empty()) throw ShapeError("tensor: empty shape");
    for (auto s : shape)
      if (s == 0) throw ShapeError("tensor: zero-sized axis in " + shape_string(shape));
    if (shape_numel(shape) != data.size())
      throw ShapeError("tensor: data length " + std::to_string(data.size()) +
                       " does not match shape " + shape_string(shape));
    auto node = std::make_shared<detail::Node>();
    node->shape = std::move(shape);
    node->data = std::move(data);
    node->requires_grad = requires_grad;
    return Tensor(std::move(node));
  }

  static Tensor scalar(double value, bool requires_grad = false) {
    return from({1}, {value}, requires_grad);
  }

  /// Xavier-uniform initialised `fan_in x fan_out` weight matrix.
  template <typename Rng>
  static Tensor xavier(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    std::vector<double> data(fan_in * fan_out);
    for (auto& v : data) v = dist(rng);
    return from({fan_in, fan_out}, std::move(data), true);
  }

  bool defined() const { return static_cast<bool>(node_); }
  const Shape& shape() const { return node().shape; }
  std::size_t numel() const { return node().data.size(); }
  std::size_t cols() const { return node().shape.back(); }
  std::size_t rows() const { return numel() / cols(); }

  std::span<const double> data() const { return node().data; }
  /// Direct write access; used by optimizers and finite-difference probes.
  std::span<double> mutable_data() { return node().data; }
  std::span<const double> grad() const { return node().grad; }
  bool has_grad() const { return node().grad.size() == node().data.size(); }
  void zero_grad() { node().grad.clear(); }

  bool requires_grad() const { return node().requires_grad; }
  const std::string& op() const { return node().op; }

  double at(std::size_t r, std::size_t c) const { return node().data[r * cols() + c]; }
  double item() const {
    if (numel() != 1) throw ShapeError("item: tensor of shape " + shape_string(shape()) + " is not scalar");
    return node().data[0];
  }

  /// A leaf copy of the values with no recorded history.
  Tensor detach(bool requires_grad = false) const {
    return from(shape(), node().data, requires_grad);
  }

  void backward() const;

  // Engine-internal access for op implementations.
  detail::Node& node() const {
    if (!node_) throw std::logic_error("tensor: use of undefined tensor");
    return *node_;
  }
  const std::shared_ptr<detail::Node>& handle() const { return node_; }

  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<detail::Node> node_;
};

/// Disables graph recording on the current thread while alive.
class NoGradGuard {
 public:
  NoGradGuard() : previous_(enabled()) { enabled() = false; }
  ~NoGradGuard() { enabled() = previous_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

  static bool& enabled() {
    thread_local bool value = true;
    return value;
  }

 private:
  bool previous_;
};

namespace detail {

inline Tensor make_result(std::string op, Shape shape, std::vector<double> data,
                          std::vector<Tensor> inputs, std::function<void(Node&)> backward) {
  Tensor out = Tensor::from(std::move(shape), std::move(data));
  Node& n = out.node();
  n.op = std::move(op);
  bool needs = false;
  if (NoGradGuard::enabled())
    for (const auto& in : inputs) needs = needs || in.requires_grad();
  if (needs) {
    n.requires_grad = true;
    for (auto& in : inputs) n.parents.push_back(in.handle());
    n.backward = std::move(backward);
  }
  return out;
}

inline void require_matrix(const char* op, const Tensor& t) {
  if (t.shape().size() != 2) throw ShapeError(std::string(op) + ": expected a matrix, got " + shape_string(t.shape()));
}

[[noreturn]] inline void mismatch(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + shape_string(a.shape()) + " and " +
                   shape_string(b.shape()));
}

}  // namespace detail

inline void Tensor::backward() const {
  if (numel() != 1) throw ShapeError("backward: root must be scalar, got " + shape_string(shape()));
  if (!requires_grad()) return;

  // Iterative post-order DFS gives a topological order of the ancestors.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> seen;
  std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
  seen.insert(node_.get());
  while (!stack.empty()) {
    auto& [current, next] = stack.back();
    if (next < current->parents.size()) {
      detail::Node* parent = current->parents[next++].get();
      if (parent->requires_grad && seen.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(current);
      stack.pop_back();
    }
  }

  node_->ensure_grad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* n = *it;
    if (n->backward) {
      n->ensure_grad();
      n->backward(*n);
    }
  }
}

// ---------------------------------------------------------------------------
// Core ops

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  detail::require_matrix("matmul", a);
  detail::require_matrix("matmul", b);
  const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  if (b.shape()[0] != k) detail::mismatch("matmul", a, b);
  std::vector<double> out(m * n, 0.0);
  auto A = a.data();
  auto B = b.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double av = A[i * k + p];
      if (av == 0.0) continue;
      const double* brow = &B[p * n];
      double* orow = &out[i * n];
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  return detail::make_result("matmul", {m, n}, std::move(out), {a, b}, [m, k, n](detail::Node& self) {
    detail::Node& pa = *self.parents[0];
    detail::Node& pb = *self.parents[1];
    const auto& g = self.grad;
    if (pa.requires_grad) {
      auto& ga = pa.ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double* brow = &pb.data[p * n];
          const double* grow = &g[i * n];
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
          ga[i * k + p] += acc;
        }
    }
    if (pb.requires_grad) {
      auto& gb = pb.ensure_grad();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double av = pa.data[i * k + p];
          if (av == 0.0) continue;
          const double* grow = &g[i * n];
          double* gbrow = &gb[p * n];
          for (std::size_t j = 0; j < n; ++j) gbrow[j] += av * grow[j];
        }
    }
  });
}

inline Tensor transpose(const Tensor& a) {
  detail::require_matrix("transpose", a);
  const std::size_t m = a.shape()[0], n = a.shape()[1];
  std::vector<double> out(m * n);
  auto A = a.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = A[i * n + j];
  return detail::make_result("transpose", {n, m}, std::move(out), {a}, [m, n](detail::Node& self) {
    detail::Node& pa = *self.parents[0];
    auto& ga = pa.ensure_grad();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += self.grad[j * m + i];
  });
}

/// Elementwise sum. `b` may also be a single bias row added to every row of `a`.
inline Tensor add(const Tensor& a, const Tensor& b) {
  const bool same = a.shape() == b.shape();
  const bool bias_row = !same && b.numel() == a.cols() && b.cols() == a.cols();
  if (!same && !bias_row) detail::mismatch("add", a, b);
  const std::size_t cols = a.cols();
  std::vector<double> out(a.data().begin(), a.data().end());
  auto B = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += B[same ? i : i % cols];
  return detail::make_result("add", a.shape(), std::move(out), {a, b}, [same, cols](detail::Node& self) {
    detail::Node& pa = *self.parents[0];
    detail::Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      auto& ga = pa.ensure_grad();
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i];
    }
    if (pb.requires_grad) {
      auto& gb = pb.ensure_grad();
      for (std::size_t i = 0; i < self.grad.size(); ++i) gb[same ? i : i % cols] += self.grad[i];
    }
  });
}

inline Tensor multiply(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) detail::mismatch("multiply", a, b);
  std::vector<double> out(a.numel());
  auto A = a.data();
  auto B = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = A[i] * B[i];
  return detail::make_result("multiply", a.shape(), std::move(out), {a, b}, [](detail::Node& self) {
    detail::Node& pa = *self.parents[0];
    detail::Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      auto& ga = pa.ensure_grad();
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i] * pb.data[i];
    }
    if (pb.requires_grad) {
      auto& gb = pb.ensure_grad();
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += self.grad[i] * pa.data[i];
    }
  });
}

inline Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (auto& v : out) v *= factor;
  return detail::make_result("scale", a.shape(), std::move(out), {a}, [factor](detail::Node& self) {
    auto& ga = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += factor * self.grad[i];
  });
}

/// Concatenation along the last axis; both inputs must have equal row counts.
inline Tensor concat(const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.shape().size() != b.shape().size()) detail::mismatch("concat", a, b);
  const std::size_t rows = a.rows(), ca = a.cols(), cb = b.cols(), c = ca + cb;
  std::vector<double> out(rows * c);
  auto A = a.data();
  auto B = b.data();
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(&A[r * ca], ca, &out[r * c]);
    std::copy_n(&B[r * cb], cb, &out[r * c + ca]);
  }
  Shape shape = a.shape();
  shape.back() = c;
  return detail::make_result("concat", std::move(shape), std::move(out), {a, b}, [rows, ca, cb, c](detail::Node& self) {
    detail::Node& pa = *self.parents[0];
    detail::Node& pb = *self.parents[1];
    if (pa.requires_grad) {
      auto& ga = pa.ensure_grad();
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < ca; ++j) ga[r * ca + j] += self.grad[r * c + j];
    }
    if (pb.requires_grad) {
      auto& gb = pb.ensure_grad();
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < cb; ++j) gb[r * cb + j] += self.grad[r * c + ca + j];
    }
  });
}

inline Tensor relu(const Tensor& a) {
  std::vector<double> out(a.data().begin(), a.data().end());
  for (auto& v : out) v = v > 0.0 ? v : 0.0;
  return detail::make_result("relu", a.shape(), std::move(out), {a}, [](detail::Node& self) {
    detail::Node& pa = *self.parents[0];
    auto& ga = pa.ensure_grad();
    for (std::size_t i = 0; i < ga.size(); ++i)
      if (pa.data[i] > 0.0) ga[i] += self.grad[i];
  });
}

inline Tensor softmax(const Tensor& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<double> out(a.numel());
  auto A = a.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = &A[r * cols];
    double* o = &out[r * cols];
    const double peak = *std::max_element(in, in + cols);
    double total = 0.0;
    for (std::size_t j = 0; j < cols; ++j) total += (o[j] = std::exp(in[j] - peak));
    for (std::size_t j = 0; j < cols; ++j) o[j] /= total;
  }
  return detail::make_result("softmax", a.shape(), std::move(out), {a}, [rows, cols](detail::Node& self) {
    auto& ga = self.parents[0]->ensure_grad();
    for (std::size_t r = 0; r < rows; ++r) {
      const double* y = &self.data[r * cols];
      const double* g = &self.grad[r * cols];
      double dot = 0.0;
      for (std::size_t j = 0; j < cols; ++j) dot += y[j] * g[j];
      for (std::size_t j = 0; j < cols; ++j) ga[r * cols + j] += y[j] * (g[j] - dot);
    }
  });
}

namespace detail {

inline Tensor layer_norm_impl(const Tensor& x, const Tensor* gamma, const Tensor* beta, double eps) {
  const std::size_t rows = x.rows(), cols = x.cols();
  if (gamma && (gamma->numel() != cols || beta->numel() != cols)) mismatch("layer_norm", x, *gamma);
  std::vector<double> xhat(x.numel()), inv_std(rows), out(x.numel());
  auto X = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = &X[r * cols];
    double mean = 0.0;
    for (std::size_t j = 0; j < cols; ++j) mean += in[j];
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t j = 0; j < cols; ++j) var += (in[j] - mean) * (in[j] - mean);
    var /= static_cast<double>(cols);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t i = r * cols + j;
      xhat[i] = (in[j] - mean) * inv_std[r];
      out[i] = gamma ? xhat[i] * gamma->data()[j] + beta->data()[j] : xhat[i];
    }
  }
  std::vector<Tensor> inputs{x};
  if (gamma) {
    inputs.push_back(*gamma);
    inputs.push_back(*beta);
  }
  const bool affine = gamma != nullptr;
  return make_result("layer_norm", x.shape(), std::move(out), std::move(inputs),
                     [rows, cols, affine, xhat = std::move(xhat), inv_std = std::move(inv_std)](Node& self) {
                       Node& px = *self.parents[0];
                       const double* gam = affine ? self.parents[1]->data.data() : nullptr;
                       if (affine) {
                         Node& pg = *self.parents[1];
                         Node& pb = *self.parents[2];
                         if (pg.requires_grad) {
                           auto& gg = pg.ensure_grad();
                           for (std::size_t i = 0; i < self.grad.size(); ++i) gg[i % cols] += self.grad[i] * xhat[i];
                         }
                         if (pb.requires_grad) {
                           auto& gb = pb.ensure_grad();
                           for (std::size_t i = 0; i < self.grad.size(); ++i) gb[i % cols] += self.grad[i];
                         }
                       }
                       if (!px.requires_grad) return;
                       auto& gx = px.ensure_grad();
                       const double n = static_cast<double>(cols);
                       std::vector<double> dxhat(cols);
                       for (std::size_t r = 0; r < rows; ++r) {
                         double mean_d = 0.0, mean_dx = 0.0;
                         for (std::size_t j = 0; j < cols; ++j) {
                           const std::size_t i = r * cols + j;
                           dxhat[j] = self.grad[i] * (gam ? gam[j] : 1.0);
                           mean_d += dxhat[j];
                           mean_dx += dxhat[j] * xhat[i];
                         }
                         mean_d /= n;
                         mean_dx /= n;
                         for (std::size_t j = 0; j < cols; ++j) {
                           const std::size_t i = r * cols + j;
                           gx[i] += inv_std[r] * (dxhat[j] - mean_d - xhat[i] * mean_dx);
                         }
                       }
                     });
}

}  // namespace detail

inline constexpr double kLayerNormEps = 1e-6;

/// Per-row standardisation over the last axis.
inline Tensor layer_norm(const Tensor& x, double eps = kLayerNormEps) {
  return detail::layer_norm_impl(x, nullptr, nullptr, eps);
}

/// Per-row standardisation followed by a learned gain and bias row.
inline Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps = kLayerNormEps) {
  return detail::layer_norm_impl(x, &gamma, &beta, eps);
}

/// Mean of squared differences over every element.
inline Tensor mean_squared_error(const Tensor& pred, const Tensor& target) {
  if (pred.shape() != target.shape()) detail::mismatch("mean_squared_error", pred, target);
  const double n = static_cast<double>(pred.numel());
  auto P = pred.data();
  auto T = target.data();
  double total = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) total += (P[i] - T[i]) * (P[i] - T[i]);
  return detail::make_result("mean_squared_error", {1}, {total / n}, {pred, target}, [n](detail::Node& self) {
    detail::Node& pp = *self.parents[0];
    detail::Node& pt = *self.parents[1];
    const double g = self.grad[0] * 2.0 / n;
    if (pp.requires_grad) {
      auto& gp = pp.ensure_grad();
      for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += g * (pp.data[i] - pt.data[i]);
    }
    if (pt.requires_grad) {
      auto& gt = pt.ensure_grad();
      for (std::size_t i = 0; i < gt.size(); ++i) gt[i] -= g * (pp.data[i] - pt.data[i]);
    }
  });
}

inline Tensor reshape(const Tensor& a, Shape shape) {
  if (shape_numel(shape) != a.numel())
    throw ShapeError("reshape: cannot view " + shape_string(a.shape()) + " as " + shape_string(shape));
  std::vector<double> out(a.data().begin(), a.data().end());
  return detail::make_result("reshape", std::move(shape), std::move(out), {a}, [](detail::Node& self) {
    auto& ga = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i];
  });
}

/// Appends zero rows until the matrix has `rows` rows.
inline Tensor pad_rows(const Tensor& a, std::size_t rows) {
  detail::require_matrix("pad_rows", a);
  if (rows < a.rows())
    throw ShapeError("pad_rows: cannot pad " + shape_string(a.shape()) + " to " + std::to_string(rows) + " rows");
  std::vector<double> out(rows * a.cols(), 0.0);
  std::copy(a.data().begin(), a.data().end(), out.begin());
  return detail::make_result("pad_rows", {rows, a.cols()}, std::move(out), {a}, [](detail::Node& self) {
    auto& ga = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += self.grad[i];
  });
}

/// Rows [begin, end) of a matrix.
inline Tensor slice_rows(const Tensor& a, std::size_t begin, std::size_t end) {
  detail::require_matrix("slice_rows", a);
  if (begin >= end || end > a.rows())
    throw ShapeError("slice_rows: range [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") out of bounds for " + shape_string(a.shape()));
  const std::size_t cols = a.cols();
  auto A = a.data();
  std::vector<double> out(A.begin() + begin * cols, A.begin() + end * cols);
  return detail::make_result("slice_rows", {end - begin, cols}, std::move(out), {a}, [begin, cols](detail::Node& self) {
    auto& ga = self.parents[0]->ensure_grad();
    for (std::size_t i = 0; i < self.grad.size(); ++i) ga[begin * cols + i] += self.grad[i];
  });
}

/// Columns [begin, end) of a matrix.
inline Tensor slice_cols(const Tensor& a, std::size_t begin, std::size_t end) {
  detail::require_matrix("slice_cols", a);
  if (begin >= end || end > a.cols())
    throw ShapeError("slice_cols: range [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") out of bounds for " + shape_string(a.shape()));
  const std::size_t rows = a.rows(), cols = a.cols(), w = end - begin;
  auto A = a.data();
  std::vector<double> out(rows * w);
  for (std::size_t r = 0; r < rows; ++r) std::copy_n(&A[r * cols + begin], w, &out[r * w]);
  return detail::make_result("slice_cols", {rows, w}, std::move(out), {a}, [rows, cols, begin, w](detail::Node& self) {
    auto& ga = self.parents[0]->ensure_grad();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < w; ++j) ga[r * cols + begin + j] += self.grad[r * w + j];
  });
}

// ---------------------------------------------------------------------------
// Finite-difference verification

/// Largest elementwise relative error between reverse-mode gradients of the
/// scalar function `f` with respect to `inputs` and central differences with
/// step `eps`. `f` must rebuild its graph from the inputs on every call.
inline double grad_check(const std::function<Tensor()>& f, std::vector<Tensor> inputs, double eps = 1e-5) {
  for (auto& in : inputs) in.zero_grad();
  f().backward();
  double worst = 0.0;
  for (auto& in : inputs) {
    std::vector<double> analytic(in.numel(), 0.0);
    if (in.has_grad()) std::copy(in.grad().begin(), in.grad().end(), analytic.begin());
    auto values = in.mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + eps;
      const double up = f().item();
      values[i] = saved - eps;
      const double down = f().item();
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
      worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
  }
  return worst;
}

inline double grad_check(const std::function<Tensor(const Tensor&)>& f, const Tensor& x, double eps = 1e-5) {
  return grad_check([&] { return f(x); }, {x}, eps);
}

}  // namespace socialcircle
