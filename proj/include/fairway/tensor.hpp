// Copyright 2026 The Fairway Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRWAY__TENSOR_HPP_
#define FAIRWAY__TENSOR_HPP_

#include "fairway/common.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <unordered_set>
#include <vector>

namespace fairway::ad
{

using Shape = std::vector<int>;

inline std::size_t shape_size(const Shape & s)
{
  std::size_t n = 1;
  for (int d : s) n *= static_cast<std::size_t>(d);
  return n;
}

/// One record of the reverse-mode graph. Values are float64 and contiguous in
/// row-major order; gradients are allocated lazily during backward.
struct Node
{
  Shape shape;
  std::vector<double> val;
  std::vector<double> grad;
  bool is_param = false;    // optimizer leaf
  bool needs_grad = false;  // reachable from a leaf that wants gradients
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void()> backprop;

  std::size_t size() const { return val.size(); }

  void ensure_grad()
  {
    if (grad.size() != val.size()) grad.assign(val.size(), 0.0);
  }
};

/// Disables graph construction while alive (inference mode).
class NoGradGuard
{
public:
  NoGradGuard() : prev_(enabled()) { enabled() = false; }
  ~NoGradGuard() { enabled() = prev_; }
  static bool & enabled()
  {
    thread_local bool on = true;
    return on;
  }

private:
  bool prev_;
};

/// Handle to a graph node with value semantics on the handle itself.
class Tensor
{
public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> n) : n_(std::move(n)) {}

  static Tensor constant(Shape shape, std::vector<double> data)
  {
    auto n = std::make_shared<Node>();
    if (data.size() != shape_size(shape)) throw Error("tensor data does not match shape");
    n->shape = std::move(shape);
    n->val = std::move(data);
    return Tensor(std::move(n));
  }

  static Tensor zeros(Shape shape)
  {
    std::vector<double> d(shape_size(shape), 0.0);
    return constant(std::move(shape), std::move(d));
  }

  static Tensor scalar(double v) { return constant({1}, {v}); }

  static Tensor param(Shape shape, std::vector<double> data)
  {
    Tensor t = constant(std::move(shape), std::move(data));
    t.n_->is_param = true;
    t.n_->needs_grad = true;
    return t;
  }

  bool defined() const { return static_cast<bool>(n_); }
  const Shape & shape() const { return n_->shape; }
  int dim(int i) const { return n_->shape[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return n_->size(); }
  bool needs_grad() const { return n_->needs_grad; }

  std::vector<double> & values() { return n_->val; }
  const std::vector<double> & values() const { return n_->val; }
  std::vector<double> & grad()
  {
    n_->ensure_grad();
    return n_->grad;
  }

  double item() const
  {
    if (n_->size() != 1) throw Error("item() on non-scalar tensor");
    return n_->val[0];
  }

  double operator[](std::size_t i) const { return n_->val[i]; }

  std::shared_ptr<Node> node() const { return n_; }

private:
  std::shared_ptr<Node> n_;
};

namespace detail
{

inline bool grad_wanted(std::initializer_list<const Tensor *> inputs)
{
  if (!NoGradGuard::enabled()) return false;
  for (const auto * t : inputs)
    if (t->needs_grad()) return true;
  return false;
}

inline Tensor make_result(
  Shape shape, std::vector<double> val, std::initializer_list<const Tensor *> inputs,
  std::function<void()> backprop)
{
  auto n = std::make_shared<Node>();
  n->shape = std::move(shape);
  n->val = std::move(val);
  if (grad_wanted(inputs)) {
    n->needs_grad = true;
    for (const auto * t : inputs) n->parents.push_back(t->node());
    n->backprop = std::move(backprop);
  }
  return Tensor(std::move(n));
}

}  // namespace detail

/// Reverse pass from a scalar loss. Gradients accumulate into each reachable
/// node's grad buffer (parameters keep theirs across calls until zeroed).
inline void backward(const Tensor & loss)
{
  if (loss.size() != 1) throw Error("backward() needs a scalar loss");
  // Iterative post-order topological sort.
  std::vector<Node *> order;
  std::unordered_set<Node *> seen;
  std::vector<std::pair<Node *, std::size_t>> stack{{loss.node().get(), 0}};
  while (!stack.empty()) {
    auto & [node, idx] = stack.back();
    if (idx == 0 && seen.count(node)) {
      stack.pop_back();
      continue;
    }
    if (idx < node->parents.size()) {
      Node * next = node->parents[idx++].get();
      if (!seen.count(next)) stack.push_back({next, 0});
    } else {
      seen.insert(node);
      order.push_back(node);
      stack.pop_back();
    }
  }
  loss.node()->ensure_grad();
  loss.node()->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backprop) (*it)->backprop();
}

inline void zero_grad(std::span<Tensor> params)
{
  for (auto & p : params) std::fill(p.grad().begin(), p.grad().end(), 0.0);
}

// ---------------------------------------------------------------------------
// Elementwise and scalar ops
// ---------------------------------------------------------------------------

inline void check_same_shape(const Tensor & a, const Tensor & b, const char * op)
{
  if (a.shape() != b.shape()) throw Error(std::string(op) + ": shape mismatch");
}

inline Tensor add(const Tensor & a, const Tensor & b)
{
  check_same_shape(a, b, "add");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  Node * pa = a.node().get();
  Node * pb = b.node().get();
  auto res = detail::make_result(a.shape(), std::move(v), {&a, &b}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pb, pr] {
      if (pa->needs_grad) {
        pa->ensure_grad();
        for (std::size_t i = 0; i < pr->grad.size(); ++i) pa->grad[i] += pr->grad[i];
      }
      if (pb->needs_grad) {
        pb->ensure_grad();
        for (std::size_t i = 0; i < pr->grad.size(); ++i) pb->grad[i] += pr->grad[i];
      }
    };
  }
  return res;
}

inline Tensor sub(const Tensor & a, const Tensor & b)
{
  check_same_shape(a, b, "sub");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  Node * pa = a.node().get();
  Node * pb = b.node().get();
  auto res = detail::make_result(a.shape(), std::move(v), {&a, &b}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pb, pr] {
      if (pa->needs_grad) {
        pa->ensure_grad();
        for (std::size_t i = 0; i < pr->grad.size(); ++i) pa->grad[i] += pr->grad[i];
      }
      if (pb->needs_grad) {
        pb->ensure_grad();
        for (std::size_t i = 0; i < pr->grad.size(); ++i) pb->grad[i] -= pr->grad[i];
      }
    };
  }
  return res;
}

inline Tensor mul(const Tensor & a, const Tensor & b)
{
  check_same_shape(a, b, "mul");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  Node * pa = a.node().get();
  Node * pb = b.node().get();
  auto res = detail::make_result(a.shape(), std::move(v), {&a, &b}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pb, pr] {
      if (pa->needs_grad) {
        pa->ensure_grad();
        for (std::size_t i = 0; i < pr->grad.size(); ++i) pa->grad[i] += pr->grad[i] * pb->val[i];
      }
      if (pb->needs_grad) {
        pb->ensure_grad();
        for (std::size_t i = 0; i < pr->grad.size(); ++i) pb->grad[i] += pr->grad[i] * pa->val[i];
      }
    };
  }
  return res;
}

inline Tensor scale(const Tensor & a, double c)
{
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * c;
  Node * pa = a.node().get();
  auto res = detail::make_result(a.shape(), std::move(v), {&a}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pr, c] {
      pa->ensure_grad();
      for (std::size_t i = 0; i < pr->grad.size(); ++i) pa->grad[i] += pr->grad[i] * c;
    };
  }
  return res;
}

inline Tensor exp(const Tensor & a)
{
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(a[i]);
  Node * pa = a.node().get();
  auto res = detail::make_result(a.shape(), std::move(v), {&a}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pr] {
      pa->ensure_grad();
      for (std::size_t i = 0; i < pr->grad.size(); ++i) pa->grad[i] += pr->grad[i] * pr->val[i];
    };
  }
  return res;
}

inline Tensor gelu(const Tensor & a)
{
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  constexpr double inv_sqrt2pi = 0.3989422804014326779;
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = 0.5 * a[i] * (1.0 + std::erf(a[i] * inv_sqrt2));
  Node * pa = a.node().get();
  auto res = detail::make_result(a.shape(), std::move(v), {&a}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pr] {
      pa->ensure_grad();
      for (std::size_t i = 0; i < pr->grad.size(); ++i) {
        const double x = pa->val[i];
        const double cdf = 0.5 * (1.0 + std::erf(x * inv_sqrt2));
        const double pdf = inv_sqrt2pi * std::exp(-0.5 * x * x);
        pa->grad[i] += pr->grad[i] * (cdf + x * pdf);
      }
    };
  }
  return res;
}

/// Multiplies every element of a by the scalar tensor s (shape {1}).
inline Tensor smul(const Tensor & s, const Tensor & a)
{
  if (s.size() != 1) throw Error("smul: scalar operand must have size 1");
  const double sv = s[0];
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * sv;
  Node * ps = s.node().get();
  Node * pa = a.node().get();
  auto res = detail::make_result(a.shape(), std::move(v), {&s, &a}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [ps, pa, pr, sv] {
      if (ps->needs_grad) {
        ps->ensure_grad();
        double acc = 0.0;
        for (std::size_t i = 0; i < pr->grad.size(); ++i) acc += pr->grad[i] * pa->val[i];
        ps->grad[0] += acc;
      }
      if (pa->needs_grad) {
        pa->ensure_grad();
        for (std::size_t i = 0; i < pr->grad.size(); ++i) pa->grad[i] += pr->grad[i] * sv;
      }
    };
  }
  return res;
}

inline Tensor sum(const Tensor & a)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i];
  Node * pa = a.node().get();
  auto res = detail::make_result({1}, {acc}, {&a}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pr] {
      pa->ensure_grad();
      const double g = pr->grad[0];
      for (std::size_t i = 0; i < pa->grad.size(); ++i) pa->grad[i] += g;
    };
  }
  return res;
}

inline Tensor mean(const Tensor & a)
{
  return scale(sum(a), 1.0 / static_cast<double>(a.size()));
}

// ---------------------------------------------------------------------------
// Matrix ops (2D row-major)
// ---------------------------------------------------------------------------

inline void check_2d(const Tensor & t, const char * op)
{
  if (t.shape().size() != 2) throw Error(std::string(op) + ": tensor must be 2D");
}

/// C = A * B for A (m,k), B (k,n).
inline Tensor matmul(const Tensor & a, const Tensor & b)
{
  check_2d(a, "matmul");
  check_2d(b, "matmul");
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) throw Error("matmul: inner dimensions disagree");
  std::vector<double> v(static_cast<std::size_t>(m) * n, 0.0);
  const auto & av = a.values();
  const auto & bv = b.values();
  for (int i = 0; i < m; ++i)
    for (int p = 0; p < k; ++p) {
      const double x = av[i * k + p];
      if (x == 0.0) continue;
      for (int j = 0; j < n; ++j) v[i * n + j] += x * bv[p * n + j];
    }
  Node * pa = a.node().get();
  Node * pb = b.node().get();
  auto res = detail::make_result({m, n}, std::move(v), {&a, &b}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pb, pr, m, k, n] {
      if (pa->needs_grad) {
        pa->ensure_grad();  // dA += G * B^T
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) {
            const double g = pr->grad[i * n + j];
            if (g == 0.0) continue;
            for (int p = 0; p < k; ++p) pa->grad[i * k + p] += g * pb->val[p * n + j];
          }
      }
      if (pb->needs_grad) {
        pb->ensure_grad();  // dB += A^T * G
        for (int i = 0; i < m; ++i)
          for (int p = 0; p < k; ++p) {
            const double x = pa->val[i * k + p];
            if (x == 0.0) continue;
            for (int j = 0; j < n; ++j) pb->grad[p * n + j] += x * pr->grad[i * n + j];
          }
      }
    };
  }
  return res;
}

/// C = A * B^T for A (m,k), B (n,k).
inline Tensor matmul_nt(const Tensor & a, const Tensor & b)
{
  check_2d(a, "matmul_nt");
  check_2d(b, "matmul_nt");
  const int m = a.dim(0), k = a.dim(1), n = b.dim(0);
  if (b.dim(1) != k) throw Error("matmul_nt: inner dimensions disagree");
  std::vector<double> v(static_cast<std::size_t>(m) * n, 0.0);
  const auto & av = a.values();
  const auto & bv = b.values();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int p = 0; p < k; ++p) acc += av[i * k + p] * bv[j * k + p];
      v[i * n + j] = acc;
    }
  Node * pa = a.node().get();
  Node * pb = b.node().get();
  auto res = detail::make_result({m, n}, std::move(v), {&a, &b}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pa, pb, pr, m, k, n] {
      if (pa->needs_grad) {
        pa->ensure_grad();  // dA += G * B
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) {
            const double g = pr->grad[i * n + j];
            if (g == 0.0) continue;
            for (int p = 0; p < k; ++p) pa->grad[i * k + p] += g * pb->val[j * k + p];
          }
      }
      if (pb->needs_grad) {
        pb->ensure_grad();  // dB += G^T * A
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) {
            const double g = pr->grad[i * n + j];
            if (g == 0.0) continue;
            for (int p = 0; p < k; ++p) pb->grad[j * k + p] += g * pa->val[i * k + p];
          }
      }
    };
  }
  return res;
}

/// Adds a row vector b (n) to every row of x (m,n).
inline Tensor add_rowvec(const Tensor & x, const Tensor & b)
{
  check_2d(x, "add_rowvec");
  const int m = x.dim(0), n = x.dim(1);
  if (static_cast<int>(b.size()) != n) throw Error("add_rowvec: vector length mismatch");
  std::vector<double> v(x.size());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) v[i * n + j] = x[i * n + j] + b[j];
  Node * px = x.node().get();
  Node * pb = b.node().get();
  auto res = detail::make_result(x.shape(), std::move(v), {&x, &b}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [px, pb, pr, m, n] {
      if (px->needs_grad) {
        px->ensure_grad();
        for (std::size_t i = 0; i < pr->grad.size(); ++i) px->grad[i] += pr->grad[i];
      }
      if (pb->needs_grad) {
        pb->ensure_grad();
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) pb->grad[j] += pr->grad[i * n + j];
      }
    };
  }
  return res;
}

/// Gathers rows of table (r, d) at the given indices; repeated indices
/// accumulate their gradients.
inline Tensor gather_rows(const Tensor & table, const std::vector<int> & idx)
{
  check_2d(table, "gather_rows");
  const int r = table.dim(0), d = table.dim(1);
  for (int i : idx)
    if (i < 0 || i >= r) throw IndexOutOfRange("gather_rows: index out of range");
  std::vector<double> v(idx.size() * static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy_n(table.values().begin() + idx[i] * d, d, v.begin() + i * d);
  Node * pt = table.node().get();
  auto res =
    detail::make_result({static_cast<int>(idx.size()), d}, std::move(v), {&table}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pt, pr, idx, d] {
      pt->ensure_grad();
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (int j = 0; j < d; ++j) pt->grad[idx[i] * d + j] += pr->grad[i * d + j];
    };
  }
  return res;
}

inline Tensor slice_cols(const Tensor & x, int c0, int cn)
{
  check_2d(x, "slice_cols");
  const int m = x.dim(0), n = x.dim(1);
  if (c0 < 0 || c0 + cn > n) throw IndexOutOfRange("slice_cols: out of range");
  std::vector<double> v(static_cast<std::size_t>(m) * cn);
  for (int i = 0; i < m; ++i)
    std::copy_n(x.values().begin() + i * n + c0, cn, v.begin() + i * cn);
  Node * px = x.node().get();
  auto res = detail::make_result({m, cn}, std::move(v), {&x}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [px, pr, m, n, c0, cn] {
      px->ensure_grad();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < cn; ++j) px->grad[i * n + c0 + j] += pr->grad[i * cn + j];
    };
  }
  return res;
}

inline Tensor slice_rows(const Tensor & x, int r0, int rn)
{
  check_2d(x, "slice_rows");
  const int m = x.dim(0), n = x.dim(1);
  if (r0 < 0 || r0 + rn > m) throw IndexOutOfRange("slice_rows: out of range");
  std::vector<double> v(
    x.values().begin() + static_cast<std::size_t>(r0) * n,
    x.values().begin() + static_cast<std::size_t>(r0 + rn) * n);
  Node * px = x.node().get();
  auto res = detail::make_result({rn, n}, std::move(v), {&x}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [px, pr, n, r0, rn] {
      px->ensure_grad();
      for (int i = 0; i < rn; ++i)
        for (int j = 0; j < n; ++j) px->grad[(r0 + i) * n + j] += pr->grad[i * n + j];
    };
  }
  return res;
}

inline Tensor concat_cols(const std::vector<Tensor> & parts)
{
  if (parts.empty()) throw Error("concat_cols: empty input");
  const int m = parts[0].dim(0);
  int n = 0;
  for (const auto & p : parts) {
    check_2d(p, "concat_cols");
    if (p.dim(0) != m) throw Error("concat_cols: row counts disagree");
    n += p.dim(1);
  }
  std::vector<double> v(static_cast<std::size_t>(m) * n);
  int off = 0;
  for (const auto & p : parts) {
    const int pn = p.dim(1);
    for (int i = 0; i < m; ++i)
      std::copy_n(p.values().begin() + i * pn, pn, v.begin() + i * n + off);
    off += pn;
  }
  auto node = std::make_shared<Node>();
  node->shape = {m, n};
  node->val = std::move(v);
  bool wants = NoGradGuard::enabled() &&
               std::any_of(parts.begin(), parts.end(), [](const auto & p) {
                 return p.needs_grad();
               });
  if (wants) {
    node->needs_grad = true;
    for (const auto & p : parts) node->parents.push_back(p.node());
    Node * pr = node.get();
    std::vector<int> widths;
    for (const auto & p : parts) widths.push_back(p.dim(1));
    node->backprop = [pr, widths, m, n] {
      int off = 0;
      for (std::size_t k = 0; k < widths.size(); ++k) {
        Node * p = pr->parents[k].get();
        if (p->needs_grad) {
          p->ensure_grad();
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < widths[k]; ++j)
              p->grad[i * widths[k] + j] += pr->grad[i * n + off + j];
        }
        off += widths[k];
      }
    };
  }
  return Tensor(std::move(node));
}

inline Tensor concat_rows(const std::vector<Tensor> & parts)
{
  if (parts.empty()) throw Error("concat_rows: empty input");
  const int n = parts[0].dim(1);
  int m = 0;
  for (const auto & p : parts) {
    check_2d(p, "concat_rows");
    if (p.dim(1) != n) throw Error("concat_rows: column counts disagree");
    m += p.dim(0);
  }
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(m) * n);
  for (const auto & p : parts) v.insert(v.end(), p.values().begin(), p.values().end());
  auto node = std::make_shared<Node>();
  node->shape = {m, n};
  node->val = std::move(v);
  bool wants = NoGradGuard::enabled() &&
               std::any_of(parts.begin(), parts.end(), [](const auto & p) {
                 return p.needs_grad();
               });
  if (wants) {
    node->needs_grad = true;
    for (const auto & p : parts) node->parents.push_back(p.node());
    Node * pr = node.get();
    std::vector<int> rows;
    for (const auto & p : parts) rows.push_back(p.dim(0));
    node->backprop = [pr, rows, n] {
      int off = 0;
      for (std::size_t k = 0; k < rows.size(); ++k) {
        Node * p = pr->parents[k].get();
        if (p->needs_grad) {
          p->ensure_grad();
          for (int i = 0; i < rows[k]; ++i)
            for (int j = 0; j < n; ++j) p->grad[i * n + j] += pr->grad[(off + i) * n + j];
        }
        off += rows[k];
      }
    };
  }
  return Tensor(std::move(node));
}

/// Shape change over the same contiguous data.
inline Tensor reshape(const Tensor & x, Shape shape)
{
  if (shape_size(shape) != x.size()) throw Error("reshape: element count mismatch");
  std::vector<double> v = x.values();
  Node * px = x.node().get();
  auto res = detail::make_result(std::move(shape), std::move(v), {&x}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [px, pr] {
      px->ensure_grad();
      for (std::size_t i = 0; i < pr->grad.size(); ++i) px->grad[i] += pr->grad[i];
    };
  }
  return res;
}

// ---------------------------------------------------------------------------
// Normalization, softmax, losses
// ---------------------------------------------------------------------------

/// Row-wise layer normalization with learned gain and bias.
inline Tensor layer_norm(
  const Tensor & x, const Tensor & gain, const Tensor & bias, double eps = 1e-5)
{
  check_2d(x, "layer_norm");
  const int m = x.dim(0), n = x.dim(1);
  if (static_cast<int>(gain.size()) != n || static_cast<int>(bias.size()) != n)
    throw Error("layer_norm: gain/bias length mismatch");
  std::vector<double> v(x.size());
  std::vector<double> mu(m), inv_sd(m);
  for (int i = 0; i < m; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += x[i * n + j];
    mu[i] = s / n;
    double var = 0.0;
    for (int j = 0; j < n; ++j) {
      const double d = x[i * n + j] - mu[i];
      var += d * d;
    }
    var /= n;
    inv_sd[i] = 1.0 / std::sqrt(var + eps);
    for (int j = 0; j < n; ++j)
      v[i * n + j] = (x[i * n + j] - mu[i]) * inv_sd[i] * gain[j] + bias[j];
  }
  Node * px = x.node().get();
  Node * pg = gain.node().get();
  Node * pb = bias.node().get();
  auto res = detail::make_result(x.shape(), std::move(v), {&x, &gain, &bias}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [px, pg, pb, pr, m, n, mu, inv_sd] {
      for (int i = 0; i < m; ++i) {
        // xhat and the per-row reductions.
        double sum_gy = 0.0, sum_gy_xhat = 0.0;
        for (int j = 0; j < n; ++j) {
          const double xhat = (px->val[i * n + j] - mu[i]) * inv_sd[i];
          const double gy = pr->grad[i * n + j] * pg->val[j];
          sum_gy += gy;
          sum_gy_xhat += gy * xhat;
        }
        if (px->needs_grad) {
          px->ensure_grad();
          for (int j = 0; j < n; ++j) {
            const double xhat = (px->val[i * n + j] - mu[i]) * inv_sd[i];
            const double gy = pr->grad[i * n + j] * pg->val[j];
            px->grad[i * n + j] +=
              inv_sd[i] * (gy - sum_gy / n - xhat * sum_gy_xhat / n);
          }
        }
        if (pg->needs_grad) {
          pg->ensure_grad();
          for (int j = 0; j < n; ++j) {
            const double xhat = (px->val[i * n + j] - mu[i]) * inv_sd[i];
            pg->grad[j] += pr->grad[i * n + j] * xhat;
          }
        }
        if (pb->needs_grad) {
          pb->ensure_grad();
          for (int j = 0; j < n; ++j) pb->grad[j] += pr->grad[i * n + j];
        }
      }
    };
  }
  return res;
}

/// Row-wise softmax with an optional boolean mask (true = attend). Masked
/// entries get -inf logits, so they are exactly zero afterwards. Throws
/// DegenerateAttention when a row has no unmasked entry.
inline Tensor softmax_rows(const Tensor & x, const std::vector<std::uint8_t> & mask = {})
{
  check_2d(x, "softmax_rows");
  const int m = x.dim(0), n = x.dim(1);
  const bool masked = !mask.empty();
  if (masked && static_cast<int>(mask.size()) != m * n)
    throw Error("softmax_rows: mask size mismatch");
  std::vector<double> v(x.size(), 0.0);
  for (int i = 0; i < m; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
      if (!masked || mask[i * n + j]) mx = std::max(mx, x[i * n + j]);
    if (!std::isfinite(mx)) throw DegenerateAttention("softmax row has no unmasked entry");
    double z = 0.0;
    for (int j = 0; j < n; ++j) {
      if (masked && !mask[i * n + j]) continue;
      const double e = std::exp(x[i * n + j] - mx);
      v[i * n + j] = e;
      z += e;
    }
    for (int j = 0; j < n; ++j) v[i * n + j] /= z;
  }
  Node * px = x.node().get();
  auto res = detail::make_result(x.shape(), std::move(v), {&x}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [px, pr, m, n] {
      px->ensure_grad();
      for (int i = 0; i < m; ++i) {
        double dot = 0.0;
        for (int j = 0; j < n; ++j) dot += pr->grad[i * n + j] * pr->val[i * n + j];
        for (int j = 0; j < n; ++j)
          px->grad[i * n + j] += pr->val[i * n + j] * (pr->grad[i * n + j] - dot);
      }
    };
  }
  return res;
}

/// Mean negative log-softmax at the label indices, stabilized by
/// max-subtraction.
inline Tensor softmax_xent(const Tensor & logits, const std::vector<int> & labels)
{
  check_2d(logits, "softmax_xent");
  const int n = logits.dim(0), c = logits.dim(1);
  if (static_cast<int>(labels.size()) != n) throw Error("softmax_xent: label count mismatch");
  for (int l : labels)
    if (l < 0 || l >= c) throw IndexOutOfRange("softmax_xent: label out of range");
  double loss = 0.0;
  std::vector<double> probs(logits.size());
  for (int i = 0; i < n; ++i) {
    double mx = logits[i * c];
    for (int j = 1; j < c; ++j) mx = std::max(mx, logits[i * c + j]);
    double z = 0.0;
    for (int j = 0; j < c; ++j) {
      const double e = std::exp(logits[i * c + j] - mx);
      probs[i * c + j] = e;
      z += e;
    }
    for (int j = 0; j < c; ++j) probs[i * c + j] /= z;
    loss -= logits[i * c + labels[i]] - mx - std::log(z);
  }
  loss /= n;
  Node * pl = logits.node().get();
  auto res = detail::make_result({1}, {loss}, {&logits}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [pl, pr, probs, labels, n, c] {
      pl->ensure_grad();
      const double g = pr->grad[0] / n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < c; ++j)
          pl->grad[i * c + j] += g * (probs[i * c + j] - (labels[i] == j ? 1.0 : 0.0));
    };
  }
  return res;
}

/// Inverted-scale dropout; identity when rate == 0.
inline Tensor dropout(const Tensor & x, double rate, std::uint64_t & rng_state)
{
  if (rate <= 0.0) return x;
  if (rate >= 1.0) throw Error("dropout: rate must be < 1");
  const double keep = 1.0 - rate;
  std::vector<double> v(x.size());
  std::vector<std::uint8_t> kept(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    // xorshift64*; local so the caller controls determinism.
    rng_state ^= rng_state >> 12;
    rng_state ^= rng_state << 25;
    rng_state ^= rng_state >> 27;
    const double u = static_cast<double>((rng_state * 0x2545F4914F6CDD1DULL) >> 11) * 0x1.0p-53;
    kept[i] = u < keep;
    v[i] = kept[i] ? x[i] / keep : 0.0;
  }
  Node * px = x.node().get();
  auto res = detail::make_result(x.shape(), std::move(v), {&x}, nullptr);
  if (res.needs_grad()) {
    Node * pr = res.node().get();
    res.node()->backprop = [px, pr, kept, keep] {
      px->ensure_grad();
      for (std::size_t i = 0; i < pr->grad.size(); ++i)
        if (kept[i]) px->grad[i] += pr->grad[i] / keep;
    };
  }
  return res;
}

}  // namespace fairway::ad

#endif  // FAIRWAY__TENSOR_HPP_
