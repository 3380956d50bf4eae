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

#ifndef FAIRWAY__NN_HPP_
#define FAIRWAY__NN_HPP_

#include "fairway/tensor.hpp"

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace fairway::ad
{

/// Ordered name -> parameter registry. Iteration order is the registration
/// order, which fixes the checkpoint layout and the optimizer slot layout.
class ParamMap
{
public:
  Tensor & add(const std::string & name, Tensor t)
  {
    if (index_.count(name)) throw Error("duplicate parameter name: " + name);
    index_[name] = names_.size();
    names_.push_back(name);
    params_.push_back(std::move(t));
    return params_.back();
  }

  Tensor & at(const std::string & name)
  {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("unknown parameter name: " + name);
    return params_[it->second];
  }

  const Tensor & at(const std::string & name) const
  {
    auto it = index_.find(name);
    if (it == index_.end()) throw Error("unknown parameter name: " + name);
    return params_[it->second];
  }

  bool contains(const std::string & name) const { return index_.count(name) > 0; }
  std::size_t count() const { return params_.size(); }
  const std::vector<std::string> & names() const { return names_; }
  std::vector<Tensor> & tensors() { return params_; }
  const std::vector<Tensor> & tensors() const { return params_; }

  std::size_t scalar_count() const
  {
    std::size_t n = 0;
    for (const auto & p : params_) n += p.size();
    return n;
  }

  void zero_grad()
  {
    for (auto & p : params_) std::fill(p.grad().begin(), p.grad().end(), 0.0);
  }

private:
  std::vector<std::string> names_;
  std::vector<Tensor> params_;
  std::map<std::string, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

inline Tensor glorot(Shape shape, std::mt19937_64 & rng)
{
  const int fan_in = shape.size() == 2 ? shape[0] : static_cast<int>(shape_size(shape));
  const int fan_out = shape.size() == 2 ? shape[1] : 1;
  const double lim = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> u(-lim, lim);
  std::vector<double> d(shape_size(shape));
  for (auto & x : d) x = u(rng);
  return Tensor::param(std::move(shape), std::move(d));
}

inline Tensor zeros_param(Shape shape)
{
  return Tensor::param(std::move(shape), std::vector<double>(shape_size(shape), 0.0));
}

inline Tensor ones_param(Shape shape)
{
  return Tensor::param(std::move(shape), std::vector<double>(shape_size(shape), 1.0));
}

// ---------------------------------------------------------------------------
// Attention
// ---------------------------------------------------------------------------

/// Projection weights of one attention block. No bias terms anywhere.
struct AttentionParams
{
  Tensor wq, wk, wv, wo;  // each (d, d)
  int heads = 1;
};

inline AttentionParams make_attention(
  ParamMap & pm, const std::string & prefix, int d, int heads, std::mt19937_64 & rng)
{
  if (heads <= 0 || d % heads != 0) throw Error("attention: d must be divisible by heads");
  AttentionParams a;
  a.heads = heads;
  a.wq = pm.add(prefix + ".wq", glorot({d, d}, rng));
  a.wk = pm.add(prefix + ".wk", glorot({d, d}, rng));
  a.wv = pm.add(prefix + ".wv", glorot({d, d}, rng));
  a.wo = pm.add(prefix + ".wo", glorot({d, d}, rng));
  return a;
}

/// Multi-head scaled dot-product attention. Queries come from q (nq, d), keys
/// and values from kv (nk, d). Scores are divided by sqrt(d / heads). The
/// optional mask has one byte per (query, key) pair, true meaning the key is
/// visible; it applies identically to every head.
inline Tensor multi_head_attention(
  const Tensor & q, const Tensor & kv, const AttentionParams & p,
  const std::vector<std::uint8_t> & mask = {})
{
  const int d = q.dim(1);
  const int h = p.heads;
  const int dh = d / h;
  const double scl = 1.0 / std::sqrt(static_cast<double>(dh));
  Tensor qp = matmul(q, p.wq);
  Tensor kp = matmul(kv, p.wk);
  Tensor vp = matmul(kv, p.wv);
  std::vector<Tensor> head_out;
  head_out.reserve(h);
  for (int i = 0; i < h; ++i) {
    Tensor qh = slice_cols(qp, i * dh, dh);
    Tensor kh = slice_cols(kp, i * dh, dh);
    Tensor vh = slice_cols(vp, i * dh, dh);
    Tensor scores = scale(matmul_nt(qh, kh), scl);
    Tensor w = softmax_rows(scores, mask);
    head_out.push_back(matmul(w, vh));
  }
  return matmul(concat_cols(head_out), p.wo);
}

/// Lower-triangular self-attention mask for n positions (key <= query).
inline std::vector<std::uint8_t> causal_mask(int n)
{
  std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m[i * n + j] = 1;
  return m;
}

// ---------------------------------------------------------------------------
// Transformer layers (pre-norm)
// ---------------------------------------------------------------------------

struct FeedForwardParams
{
  Tensor w1, b1, w2, b2;
};

inline FeedForwardParams make_feed_forward(
  ParamMap & pm, const std::string & prefix, int d, int hidden, std::mt19937_64 & rng)
{
  FeedForwardParams f;
  f.w1 = pm.add(prefix + ".w1", glorot({d, hidden}, rng));
  f.b1 = pm.add(prefix + ".b1", zeros_param({hidden}));
  f.w2 = pm.add(prefix + ".w2", glorot({hidden, d}, rng));
  f.b2 = pm.add(prefix + ".b2", zeros_param({d}));
  return f;
}

inline Tensor feed_forward(const Tensor & x, const FeedForwardParams & f)
{
  return add_rowvec(matmul(gelu(add_rowvec(matmul(x, f.w1), f.b1)), f.w2), f.b2);
}

struct LayerNormParams
{
  Tensor gain, bias;
};

inline LayerNormParams make_layer_norm(ParamMap & pm, const std::string & prefix, int d)
{
  return {pm.add(prefix + ".g", ones_param({d})), pm.add(prefix + ".b", zeros_param({d}))};
}

struct EncoderLayerParams
{
  LayerNormParams ln1, ln2;
  AttentionParams attn;
  FeedForwardParams ff;
};

inline EncoderLayerParams make_encoder_layer(
  ParamMap & pm, const std::string & prefix, int d, int heads, int ff_hidden,
  std::mt19937_64 & rng)
{
  EncoderLayerParams l;
  l.ln1 = make_layer_norm(pm, prefix + ".ln1", d);
  l.attn = make_attention(pm, prefix + ".attn", d, heads, rng);
  l.ln2 = make_layer_norm(pm, prefix + ".ln2", d);
  l.ff = make_feed_forward(pm, prefix + ".ff", d, ff_hidden, rng);
  return l;
}

inline Tensor encoder_layer(
  const Tensor & x, const EncoderLayerParams & l, const std::vector<std::uint8_t> & mask = {})
{
  Tensor h = layer_norm(x, l.ln1.gain, l.ln1.bias);
  Tensor a = add(x, multi_head_attention(h, h, l.attn, mask));
  return add(a, feed_forward(layer_norm(a, l.ln2.gain, l.ln2.bias), l.ff));
}

struct DecoderLayerParams
{
  LayerNormParams ln1, ln2, ln3;
  AttentionParams self_attn, cross_attn;
  FeedForwardParams ff;
};

inline DecoderLayerParams make_decoder_layer(
  ParamMap & pm, const std::string & prefix, int d, int heads, int ff_hidden,
  std::mt19937_64 & rng)
{
  DecoderLayerParams l;
  l.ln1 = make_layer_norm(pm, prefix + ".ln1", d);
  l.self_attn = make_attention(pm, prefix + ".self", d, heads, rng);
  l.ln2 = make_layer_norm(pm, prefix + ".ln2", d);
  l.cross_attn = make_attention(pm, prefix + ".cross", d, heads, rng);
  l.ln3 = make_layer_norm(pm, prefix + ".ln3", d);
  l.ff = make_feed_forward(pm, prefix + ".ff", d, ff_hidden, rng);
  return l;
}

/// Pre-norm decoder layer: causal self-attention, cross-attention over the
/// encoder memory, then the position-wise feed-forward block.
inline Tensor decoder_layer(
  const Tensor & x, const Tensor & memory, const DecoderLayerParams & l,
  const std::vector<std::uint8_t> & self_mask)
{
  Tensor h = layer_norm(x, l.ln1.gain, l.ln1.bias);
  Tensor a = add(x, multi_head_attention(h, h, l.self_attn, self_mask));
  Tensor c = add(
    a, multi_head_attention(layer_norm(a, l.ln2.gain, l.ln2.bias), memory, l.cross_attn));
  return add(c, feed_forward(layer_norm(c, l.ln3.gain, l.ln3.bias), l.ff));
}

// ---------------------------------------------------------------------------
// Positional encodings
// ---------------------------------------------------------------------------

/// Interleaved sinusoidal table (n, d): column 2i is sin(pos / 10000^(2i/d)),
/// column 2i+1 the matching cosine. Position 0 is (0, 1, 0, 1, ...).
inline Tensor pos_encode_1d(int n, int d)
{
  if (d % 2 != 0) throw Error("pos_encode_1d: d must be even");
  std::vector<double> v(static_cast<std::size_t>(n) * d);
  for (int pos = 0; pos < n; ++pos)
    for (int i = 0; i < d / 2; ++i) {
      const double f = std::pow(10000.0, -2.0 * i / d);
      v[pos * d + 2 * i] = std::sin(pos * f);
      v[pos * d + 2 * i + 1] = std::cos(pos * f);
    }
  return Tensor::constant({n, d}, std::move(v));
}

/// Grid encoding (w * l, d): the first d/2 columns encode the lateral index,
/// the last d/2 the longitudinal index, each by pos_encode_1d. Row layout is
/// flat index wi * l + li.
inline Tensor pos_encode_2d(int w, int l, int d)
{
  if (d % 4 != 0) throw Error("pos_encode_2d: d must be divisible by 4");
  Tensor lat = pos_encode_1d(w, d / 2);
  Tensor lon = pos_encode_1d(l, d / 2);
  std::vector<double> v(static_cast<std::size_t>(w) * l * d);
  for (int wi = 0; wi < w; ++wi)
    for (int li = 0; li < l; ++li) {
      double * row = v.data() + (static_cast<std::size_t>(wi) * l + li) * d;
      std::copy_n(lat.values().begin() + static_cast<std::size_t>(wi) * (d / 2), d / 2, row);
      std::copy_n(
        lon.values().begin() + static_cast<std::size_t>(li) * (d / 2), d / 2, row + d / 2);
    }
  return Tensor::constant({w * l, d}, std::move(v));
}

// ---------------------------------------------------------------------------
// Optimization
// ---------------------------------------------------------------------------

inline double global_grad_norm(ParamMap & pm)
{
  double sq = 0.0;
  for (auto & p : pm.tensors())
    for (double g : p.grad()) sq += g * g;
  return std::sqrt(sq);
}

/// Scales all gradients down so the global L2 norm is at most max_norm.
/// Returns the pre-clip norm.
inline double clip_global_norm(ParamMap & pm, double max_norm)
{
  const double norm = global_grad_norm(pm);
  if (!std::isfinite(norm)) throw NonFinite("gradient norm is not finite");
  if (norm > max_norm) {
    const double s = max_norm / norm;
    for (auto & p : pm.tensors())
      for (double & g : p.grad()) g *= s;
  }
  return norm;
}

/// Adam with bias correction. Slot buffers are laid out in parameter
/// registration order, so two runs over identical graphs take identical steps.
class Adam
{
public:
  explicit Adam(ParamMap & pm, double lr = 3e-4, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
  : pm_(pm), lr_(lr), b1_(beta1), b2_(beta2), eps_(eps)
  {
    m_.resize(pm.scalar_count(), 0.0);
    v_.resize(pm.scalar_count(), 0.0);
  }

  void step()
  {
    ++t_;
    const double bc1 = 1.0 - std::pow(b1_, t_);
    const double bc2 = 1.0 - std::pow(b2_, t_);
    std::size_t off = 0;
    for (auto & p : pm_.tensors()) {
      auto & val = p.values();
      auto & grad = p.grad();
      for (std::size_t i = 0; i < val.size(); ++i) {
        const double g = grad[i];
        if (!std::isfinite(g)) throw NonFinite("gradient is not finite");
        m_[off + i] = b1_ * m_[off + i] + (1.0 - b1_) * g;
        v_[off + i] = b2_ * v_[off + i] + (1.0 - b2_) * g * g;
        const double mhat = m_[off + i] / bc1;
        const double vhat = v_[off + i] / bc2;
        val[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
      off += val.size();
    }
  }

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  long step_count() const { return t_; }

private:
  ParamMap & pm_;
  double lr_, b1_, b2_, eps_;
  long t_ = 0;
  std::vector<double> m_, v_;
};

}  // namespace fairway::ad

#endif  // FAIRWAY__NN_HPP_
