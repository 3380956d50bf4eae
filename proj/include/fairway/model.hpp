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

#ifndef FAIRWAY__MODEL_HPP_
#define FAIRWAY__MODEL_HPP_

#include "fairway/codec.hpp"
#include "fairway/pipeline.hpp"
#include "fairway/stt.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fairway::model
{

enum class Variant
{
  ct,       // heading-aligned dislocations, no social input
  sp_ct,    // navigation-frame dislocations
  sosp_ct,  // navigation-frame dislocations + social fusion
};

inline std::string to_string(Variant v)
{
  switch (v) {
    case Variant::ct: return "ct";
    case Variant::sp_ct: return "sp-ct";
    default: return "sosp-ct";
  }
}

inline Variant variant_from_string(const std::string & s)
{
  if (s == "ct") return Variant::ct;
  if (s == "sp-ct") return Variant::sp_ct;
  if (s == "sosp-ct") return Variant::sosp_ct;
  throw Error("unknown variant: " + s);
}

/**
 * @brief Hyperparameters shared by all three ablation variants.
 *
 * The label codec is uniform: c1 lateral bins over [-lat_span, lat_span] and
 * c2 longitudinal bins over [lon_min, lon_max], both in meters per step.
 */
struct ModelConfig
{
  Variant variant = Variant::sosp_ct;
  int d = 32;
  int heads = 4;
  int enc_layers = 1;
  int dec_layers = 1;
  int stt_layers = 1;
  int ff_mult = 4;
  int t_obs = 5;
  int horizon = 5;
  int c1 = 21;
  int c2 = 41;
  double lat_span = 15.0;
  double lon_min = -50.0;
  double lon_max = 250.0;
  social::GridSpec grid;
  double dt = 60.0;
  int ctx_segments = 8;
  double ctx_spacing = 250.0;

  void validate() const
  {
    if (t_obs != horizon) throw Error("config: observation and prediction spans must match");
    if (t_obs < 1) throw Error("config: spans must be positive");
    if (d < 4 || d % 2 != 0) throw Error("config: d must be even and at least 4");
    if (d % heads != 0) throw Error("config: d must divide evenly across heads");
    if (variant == Variant::sosp_ct && d % 4 != 0)
      throw Error("config: social fusion needs d divisible by 4");
    if (c1 < 2 || c2 < 2) throw Error("config: need at least two classes per head");
    if (lat_span <= 0.0 || lon_max <= lon_min) throw Error("config: bad label ranges");
    if (ctx_segments < 1 || ctx_spacing <= 0.0) throw Error("config: bad context lookahead");
    if (variant == Variant::sosp_ct) grid.validate();
  }

  nav::LabelCodec codec() const
  {
    return nav::LabelCodec::uniform(c1, -lat_span, lat_span, c2, lon_min, lon_max);
  }

  int ctx_features() const { return 2 * ctx_segments; }
};

struct Logits
{
  ad::Tensor lat;  // (steps, c1)
  ad::Tensor lon;  // (steps, c2)
  int steps() const { return lat.dim(0); }
};

/**
 * @brief Classification transformer over dislocation labels.
 *
 * Observed labels are embedded half-width per head and concatenated; the
 * sosp variant fuses each step's occupancy-grid slice into that embedding
 * before positional encoding. The decoder starts from an embedded
 * navigation-context vector at position 0 and is teacher-forced with label
 * embeddings afterwards; two linear heads emit per-step class logits.
 */
struct Model
{
  ModelConfig cfg;
  ad::ParamMap pm;

  ad::Tensor emb_lat;  // (c1, d/2)
  ad::Tensor emb_lon;  // (c2, d/2)
  ad::Tensor ctx_w;    // (2 * ctx_segments, d)
  ad::Tensor ctx_b;    // (d)
  std::vector<ad::EncoderLayerParams> enc;
  ad::LayerNormParams enc_ln;
  std::vector<ad::DecoderLayerParams> dec;
  ad::LayerNormParams dec_ln;
  ad::Tensor head_lat_w, head_lat_b;
  ad::Tensor head_lon_w, head_lon_b;
  ad::Tensor s_x, s_y;  // learned log-variances of the two loss terms
  std::optional<stt::SttParams> social;
};

inline Model build_variant(const ModelConfig & cfg, std::uint64_t seed)
{
  cfg.validate();
  Model m;
  m.cfg = cfg;
  auto rng = std::mt19937_64(seed);
  const int half = cfg.d / 2;
  m.emb_lat = m.pm.add("emb.lat", ad::glorot({cfg.c1, half}, rng));
  m.emb_lon = m.pm.add("emb.lon", ad::glorot({cfg.c2, half}, rng));
  m.ctx_w = m.pm.add("ctx.w", ad::glorot({cfg.ctx_features(), cfg.d}, rng));
  m.ctx_b = m.pm.add("ctx.b", ad::zeros_param({cfg.d}));
  if (cfg.variant == Variant::sosp_ct)
    m.social = stt::make_stt(
      m.pm, "stt", cfg.d, cfg.heads, cfg.stt_layers, cfg.ff_mult * cfg.d, cfg.grid.w,
      cfg.grid.l, rng);
  for (int i = 0; i < cfg.enc_layers; ++i)
    m.enc.push_back(ad::make_encoder_layer(
      m.pm, "enc." + std::to_string(i), cfg.d, cfg.heads, cfg.ff_mult * cfg.d, rng));
  m.enc_ln = ad::make_layer_norm(m.pm, "enc.ln", cfg.d);
  for (int i = 0; i < cfg.dec_layers; ++i)
    m.dec.push_back(ad::make_decoder_layer(
      m.pm, "dec." + std::to_string(i), cfg.d, cfg.heads, cfg.ff_mult * cfg.d, rng));
  m.dec_ln = ad::make_layer_norm(m.pm, "dec.ln", cfg.d);
  m.head_lat_w = m.pm.add("head.lat.w", ad::glorot({cfg.d, cfg.c1}, rng));
  m.head_lat_b = m.pm.add("head.lat.b", ad::zeros_param({cfg.c1}));
  m.head_lon_w = m.pm.add("head.lon.w", ad::glorot({cfg.d, cfg.c2}, rng));
  m.head_lon_b = m.pm.add("head.lon.b", ad::zeros_param({cfg.c2}));
  m.s_x = m.pm.add("loss.sx", ad::zeros_param({1}));
  m.s_y = m.pm.add("loss.sy", ad::zeros_param({1}));
  return m;
}

namespace detail
{

inline void check_labels(const Model & m, const std::vector<nav::DislocationLabel> & ls)
{
  for (const auto & l : ls)
    if (l.x < 0 || l.x >= m.cfg.c1 || l.y < 0 || l.y >= m.cfg.c2)
      throw IndexOutOfRange("dislocation label outside the codec range");
}

inline ad::Tensor embed_labels(const Model & m, const std::vector<nav::DislocationLabel> & ls)
{
  check_labels(m, ls);
  std::vector<int> lat, lon;
  lat.reserve(ls.size());
  lon.reserve(ls.size());
  for (const auto & l : ls) {
    lat.push_back(l.x);
    lon.push_back(l.y);
  }
  return ad::concat_cols(
    {ad::gather_rows(m.emb_lat, lat), ad::gather_rows(m.emb_lon, lon)});
}

inline ad::Tensor encode(
  const Model & m, const std::vector<nav::DislocationLabel> & obs,
  const social::SocialTensor * tensor)
{
  if (static_cast<int>(obs.size()) != m.cfg.t_obs)
    throw Error("observation length does not match the configuration");
  ad::Tensor x = embed_labels(m, obs);
  if (tensor) x = stt::fuse_sequence(*m.social, x, *tensor);
  x = ad::add(x, ad::pos_encode_1d(m.cfg.t_obs, m.cfg.d));
  for (const auto & l : m.enc) x = ad::encoder_layer(x, l);
  return ad::layer_norm(x, m.enc_ln.gain, m.enc_ln.bias);
}

inline ad::Tensor decode(
  const Model & m, const ad::Tensor & memory, const std::vector<double> & ctx,
  const std::vector<nav::DislocationLabel> & dec_inputs)
{
  if (static_cast<int>(ctx.size()) != m.cfg.ctx_features())
    throw Error("navigation context length does not match the configuration");
  for (double v : ctx)
    if (!std::isfinite(v)) throw NonFinite("navigation context must be finite");
  ad::Tensor ctx_row = ad::Tensor::constant({1, m.cfg.ctx_features()}, ctx);
  ad::Tensor first = ad::add_rowvec(ad::matmul(ctx_row, m.ctx_w), m.ctx_b);
  ad::Tensor x = dec_inputs.empty()
    ? first
    : ad::concat_rows({first, embed_labels(m, dec_inputs)});
  const int steps = x.dim(0);
  x = ad::add(x, ad::pos_encode_1d(steps, m.cfg.d));
  const auto mask = ad::causal_mask(steps);
  for (const auto & l : m.dec) x = ad::decoder_layer(x, memory, l, mask);
  return ad::layer_norm(x, m.dec_ln.gain, m.dec_ln.bias);
}

}  // namespace detail

/// Teacher-forced forward pass. The decoder sees the context embedding plus
/// the given labels, so the logits cover dec_inputs.size() + 1 steps. The
/// social tensor must be present exactly when the variant fuses it.
inline Logits forward(
  const Model & m, const std::vector<nav::DislocationLabel> & obs,
  const social::SocialTensor * tensor, const std::vector<double> & ctx,
  const std::vector<nav::DislocationLabel> & dec_inputs)
{
  const bool wants = m.cfg.variant == Variant::sosp_ct;
  if (wants != (tensor != nullptr))
    throw VariantMismatch(
      wants ? "variant fuses a social tensor but none was given"
            : "variant does not accept a social tensor");
  if (static_cast<int>(dec_inputs.size()) >= m.cfg.horizon)
    throw Error("too many decoder inputs for the prediction span");
  ad::Tensor memory = detail::encode(m, obs, tensor);
  ad::Tensor decoded = detail::decode(m, memory, ctx, dec_inputs);
  Logits out;
  out.lat = ad::add_rowvec(ad::matmul(decoded, m.head_lat_w), m.head_lat_b);
  out.lon = ad::add_rowvec(ad::matmul(decoded, m.head_lon_w), m.head_lon_b);
  return out;
}

struct LossParts
{
  ad::Tensor lat;
  ad::Tensor lon;
};

inline LossParts loss_parts(
  const Logits & logits, const std::vector<nav::DislocationLabel> & targets)
{
  if (static_cast<int>(targets.size()) != logits.steps())
    throw Error("loss: target count does not match the logit steps");
  std::vector<int> lat, lon;
  for (const auto & t : targets) {
    lat.push_back(t.x);
    lon.push_back(t.y);
  }
  return {ad::softmax_xent(logits.lat, lat), ad::softmax_xent(logits.lon, lon)};
}

/// Learned log-variance weighting of the two cross-entropy terms:
/// L = exp(-s_x) Lx + exp(-s_y) Ly + (s_x + s_y) / 2.
inline ad::Tensor weighted_loss(
  const LossParts & parts, const ad::Tensor & s_x, const ad::Tensor & s_y)
{
  ad::Tensor weighted = ad::add(
    ad::mul(ad::exp(ad::scale(s_x, -1.0)), parts.lat),
    ad::mul(ad::exp(ad::scale(s_y, -1.0)), parts.lon));
  return ad::add(weighted, ad::scale(ad::add(s_x, s_y), 0.5));
}

inline ad::Tensor loss(
  const Logits & logits, const std::vector<nav::DislocationLabel> & targets,
  const ad::Tensor & s_x, const ad::Tensor & s_y)
{
  return weighted_loss(loss_parts(logits, targets), s_x, s_y);
}

/// Per-row argmax of both heads; ties go to the lower class index.
inline std::vector<nav::DislocationLabel> argmax_labels(const Logits & logits)
{
  const auto pick = [](const ad::Tensor & t, int row) {
    const int n = t.dim(1);
    int best = 0;
    for (int j = 1; j < n; ++j)
      if (t[static_cast<std::size_t>(row) * n + j] > t[static_cast<std::size_t>(row) * n + best])
        best = j;
    return best;
  };
  std::vector<nav::DislocationLabel> out;
  for (int r = 0; r < logits.steps(); ++r)
    out.push_back({pick(logits.lat, r), pick(logits.lon, r)});
  return out;
}

/// Autoregressive prediction: each step's argmax labels are re-embedded as
/// the next decoder input.
inline std::vector<nav::DislocationLabel> greedy_decode(
  const Model & m, const std::vector<nav::DislocationLabel> & obs,
  const social::SocialTensor * tensor, const std::vector<double> & ctx)
{
  ad::NoGradGuard ng;
  std::vector<nav::DislocationLabel> out;
  for (int step = 0; step < m.cfg.horizon; ++step) {
    Logits logits = forward(m, obs, tensor, ctx, out);
    out.push_back(argmax_labels(logits).back());
  }
  return out;
}

/**
 * @brief Observed and future label streams for one sequence sample.
 *
 * Navigation-frame variants discretize per-step (lateral, longitudinal)
 * dislocations. The context-agnostic baseline instead aligns each step's
 * displacement with the heading realized on the previous step, so its labels
 * carry no fairway information.
 */
struct LabelStreams
{
  std::vector<nav::DislocationLabel> obs;
  std::vector<nav::DislocationLabel> future;
};

inline LabelStreams label_streams(
  const pipe::SequenceSample & sample, Variant variant, const nav::LabelCodec & codec)
{
  const int total = sample.t_obs + sample.horizon;
  if (static_cast<int>(sample.target.size()) != total + 1)
    throw TooShort("sample does not span the full window");
  std::vector<nav::DislocationLabel> all;
  all.reserve(static_cast<std::size_t>(total));
  if (variant == Variant::ct) {
    for (int i = 0; i < total; ++i) {
      const Vec2 prev = i == 0 ? sample.target[0].p : sample.target[i - 1].p;
      const Vec2 from = sample.target[i].p;
      Vec2 heading = (from - prev).normalized();
      if (heading.norm() == 0.0) heading = {1.0, 0.0};
      const Vec2 d = sample.target[i + 1].p - from;
      all.push_back(codec.encode({d.dot(heading.perp_left()), d.dot(heading)}));
    }
  } else {
    for (int i = 0; i < total; ++i)
      all.push_back(codec.encode(nav::dislocation(sample.target[i].s, sample.target[i + 1].s)));
  }
  LabelStreams out;
  out.obs.assign(all.begin(), all.begin() + sample.t_obs);
  out.future.assign(all.begin() + sample.t_obs, all.end());
  return out;
}

}  // namespace fairway::model

#endif  // FAIRWAY__MODEL_HPP_
