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

#ifndef FAIRWAY__STT_HPP_
#define FAIRWAY__STT_HPP_

#include "fairway/nn.hpp"
#include "fairway/social.hpp"

#include <random>
#include <string>
#include <vector>

namespace fairway::stt
{

/**
 * @brief Parameters of the per-step social fusion block.
 *
 * Occupied grid cells become tokens: the two change rates are mapped to d
 * dimensions, the cell's grid position encoding is added, and a learned null
 * token is appended so attention is defined even over empty scenes. A small
 * encoder contextualizes the tokens; the target's input embedding then reads
 * them through single-query cross-attention. Both output projections of the
 * fusion block start at zero, so an untrained block is the identity on the
 * input embedding.
 */
struct SttParams
{
  ad::Tensor cell_w;  // (2, d)
  ad::Tensor cell_b;  // (d)
  ad::Tensor null_token;  // (1, d)
  std::vector<ad::EncoderLayerParams> encoder;
  ad::LayerNormParams enc_ln;
  ad::LayerNormParams f_ln1;
  ad::AttentionParams f_attn;
  ad::LayerNormParams f_ln2;
  ad::FeedForwardParams f_ff;
  ad::Tensor pe2d;  // constant (w * l, d)
  int grid_w = 0;
  int grid_l = 0;
};

inline SttParams make_stt(
  ad::ParamMap & pm, const std::string & prefix, int d, int heads, int layers, int ff_hidden,
  int grid_w, int grid_l, std::mt19937_64 & rng)
{
  SttParams p;
  p.cell_w = pm.add(prefix + ".cell.w", ad::glorot({2, d}, rng));
  p.cell_b = pm.add(prefix + ".cell.b", ad::zeros_param({d}));
  p.null_token = pm.add(prefix + ".null", ad::glorot({1, d}, rng));
  for (int i = 0; i < layers; ++i)
    p.encoder.push_back(ad::make_encoder_layer(
      pm, prefix + ".enc." + std::to_string(i), d, heads, ff_hidden, rng));
  p.enc_ln = ad::make_layer_norm(pm, prefix + ".enc.ln", d);
  p.f_ln1 = ad::make_layer_norm(pm, prefix + ".fuse.ln1", d);
  p.f_attn = ad::make_attention(pm, prefix + ".fuse.attn", d, heads, rng);
  p.f_ln2 = ad::make_layer_norm(pm, prefix + ".fuse.ln2", d);
  p.f_ff = ad::make_feed_forward(pm, prefix + ".fuse.ff", d, ff_hidden, rng);
  // Zero fusion outputs: the social path starts as a no-op correction.
  std::fill(p.f_attn.wo.values().begin(), p.f_attn.wo.values().end(), 0.0);
  std::fill(p.f_ff.w2.values().begin(), p.f_ff.w2.values().end(), 0.0);
  std::fill(p.f_ff.b2.values().begin(), p.f_ff.b2.values().end(), 0.0);
  p.pe2d = ad::pos_encode_2d(grid_w, grid_l, d);
  p.grid_w = grid_w;
  p.grid_l = grid_l;
  return p;
}

/// Encodes explicit occupied-cell rates (m, 2) at the given flat cell
/// indices (wi * L + li). The null token is appended before the encoder runs;
/// the result has m + 1 rows. With m = 0 the null token alone is encoded.
inline ad::Tensor encode_tokens(
  const SttParams & p, const ad::Tensor & cell_rates, const std::vector<int> & flat_cells)
{
  ad::Tensor tokens;
  if (flat_cells.empty()) {
    tokens = p.null_token;
  } else {
    ad::Tensor emb = ad::add_rowvec(ad::matmul(cell_rates, p.cell_w), p.cell_b);
    ad::Tensor pe = ad::gather_rows(p.pe2d, flat_cells);
    tokens = ad::concat_rows({ad::add(emb, pe), p.null_token});
  }
  for (const auto & layer : p.encoder) tokens = ad::encoder_layer(tokens, layer);
  return ad::layer_norm(tokens, p.enc_ln.gain, p.enc_ln.bias);
}

/// Extracts the occupied cells of one tensor slice in flat-index order.
inline std::pair<std::vector<double>, std::vector<int>> slice_cells(
  const social::SocialTensor & st, int t)
{
  std::vector<double> rates;
  std::vector<int> flat;
  for (int wi = 0; wi < st.w; ++wi)
    for (int li = 0; li < st.l; ++li) {
      if (!st.occupied(wi, li, t)) continue;
      rates.push_back(st.value(wi, li, t, 0));
      rates.push_back(st.value(wi, li, t, 1));
      flat.push_back(wi * st.l + li);
    }
  return {std::move(rates), std::move(flat)};
}

inline ad::Tensor encode_grid(const SttParams & p, const social::SocialTensor & st, int t)
{
  if (st.w != p.grid_w || st.l != p.grid_l)
    throw Error("social tensor shape does not match the fusion block grid");
  auto [rates, flat] = slice_cells(st, t);
  ad::Tensor cell_rates;
  if (!flat.empty())
    cell_rates =
      ad::Tensor::constant({static_cast<int>(flat.size()), 2}, std::move(rates));
  return encode_tokens(p, cell_rates, flat);
}

/// Single-query cross-attention of the target embedding over the encoded
/// tokens, followed by the feed-forward correction. Both sublayers are
/// pre-normalized residual blocks, so zeroed output projections make this an
/// exact identity.
inline ad::Tensor fuse(const SttParams & p, const ad::Tensor & target_embed,
                       const ad::Tensor & tokens)
{
  ad::Tensor h = ad::layer_norm(target_embed, p.f_ln1.gain, p.f_ln1.bias);
  ad::Tensor a = ad::add(target_embed, ad::multi_head_attention(h, tokens, p.f_attn));
  return ad::add(
    a, ad::feed_forward(ad::layer_norm(a, p.f_ln2.gain, p.f_ln2.bias), p.f_ff));
}

/// Applies encode + fuse independently at every observation step.
inline ad::Tensor fuse_sequence(
  const SttParams & p, const ad::Tensor & input_embeds, const social::SocialTensor & st)
{
  if (input_embeds.dim(0) != st.t_obs)
    throw Error("embedding sequence length does not match the social tensor");
  std::vector<ad::Tensor> rows;
  rows.reserve(static_cast<std::size_t>(st.t_obs));
  for (int t = 0; t < st.t_obs; ++t) {
    ad::Tensor tokens = encode_grid(p, st, t);
    rows.push_back(fuse(p, ad::slice_rows(input_embeds, t, 1), tokens));
  }
  return ad::concat_rows(rows);
}

}  // namespace fairway::stt

#endif  // FAIRWAY__STT_HPP_
