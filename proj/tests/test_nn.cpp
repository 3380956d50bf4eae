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

#include "fairway/nn.hpp"
#include "gradcheck.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

namespace ad = fairway::ad;
using testutil::gradcheck;
using testutil::random_tensor;

TEST_CASE("multi-head attention gradients match finite differences")
{
  auto gen = std::mt19937_64(21);
  ad::ParamMap pm;
  ad::AttentionParams attn = ad::make_attention(pm, "attn", 8, 2, gen);
  ad::Tensor q = random_tensor({3, 8}, gen);
  ad::Tensor kv = random_tensor({4, 8}, gen);
  std::vector<ad::Tensor> params = {q, kv, attn.wq, attn.wk, attn.wv, attn.wo};
  gradcheck(params, [&] {
    ad::Tensor y = ad::multi_head_attention(q, kv, attn);
    return ad::sum(ad::mul(y, y));
  });
}

TEST_CASE("attention ignores masked keys bit for bit")
{
  auto gen = std::mt19937_64(22);
  ad::ParamMap pm;
  ad::AttentionParams attn = ad::make_attention(pm, "attn", 8, 2, gen);
  ad::Tensor q = random_tensor({2, 8}, gen);
  std::vector<double> kv_data(4 * 8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto & x : kv_data) x = u(gen);

  std::vector<std::uint8_t> mask(2 * 4, 1);
  mask[0 * 4 + 2] = 0;  // query 0 cannot see key 2
  mask[1 * 4 + 2] = 0;  // query 1 cannot see key 2

  ad::NoGradGuard ng;
  ad::Tensor kv1 = ad::Tensor::constant({4, 8}, kv_data);
  ad::Tensor y1 = ad::multi_head_attention(q, kv1, attn, mask);

  for (int j = 0; j < 8; ++j) kv_data[2 * 8 + j] += 50.0 * u(gen);
  ad::Tensor kv2 = ad::Tensor::constant({4, 8}, kv_data);
  ad::Tensor y2 = ad::multi_head_attention(q, kv2, attn, mask);

  for (std::size_t i = 0; i < y1.size(); ++i) REQUIRE(y1[i] == y2[i]);
}

TEST_CASE("masked attention gradients match finite differences")
{
  auto gen = std::mt19937_64(23);
  ad::ParamMap pm;
  ad::AttentionParams attn = ad::make_attention(pm, "attn", 4, 2, gen);
  ad::Tensor x = random_tensor({3, 4}, gen);
  const std::vector<std::uint8_t> mask = ad::causal_mask(3);
  std::vector<ad::Tensor> params = {x, attn.wq, attn.wk, attn.wv, attn.wo};
  gradcheck(params, [&] {
    ad::Tensor y = ad::multi_head_attention(x, x, attn, mask);
    return ad::sum(ad::mul(y, y));
  });
}

TEST_CASE("causal self-attention is independent of future positions")
{
  auto gen = std::mt19937_64(24);
  ad::ParamMap pm;
  ad::DecoderLayerParams dec = ad::make_decoder_layer(pm, "dec", 8, 2, 16, gen);
  ad::Tensor memory = random_tensor({5, 8}, gen);
  std::vector<double> xd(4 * 8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto & v : xd) v = u(gen);
  const auto mask = ad::causal_mask(4);

  ad::NoGradGuard ng;
  ad::Tensor y1 = ad::decoder_layer(ad::Tensor::constant({4, 8}, xd), memory, dec, mask);
  // Perturb the last position only; rows 0..2 must not move at all.
  for (int j = 0; j < 8; ++j) xd[3 * 8 + j] += 10.0 * u(gen);
  ad::Tensor y2 = ad::decoder_layer(ad::Tensor::constant({4, 8}, xd), memory, dec, mask);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 8; ++j) REQUIRE(y1[i * 8 + j] == y2[i * 8 + j]);
}

TEST_CASE("encoder layer gradients match finite differences")
{
  auto gen = std::mt19937_64(25);
  ad::ParamMap pm;
  ad::EncoderLayerParams enc = ad::make_encoder_layer(pm, "enc", 4, 2, 8, gen);
  ad::Tensor x = random_tensor({3, 4}, gen);
  std::vector<ad::Tensor> params = {x};
  for (auto & p : pm.tensors()) params.push_back(p);
  gradcheck(params, [&] {
    ad::Tensor y = ad::encoder_layer(x, enc);
    return ad::sum(ad::mul(y, y));
  });
}

TEST_CASE("decoder layer gradients match finite differences")
{
  auto gen = std::mt19937_64(26);
  ad::ParamMap pm;
  ad::DecoderLayerParams dec = ad::make_decoder_layer(pm, "dec", 4, 2, 8, gen);
  ad::Tensor x = random_tensor({3, 4}, gen);
  ad::Tensor memory = random_tensor({4, 4}, gen);
  const auto mask = ad::causal_mask(3);
  std::vector<ad::Tensor> params = {x, memory};
  for (auto & p : pm.tensors()) params.push_back(p);
  gradcheck(params, [&] {
    ad::Tensor y = ad::decoder_layer(x, memory, dec, mask);
    return ad::sum(ad::mul(y, y));
  });
}

TEST_CASE("zeroed output projections make residual blocks the identity")
{
  auto gen = std::mt19937_64(27);
  ad::ParamMap pm;
  ad::EncoderLayerParams enc = ad::make_encoder_layer(pm, "enc", 8, 2, 16, gen);
  std::fill(enc.attn.wo.values().begin(), enc.attn.wo.values().end(), 0.0);
  std::fill(enc.ff.w2.values().begin(), enc.ff.w2.values().end(), 0.0);
  std::fill(enc.ff.b2.values().begin(), enc.ff.b2.values().end(), 0.0);
  ad::Tensor x = random_tensor({4, 8}, gen);
  ad::NoGradGuard ng;
  ad::Tensor y = ad::encoder_layer(x, enc);
  for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(y[i] == x[i]);
}

TEST_CASE("sinusoidal position table")
{
  ad::Tensor pe = ad::pos_encode_1d(32, 8);

  SECTION("position zero is the alternating zero-one row")
  {
    for (int j = 0; j < 8; j += 2) {
      REQUIRE(pe[j] == 0.0);
      REQUIRE(pe[j + 1] == 1.0);
    }
  }

  SECTION("values stay within the unit interval")
  {
    for (std::size_t i = 0; i < pe.size(); ++i) {
      REQUIRE(pe[i] <= 1.0);
      REQUIRE(pe[i] >= -1.0);
    }
  }

  SECTION("matches the closed form")
  {
    for (int pos : {1, 5, 31})
      for (int i = 0; i < 4; ++i) {
        const double f = std::pow(10000.0, -2.0 * i / 8.0);
        REQUIRE(pe[pos * 8 + 2 * i] == Catch::Approx(std::sin(pos * f)).margin(1e-15));
        REQUIRE(pe[pos * 8 + 2 * i + 1] == Catch::Approx(std::cos(pos * f)).margin(1e-15));
      }
  }

  SECTION("rows are pairwise distinct")
  {
    ad::Tensor big = ad::pos_encode_1d(64, 16);
    for (int a = 0; a < 64; ++a)
      for (int b = a + 1; b < 64; ++b) {
        double diff = 0.0;
        for (int j = 0; j < 16; ++j)
          diff = std::max(diff, std::abs(big[a * 16 + j] - big[b * 16 + j]));
        REQUIRE(diff > 1e-6);
      }
  }

  SECTION("odd width throws") { REQUIRE_THROWS_AS(ad::pos_encode_1d(4, 7), fairway::Error); }
}

TEST_CASE("grid position table")
{
  const int w = 5, l = 30, d = 16;
  ad::Tensor pe = ad::pos_encode_2d(w, l, d);
  ad::Tensor lat = ad::pos_encode_1d(w, d / 2);
  ad::Tensor lon = ad::pos_encode_1d(l, d / 2);

  SECTION("halves reproduce the axis tables")
  {
    for (int wi = 0; wi < w; ++wi)
      for (int li = 0; li < l; ++li) {
        const std::size_t row = static_cast<std::size_t>(wi) * l + li;
        for (int j = 0; j < d / 2; ++j) {
          REQUIRE(pe[row * d + j] == lat[wi * (d / 2) + j]);
          REQUIRE(pe[row * d + d / 2 + j] == lon[li * (d / 2) + j]);
        }
      }
  }

  SECTION("cell (0,0) is the concatenated zero-position row")
  {
    for (int j = 0; j < d; j += 2) {
      REQUIRE(pe[j] == 0.0);
      REQUIRE(pe[j + 1] == 1.0);
    }
  }

  SECTION("rows are pairwise distinct")
  {
    for (int a = 0; a < w * l; ++a)
      for (int b = a + 1; b < w * l; ++b) {
        double diff = 0.0;
        for (int j = 0; j < d; ++j) diff = std::max(diff, std::abs(pe[a * d + j] - pe[b * d + j]));
        REQUIRE(diff > 1e-9);
      }
  }

  SECTION("width not divisible by four throws")
  {
    REQUIRE_THROWS_AS(ad::pos_encode_2d(2, 3, 6), fairway::Error);
  }
}

TEST_CASE("gradient clipping")
{
  ad::ParamMap pm;
  pm.add("a", ad::Tensor::param({2}, {0.0, 0.0}));
  pm.add("b", ad::Tensor::param({1}, {0.0}));
  pm.at("a").grad() = {3.0, 4.0};
  pm.at("b").grad() = {12.0};  // global norm = 13

  SECTION("above the threshold the norm is rescaled to the threshold")
  {
    const double pre = ad::clip_global_norm(pm, 1.0);
    REQUIRE(pre == Catch::Approx(13.0));
    REQUIRE(ad::global_grad_norm(pm) == Catch::Approx(1.0).margin(1e-12));
  }

  SECTION("below the threshold gradients are untouched")
  {
    ad::clip_global_norm(pm, 100.0);
    REQUIRE(pm.at("a").grad()[0] == 3.0);
    REQUIRE(pm.at("b").grad()[0] == 12.0);
  }

  SECTION("non-finite gradients throw")
  {
    pm.at("b").grad()[0] = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(ad::clip_global_norm(pm, 1.0), fairway::NonFinite);
  }
}

TEST_CASE("adam drives a quadratic to its minimum")
{
  ad::ParamMap pm;
  ad::Tensor x = pm.add("x", ad::Tensor::param({2}, {5.0, -4.0}));
  ad::Tensor target = ad::Tensor::constant({2}, {3.0, -1.0});
  ad::Adam opt(pm, 0.05);
  double final_norm = 1.0;
  for (int step = 0; step < 500; ++step) {
    pm.zero_grad();
    ad::Tensor e = ad::sub(x, target);
    ad::Tensor loss = ad::sum(ad::mul(e, e));
    ad::backward(loss);
    final_norm = ad::global_grad_norm(pm);
    opt.step();
  }
  REQUIRE(final_norm < 1e-6);
  REQUIRE(x[0] == Catch::Approx(3.0).margin(1e-6));
  REQUIRE(x[1] == Catch::Approx(-1.0).margin(1e-6));
}

TEST_CASE("adam raises on non-finite gradients")
{
  ad::ParamMap pm;
  pm.add("x", ad::Tensor::param({1}, {1.0}));
  pm.at("x").grad()[0] = std::numeric_limits<double>::infinity();
  ad::Adam opt(pm);
  REQUIRE_THROWS_AS(opt.step(), fairway::NonFinite);
}

TEST_CASE("parameter registry preserves registration order")
{
  ad::ParamMap pm;
  pm.add("z.last", ad::Tensor::param({1}, {1.0}));
  pm.add("a.first", ad::Tensor::param({2}, {2.0, 3.0}));
  REQUIRE(pm.names() == std::vector<std::string>{"z.last", "a.first"});
  REQUIRE(pm.scalar_count() == 3);
  REQUIRE_THROWS_AS(pm.add("z.last", ad::Tensor::param({1}, {0.0})), fairway::Error);
  REQUIRE_THROWS_AS(pm.at("missing"), fairway::Error);
}
