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

#include "fairway/tensor.hpp"
#include "gradcheck.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

namespace ad = fairway::ad;
using testutil::gradcheck;
using testutil::random_tensor;

TEST_CASE("elementwise ops match finite differences")
{
  auto gen = std::mt19937_64(7);
  ad::Tensor a = random_tensor({3, 4}, gen);
  ad::Tensor b = random_tensor({3, 4}, gen);

  SECTION("add") { gradcheck({a, b}, [&] { return ad::sum(ad::add(a, b)); }); }
  SECTION("sub") { gradcheck({a, b}, [&] { return ad::sum(ad::sub(a, b)); }); }
  SECTION("mul") { gradcheck({a, b}, [&] { return ad::sum(ad::mul(a, b)); }); }
  SECTION("scale") { gradcheck({a}, [&] { return ad::sum(ad::scale(a, -2.5)); }); }
  SECTION("exp") { gradcheck({a}, [&] { return ad::sum(ad::exp(a)); }); }
  SECTION("gelu") { gradcheck({a}, [&] { return ad::sum(ad::gelu(a)); }); }
  SECTION("mean") { gradcheck({a}, [&] { return ad::mean(ad::mul(a, a)); }); }
}

TEST_CASE("scalar broadcast multiply matches finite differences")
{
  auto gen = std::mt19937_64(8);
  ad::Tensor s = random_tensor({1}, gen);
  ad::Tensor a = random_tensor({2, 5}, gen);
  gradcheck({s, a}, [&] { return ad::sum(ad::smul(s, a)); });
}

TEST_CASE("matrix products match finite differences")
{
  auto gen = std::mt19937_64(9);
  ad::Tensor a = random_tensor({3, 4}, gen);
  ad::Tensor b = random_tensor({4, 5}, gen);
  ad::Tensor c = random_tensor({5, 4}, gen);
  ad::Tensor w = random_tensor({3, 5}, gen);

  SECTION("matmul")
  {
    gradcheck({a, b}, [&] { return ad::sum(ad::mul(ad::matmul(a, b), ad::matmul(a, b))); });
  }
  SECTION("matmul_nt")
  {
    gradcheck({a, c}, [&] {
      ad::Tensor y = ad::matmul_nt(a, c);
      return ad::sum(ad::mul(y, w));
    });
  }
  SECTION("matmul_nt equals matmul with explicit transpose")
  {
    ad::Tensor y1 = ad::matmul_nt(a, c);
    std::vector<double> ct(c.size());
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 4; ++j) ct[j * 5 + i] = c.values()[i * 4 + j];
    ad::Tensor y2 = ad::matmul(a, ad::Tensor::constant({4, 5}, ct));
    for (std::size_t i = 0; i < y1.size(); ++i) REQUIRE(y1[i] == Catch::Approx(y2[i]).margin(0));
  }
}

TEST_CASE("row vector bias matches finite differences")
{
  auto gen = std::mt19937_64(10);
  ad::Tensor x = random_tensor({4, 3}, gen);
  ad::Tensor b = random_tensor({3}, gen);
  gradcheck({x, b}, [&] {
    ad::Tensor y = ad::add_rowvec(x, b);
    return ad::sum(ad::mul(y, y));
  });
}

TEST_CASE("gather accumulates gradients over repeated rows")
{
  auto gen = std::mt19937_64(11);
  ad::Tensor table = random_tensor({5, 3}, gen);
  const std::vector<int> idx = {0, 2, 2, 4, 0, 2};
  gradcheck({table}, [&] {
    ad::Tensor y = ad::gather_rows(table, idx);
    return ad::sum(ad::mul(y, y));
  });

  SECTION("out of range throws")
  {
    REQUIRE_THROWS_AS(ad::gather_rows(table, {5}), fairway::IndexOutOfRange);
    REQUIRE_THROWS_AS(ad::gather_rows(table, {-1}), fairway::IndexOutOfRange);
  }
}

TEST_CASE("slicing and concatenation match finite differences")
{
  auto gen = std::mt19937_64(12);
  ad::Tensor x = random_tensor({4, 6}, gen);
  ad::Tensor y = random_tensor({4, 2}, gen);
  ad::Tensor z = random_tensor({2, 6}, gen);

  SECTION("slice_cols")
  {
    gradcheck({x}, [&] {
      ad::Tensor s = ad::slice_cols(x, 1, 3);
      return ad::sum(ad::mul(s, s));
    });
  }
  SECTION("slice_rows")
  {
    gradcheck({x}, [&] {
      ad::Tensor s = ad::slice_rows(x, 1, 2);
      return ad::sum(ad::mul(s, s));
    });
  }
  SECTION("concat_cols")
  {
    gradcheck({x, y}, [&] {
      ad::Tensor s = ad::concat_cols({x, y});
      return ad::sum(ad::mul(s, s));
    });
  }
  SECTION("concat_rows")
  {
    gradcheck({x, z}, [&] {
      ad::Tensor s = ad::concat_rows({x, z});
      return ad::sum(ad::mul(s, s));
    });
  }
  SECTION("reshape")
  {
    gradcheck({x}, [&] {
      ad::Tensor s = ad::reshape(x, {6, 4});
      return ad::sum(ad::mul(s, s));
    });
  }
  SECTION("slice of concat reproduces the part")
  {
    ad::Tensor s = ad::slice_cols(ad::concat_cols({x, y}), 6, 2);
    for (std::size_t i = 0; i < s.size(); ++i) REQUIRE(s[i] == y[i]);
  }
}

TEST_CASE("layer norm matches finite differences")
{
  auto gen = std::mt19937_64(13);
  ad::Tensor x = random_tensor({3, 6}, gen);
  ad::Tensor g = random_tensor({6}, gen, 0.5, 1.5);
  ad::Tensor b = random_tensor({6}, gen);
  gradcheck({x, g, b}, [&] {
    ad::Tensor y = ad::layer_norm(x, g, b);
    return ad::sum(ad::mul(y, y));
  });

  SECTION("unit gain and zero bias give zero mean and unit variance rows")
  {
    ad::Tensor y = ad::layer_norm(
      x, ad::Tensor::constant({6}, std::vector<double>(6, 1.0)), ad::Tensor::zeros({6}));
    for (int i = 0; i < 3; ++i) {
      double mu = 0.0, var = 0.0;
      for (int j = 0; j < 6; ++j) mu += y[i * 6 + j];
      mu /= 6;
      for (int j = 0; j < 6; ++j) var += (y[i * 6 + j] - mu) * (y[i * 6 + j] - mu);
      var /= 6;
      REQUIRE(std::abs(mu) < 1e-12);
      REQUIRE(var == Catch::Approx(1.0).margin(1e-4));
    }
  }
}

TEST_CASE("softmax rows")
{
  auto gen = std::mt19937_64(14);
  ad::Tensor x = random_tensor({4, 5}, gen, -3.0, 3.0);

  SECTION("rows sum to one")
  {
    ad::Tensor y = ad::softmax_rows(x);
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (int j = 0; j < 5; ++j) s += y[i * 5 + j];
      REQUIRE(std::abs(s - 1.0) < 1e-12);
    }
  }

  SECTION("gradients match finite differences")
  {
    ad::Tensor w = random_tensor({4, 5}, gen);
    gradcheck({x}, [&] { return ad::sum(ad::mul(ad::softmax_rows(x), w)); });
  }

  SECTION("masked entries are exactly zero")
  {
    std::vector<std::uint8_t> mask(20, 1);
    mask[2] = 0;
    mask[7] = 0;
    mask[8] = 0;
    ad::Tensor y = ad::softmax_rows(x, mask);
    REQUIRE(y[2] == 0.0);
    REQUIRE(y[7] == 0.0);
    REQUIRE(y[8] == 0.0);
    for (int i = 0; i < 4; ++i) {
      double s = 0.0;
      for (int j = 0; j < 5; ++j) s += y[i * 5 + j];
      REQUIRE(std::abs(s - 1.0) < 1e-12);
    }
  }

  SECTION("masked gradients match finite differences")
  {
    std::vector<std::uint8_t> mask(20, 1);
    mask[3] = 0;
    mask[11] = 0;
    ad::Tensor w = random_tensor({4, 5}, gen);
    gradcheck({x}, [&] { return ad::sum(ad::mul(ad::softmax_rows(x, mask), w)); });
  }

  SECTION("a single unmasked entry gets weight exactly one")
  {
    std::vector<std::uint8_t> mask(20, 0);
    mask[0 * 5 + 3] = 1;
    mask[1 * 5 + 0] = 1;
    mask[2 * 5 + 4] = 1;
    mask[3 * 5 + 1] = 1;
    ad::Tensor y = ad::softmax_rows(x, mask);
    REQUIRE(y[0 * 5 + 3] == 1.0);
    REQUIRE(y[1 * 5 + 0] == 1.0);
    REQUIRE(y[2 * 5 + 4] == 1.0);
    REQUIRE(y[3 * 5 + 1] == 1.0);
  }

  SECTION("a fully masked row throws")
  {
    std::vector<std::uint8_t> mask(20, 1);
    for (int j = 0; j < 5; ++j) mask[2 * 5 + j] = 0;
    REQUIRE_THROWS_AS(ad::softmax_rows(x, mask), fairway::DegenerateAttention);
  }
}

TEST_CASE("cross entropy")
{
  SECTION("uniform logits over four classes give ln 4")
  {
    ad::Tensor logits = ad::Tensor::constant({3, 4}, std::vector<double>(12, 0.7));
    ad::Tensor l = ad::softmax_xent(logits, {0, 2, 3});
    REQUIRE(std::abs(l.item() - std::log(4.0)) < 1e-12);
  }

  SECTION("matches a direct log-sum-exp evaluation")
  {
    auto gen = std::mt19937_64(15);
    ad::Tensor logits = random_tensor({6, 5}, gen, -4.0, 4.0);
    const std::vector<int> labels = {1, 0, 4, 2, 2, 3};
    double want = 0.0;
    for (int i = 0; i < 6; ++i) {
      double z = 0.0;
      for (int j = 0; j < 5; ++j) z += std::exp(logits[i * 5 + j]);
      want -= logits[i * 5 + labels[i]] - std::log(z);
    }
    want /= 6;
    REQUIRE(std::abs(ad::softmax_xent(logits, labels).item() - want) < 1e-12);
  }

  SECTION("is stable under large logit offsets")
  {
    ad::Tensor a = ad::Tensor::constant({1, 3}, {1.0, 2.0, 3.0});
    ad::Tensor b = ad::Tensor::constant({1, 3}, {1001.0, 1002.0, 1003.0});
    const double la = ad::softmax_xent(a, {1}).item();
    const double lb = ad::softmax_xent(b, {1}).item();
    REQUIRE(std::isfinite(lb));
    REQUIRE(std::abs(la - lb) < 1e-9);
  }

  SECTION("gradients match finite differences")
  {
    auto gen = std::mt19937_64(16);
    ad::Tensor logits = random_tensor({4, 3}, gen, -2.0, 2.0);
    gradcheck({logits}, [&] { return ad::softmax_xent(logits, {2, 0, 1, 1}); });
  }

  SECTION("bad labels throw")
  {
    ad::Tensor logits = ad::Tensor::zeros({2, 3});
    REQUIRE_THROWS_AS(ad::softmax_xent(logits, {0, 3}), fairway::IndexOutOfRange);
  }
}

TEST_CASE("gradients accumulate through shared subexpressions")
{
  // loss = sum((x + x) * x) = 2 * sum(x^2), so dloss/dx = 4x.
  ad::Tensor x = ad::Tensor::param({2, 2}, {1.0, -2.0, 0.5, 3.0});
  ad::Tensor loss = ad::sum(ad::mul(ad::add(x, x), x));
  ad::backward(loss);
  for (std::size_t i = 0; i < x.size(); ++i)
    REQUIRE(x.grad()[i] == Catch::Approx(4.0 * x[i]).margin(1e-14));
}

TEST_CASE("backward accumulates across calls until gradients are zeroed")
{
  ad::Tensor x = ad::Tensor::param({1}, {2.0});
  auto run = [&] {
    ad::Tensor loss = ad::mul(x, x);
    ad::backward(loss);
  };
  run();
  REQUIRE(x.grad()[0] == Catch::Approx(4.0));
  run();
  REQUIRE(x.grad()[0] == Catch::Approx(8.0));
  std::vector<ad::Tensor> ps = {x};
  ad::zero_grad(ps);
  REQUIRE(x.grad()[0] == 0.0);
}

TEST_CASE("graph construction is disabled under the no-grad guard")
{
  ad::Tensor x = ad::Tensor::param({2}, {1.0, 2.0});
  {
    ad::NoGradGuard ng;
    ad::Tensor y = ad::sum(ad::mul(x, x));
    REQUIRE_FALSE(y.needs_grad());
  }
  ad::Tensor y = ad::sum(ad::mul(x, x));
  REQUIRE(y.needs_grad());
}

TEST_CASE("backward on a non-scalar throws")
{
  ad::Tensor x = ad::Tensor::param({2}, {1.0, 2.0});
  ad::Tensor y = ad::mul(x, x);
  REQUIRE_THROWS_AS(ad::backward(y), fairway::Error);
}

TEST_CASE("constants do not collect gradients")
{
  ad::Tensor c = ad::Tensor::constant({2}, {1.0, 2.0});
  ad::Tensor x = ad::Tensor::param({2}, {3.0, 4.0});
  ad::Tensor loss = ad::sum(ad::mul(c, x));
  ad::backward(loss);
  REQUIRE(x.grad()[0] == Catch::Approx(1.0));
  REQUIRE(x.grad()[1] == Catch::Approx(2.0));
  REQUIRE_FALSE(c.needs_grad());
}

TEST_CASE("shape validation")
{
  ad::Tensor a = ad::Tensor::zeros({2, 3});
  ad::Tensor b = ad::Tensor::zeros({3, 2});
  REQUIRE_THROWS_AS(ad::add(a, b), fairway::Error);
  REQUIRE_THROWS_AS(ad::matmul(a, a), fairway::Error);
  REQUIRE_THROWS_AS(ad::reshape(a, {4, 2}), fairway::Error);
  REQUIRE_THROWS_AS(ad::slice_cols(a, 2, 2), fairway::IndexOutOfRange);
  REQUIRE_THROWS_AS(ad::Tensor::constant({2, 2}, {1.0}), fairway::Error);
}

TEST_CASE("dropout")
{
  ad::Tensor x = ad::Tensor::param({4, 4}, std::vector<double>(16, 1.0));
  SECTION("rate zero is the identity")
  {
    std::uint64_t state = 123;
    ad::Tensor y = ad::dropout(x, 0.0, state);
    REQUIRE(y.node() == x.node());
  }
  SECTION("kept entries are rescaled")
  {
    std::uint64_t state = 123;
    ad::Tensor y = ad::dropout(x, 0.5, state);
    for (std::size_t i = 0; i < y.size(); ++i)
      REQUIRE((y[i] == 0.0 || y[i] == Catch::Approx(2.0)));
  }
}
