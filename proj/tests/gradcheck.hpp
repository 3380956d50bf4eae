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

#ifndef TESTS__GRADCHECK_HPP_
#define TESTS__GRADCHECK_HPP_

#include "fairway/tensor.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

namespace testutil
{

// Compares reverse-mode gradients of a scalar-valued closure against central
// finite differences over every element of every listed parameter. The
// closure must rebuild its graph from the parameters' current values.
template <typename F>
void gradcheck(
  std::vector<fairway::ad::Tensor> params, F && forward, double eps = 1e-5, double tol = 1e-5)
{
  namespace ad = fairway::ad;
  for (auto & p : params) std::fill(p.grad().begin(), p.grad().end(), 0.0);
  ad::Tensor loss = forward();
  REQUIRE(loss.size() == 1);
  ad::backward(loss);
  std::vector<std::vector<double>> analytic;
  for (auto & p : params) analytic.push_back(p.grad());

  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    auto & vals = params[pi].values();
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double keep = vals[i];
      double lp, lm;
      {
        ad::NoGradGuard ng;
        vals[i] = keep + eps;
        lp = forward().item();
        vals[i] = keep - eps;
        lm = forward().item();
      }
      vals[i] = keep;
      const double fd = (lp - lm) / (2.0 * eps);
      const double an = analytic[pi][i];
      const double rel =
        std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)});
      INFO("param " << pi << " element " << i << " analytic " << an << " fd " << fd);
      REQUIRE(rel < tol);
    }
  }
}

inline fairway::ad::Tensor random_tensor(
  fairway::ad::Shape shape, std::mt19937_64 & gen, double lo = -1.0, double hi = 1.0)
{
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> d(fairway::ad::shape_size(shape));
  for (auto & x : d) x = u(gen);
  return fairway::ad::Tensor::param(std::move(shape), std::move(d));
}

}  // namespace testutil

#endif  // TESTS__GRADCHECK_HPP_
