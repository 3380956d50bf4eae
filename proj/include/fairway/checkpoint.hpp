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

#ifndef FAIRWAY__CHECKPOINT_HPP_
#define FAIRWAY__CHECKPOINT_HPP_

#include "fairway/model.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace fairway::ckpt
{

inline constexpr const char * kFormat = "fairway-checkpoint-v1";

namespace detail
{

inline void append_le(double v, std::string & out)
{
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

inline double read_le(const std::string & blob, std::size_t i)
{
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b)
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(blob[8 * i + b])) << (8 * b);
  return std::bit_cast<double>(bits);
}

inline nlohmann::json config_json(const model::ModelConfig & c)
{
  return {
    {"d", c.d},
    {"heads", c.heads},
    {"enc_layers", c.enc_layers},
    {"dec_layers", c.dec_layers},
    {"stt_layers", c.stt_layers},
    {"ff_mult", c.ff_mult},
    {"t_obs", c.t_obs},
    {"horizon", c.horizon},
    {"c1", c.c1},
    {"c2", c.c2},
    {"lat_span", c.lat_span},
    {"lon_min", c.lon_min},
    {"lon_max", c.lon_max},
    {"dt", c.dt},
    {"ctx_segments", c.ctx_segments},
    {"ctx_spacing", c.ctx_spacing},
    {"grid",
     {{"w", c.grid.w},
      {"l", c.grid.l},
      {"lat_cell", c.grid.lat_cell},
      {"lon_cell", c.grid.lon_cell},
      {"ahead_fraction", c.grid.ahead_fraction}}},
  };
}

inline model::ModelConfig config_from_json(const nlohmann::json & j)
{
  model::ModelConfig c;
  c.d = j.at("d").get<int>();
  c.heads = j.at("heads").get<int>();
  c.enc_layers = j.at("enc_layers").get<int>();
  c.dec_layers = j.at("dec_layers").get<int>();
  c.stt_layers = j.at("stt_layers").get<int>();
  c.ff_mult = j.at("ff_mult").get<int>();
  c.t_obs = j.at("t_obs").get<int>();
  c.horizon = j.at("horizon").get<int>();
  c.c1 = j.at("c1").get<int>();
  c.c2 = j.at("c2").get<int>();
  c.lat_span = j.at("lat_span").get<double>();
  c.lon_min = j.at("lon_min").get<double>();
  c.lon_max = j.at("lon_max").get<double>();
  c.dt = j.at("dt").get<double>();
  c.ctx_segments = j.at("ctx_segments").get<int>();
  c.ctx_spacing = j.at("ctx_spacing").get<double>();
  const auto & g = j.at("grid");
  c.grid.w = g.at("w").get<int>();
  c.grid.l = g.at("l").get<int>();
  c.grid.lat_cell = g.at("lat_cell").get<double>();
  c.grid.lon_cell = g.at("lon_cell").get<double>();
  c.grid.ahead_fraction = g.at("ahead_fraction").get<double>();
  return c;
}

}  // namespace detail

/// Writes `base`.json (manifest: variant, hyperparameters, codec edges, and
/// the parameter table) and `base`.bin (all parameter values as little-endian
/// float64, flat, in manifest order).
inline void save_checkpoint(const model::Model & m, const std::string & base)
{
  const nav::LabelCodec codec = m.cfg.codec();
  nlohmann::json manifest = {
    {"format", kFormat},
    {"variant", model::to_string(m.cfg.variant)},
    {"config", detail::config_json(m.cfg)},
    {"codec", {{"lat_edges", codec.lat_edges}, {"lon_edges", codec.lon_edges}}},
  };
  auto & params = manifest["params"] = nlohmann::json::array();
  std::string blob;
  blob.reserve(m.pm.scalar_count() * 8);
  for (std::size_t i = 0; i < m.pm.names().size(); ++i) {
    const ad::Tensor & t = m.pm.tensors()[i];
    params.push_back({{"name", m.pm.names()[i]}, {"shape", t.shape()}});
    for (double v : t.values()) detail::append_le(v, blob);
  }

  std::ofstream mf(base + ".json");
  mf << manifest.dump(2) << "\n";
  if (!mf) throw Error("cannot write " + base + ".json");
  std::ofstream bf(base + ".bin", std::ios::binary);
  bf.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!bf) throw Error("cannot write " + base + ".bin");
}

/// Rebuilds the model named by the manifest and restores its parameters.
/// Any disagreement between manifest, blob, and the regenerated architecture
/// is a ManifestMismatch.
inline model::Model load_checkpoint(const std::string & base)
{
  std::ifstream mf(base + ".json");
  if (!mf) throw Error("cannot read " + base + ".json");
  nlohmann::json manifest = nlohmann::json::parse(mf);
  if (manifest.value("format", "") != kFormat)
    throw ManifestMismatch("unknown checkpoint format");

  model::ModelConfig cfg = detail::config_from_json(manifest.at("config"));
  cfg.variant = model::variant_from_string(manifest.at("variant").get<std::string>());
  model::Model m = model::build_variant(cfg, 0);

  const nav::LabelCodec codec = cfg.codec();
  if (manifest.at("codec").at("lat_edges").get<std::vector<double>>() != codec.lat_edges ||
      manifest.at("codec").at("lon_edges").get<std::vector<double>>() != codec.lon_edges)
    throw ManifestMismatch("codec edges disagree with the stored configuration");

  const auto & params = manifest.at("params");
  if (params.size() != m.pm.names().size())
    throw ManifestMismatch("parameter count disagrees with the manifest");

  std::ifstream bf(base + ".bin", std::ios::binary);
  if (!bf) throw Error("cannot read " + base + ".bin");
  std::string blob((std::istreambuf_iterator<char>(bf)), std::istreambuf_iterator<char>());
  if (blob.size() != m.pm.scalar_count() * 8)
    throw ManifestMismatch("parameter blob size disagrees with the manifest");

  std::size_t offset = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    ad::Tensor & t = m.pm.tensors()[i];
    if (params[i].at("name").get<std::string>() != m.pm.names()[i] ||
        params[i].at("shape").get<std::vector<int>>() != t.shape())
      throw ManifestMismatch("parameter table disagrees at " + m.pm.names()[i]);
    for (auto & v : t.values()) v = detail::read_le(blob, offset++);
  }
  return m;
}

}  // namespace fairway::ckpt

#endif  // FAIRWAY__CHECKPOINT_HPP_
