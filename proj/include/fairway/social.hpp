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

#ifndef FAIRWAY__SOCIAL_HPP_
#define FAIRWAY__SOCIAL_HPP_

#include "fairway/codec.hpp"
#include "fairway/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <vector>

namespace fairway::social
{

/// Cell layout of one occupancy grid around the target. The lateral axis is
/// centered on the target (cell W/2 straddles zero offset); the longitudinal
/// axis is split into behind and ahead cells, with "ahead" following the
/// target's direction of navigation. Cells are half-open on the upper side.
struct GridSpec
{
  int w = 5;
  int l = 30;
  double lat_cell = 25.0;  // m
  double lon_cell = 75.0;  // m
  double ahead_fraction = 2.0 / 3.0;

  int ahead_cells() const { return static_cast<int>(std::lround(l * ahead_fraction)); }
  int behind_cells() const { return l - ahead_cells(); }

  void validate(const pipe::SelectionWindow & win = {}) const
  {
    if (w < 1 || l < 1) throw Error("grid: cell counts must be at least 1");
    if (lat_cell <= 0.0 || lon_cell <= 0.0) throw Error("grid: cell extents must be positive");
    if (ahead_cells() < 1 || behind_cells() < 0) throw Error("grid: bad ahead fraction");
    if (ahead_cells() * lon_cell < win.ahead_km * nav::kMetersPerKm - 1e-9 ||
        behind_cells() * lon_cell < win.behind_km * nav::kMetersPerKm - 1e-9)
      throw Error("grid: longitudinal span does not cover the selection window");
  }

  /// Maps a directed target-relative offset (lateral m, longitudinal m) to
  /// cell indices, or nothing when it falls outside the grid.
  std::optional<std::pair<int, int>> cell_of(double dlat, double dlon) const
  {
    const int wi = static_cast<int>(std::floor(dlat / lat_cell + 0.5)) + w / 2;
    const int li = static_cast<int>(std::floor(dlon / lon_cell)) + behind_cells();
    if (wi < 0 || wi >= w || li < 0 || li >= l) return std::nullopt;
    return std::make_pair(wi, li);
  }
};

/// Stack of per-step occupancy grids. Slice t (0-based) belongs to the
/// dislocation step from track point t to t+1; its cells hold the per-step
/// change of each neighbor's target-relative offset, written at the cell the
/// neighbor occupies at point t+1.
struct SocialTensor
{
  int w = 0;
  int l = 0;
  int t_obs = 0;
  std::vector<double> values;      // (w, l, t_obs, 2), lateral then longitudinal
  std::vector<std::uint8_t> mask;  // (w, l, t_obs)

  std::size_t cell_index(int wi, int li, int t) const
  {
    return (static_cast<std::size_t>(wi) * l + li) * t_obs + t;
  }

  double value(int wi, int li, int t, int c) const
  {
    return values[cell_index(wi, li, t) * 2 + c];
  }

  bool occupied(int wi, int li, int t) const { return mask[cell_index(wi, li, t)] != 0; }

  bool empty_slice(int t) const
  {
    for (int wi = 0; wi < w; ++wi)
      for (int li = 0; li < l; ++li)
        if (occupied(wi, li, t)) return false;
    return true;
  }

  void check() const
  {
    for (int wi = 0; wi < w; ++wi)
      for (int li = 0; li < l; ++li)
        for (int t = 0; t < t_obs; ++t) {
          const std::size_t i = cell_index(wi, li, t);
          if (!mask[i]) {
            if (values[2 * i] != 0.0 || values[2 * i + 1] != 0.0)
              throw Error("social tensor: value at unoccupied cell");
          } else if (!std::isfinite(values[2 * i]) || !std::isfinite(values[2 * i + 1])) {
            throw NonFinite("social tensor: non-finite occupied cell");
          }
        }
  }
};

/// One neighbor's candidacy for a cell: its offset change and its distance
/// to the target at the written step.
struct CellCandidate
{
  std::size_t neighbor_index;
  double dist2;  // squared Euclidean offset at the written step
  double dlat_rate;
  double dlon_rate;
};

/// Nearest neighbor wins; exact distance ties go to the earliest index.
inline std::size_t collide(const std::vector<CellCandidate> & entries)
{
  if (entries.empty()) throw Error("collide: no entries");
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].dist2 < entries[best].dist2) best = i;
  return best;
}

/// Directed target-relative offset of a neighbor state, in meters.
inline std::pair<double, double> relative_offset(
  const nav::NavFrameState & target, const nav::NavFrameState & neighbor, pipe::Direction dir)
{
  const double sign = dir == pipe::Direction::upstream ? 1.0 : -1.0;
  const double dlat = (neighbor.f - target.f) * sign;
  const double dlon = (neighbor.km - target.km) * nav::kMetersPerKm * sign;
  return {dlat, dlon};
}

/// Builds the social tensor over the observation part of a sample. A
/// neighbor contributes to slice t only when observed at both points t and
/// t+1; the contribution is the change of its relative offset, placed at its
/// cell at point t+1.
inline SocialTensor build(const pipe::SequenceSample & sample, const GridSpec & spec)
{
  SocialTensor st;
  st.w = spec.w;
  st.l = spec.l;
  st.t_obs = sample.t_obs;
  st.values.assign(static_cast<std::size_t>(spec.w) * spec.l * sample.t_obs * 2, 0.0);
  st.mask.assign(static_cast<std::size_t>(spec.w) * spec.l * sample.t_obs, 0);

  std::vector<std::vector<CellCandidate>> cells(st.mask.size());
  for (std::size_t ni = 0; ni < sample.neighbors.size(); ++ni) {
    const auto & nb = sample.neighbors[ni];
    for (int t = 0; t < sample.t_obs; ++t) {
      if (!nb.steps[t] || !nb.steps[t + 1]) continue;
      const auto before =
        relative_offset(sample.target[t].s, nb.steps[t]->s, sample.dir);
      const auto after =
        relative_offset(sample.target[t + 1].s, nb.steps[t + 1]->s, sample.dir);
      const auto cell = spec.cell_of(after.first, after.second);
      if (!cell) continue;
      const double dist2 = after.first * after.first + after.second * after.second;
      cells[st.cell_index(cell->first, cell->second, t)].push_back(
        {ni, dist2, after.first - before.first, after.second - before.second});
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].empty()) continue;
    const CellCandidate & win = cells[i][collide(cells[i])];
    st.values[2 * i] = win.dlat_rate;
    st.values[2 * i + 1] = win.dlon_rate;
    st.mask[i] = 1;
  }
  return st;
}

/// Writes one CSV row per cell and step: t, w, l, occupied, lat_rate,
/// lon_rate. Intended for eyeballing grids, not for ingestion.
inline void dump_csv(const SocialTensor & st, const std::string & path)
{
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << "t,w,l,occupied,lat_rate,lon_rate\n";
  for (int t = 0; t < st.t_obs; ++t)
    for (int wi = 0; wi < st.w; ++wi)
      for (int li = 0; li < st.l; ++li)
        out << t << ',' << wi << ',' << li << ',' << (st.occupied(wi, li, t) ? 1 : 0) << ','
            << st.value(wi, li, t, 0) << ',' << st.value(wi, li, t, 1) << "\n";
}

}  // namespace fairway::social

#endif  // FAIRWAY__SOCIAL_HPP_
