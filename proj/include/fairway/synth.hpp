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

#ifndef FAIRWAY__SYNTH_HPP_
#define FAIRWAY__SYNTH_HPP_

#include "fairway/pipeline.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace fairway::synth
{

struct SegmentSpec
{
  double length_m = 0.0;
  double curvature = 0.0;  // 1/m, positive bends left
};

/**
 * @brief Traffic scenario: geometry, fleet mix, and the sidestep rule.
 *
 * Every scene holds one upstream target that keeps a preferred lateral lane.
 * When a neighbor lies ahead within the trigger distance, the target shifts
 * toward the right border by the sidestep offset and steers back once the
 * neighbor has passed. That rule is the causal ground truth the social
 * ablation measures against.
 */
struct ScenarioConfig
{
  std::vector<SegmentSpec> segments = {
    {2000.0, 0.0}, {2500.0, 1.0 / 3000.0}, {1500.0, 0.0}, {2500.0, -1.0 / 2500.0},
    {2000.0, 0.0}};
  double width = 150.0;
  double km_origin = 0.0;
  double km_per_m = 1e-3;

  double p_empty = 0.2;      // no neighbor
  double p_overtaking = 0.3; // slow same-direction neighbor; the rest meet head-on
  double up_speed_lo = 2.2, up_speed_hi = 3.4;      // m/s, targets
  double down_speed_lo = 3.0, down_speed_hi = 4.2;  // m/s, oncoming neighbors
  double slow_speed_lo = 1.0, slow_speed_hi = 1.6;  // m/s, overtaken neighbors
  double lane_lo = 55.0, lane_hi = 95.0;            // preferred lateral band, m

  double trigger_m = 600.0;
  double sidestep_m = 20.0;
  double return_rate = 4.0;  // m per simulation step toward the lateral target

  double speed_noise = 0.03;    // m/s per simulation step
  double lateral_noise = 0.25;  // m per simulation step

  double fix_dt = 20.0;       // s between emitted fixes
  double duration_s = 780.0;  // per scene
  double scene_gap_s = 7200.0;
  double start_km_lo = 1.0, start_km_hi = 2.0;
  double pass_time_lo = 360.0, pass_time_hi = 560.0;  // s, when the neighbor passes

  std::uint64_t seed = 7;

  double length_m() const
  {
    double total = 0.0;
    for (const auto & s : segments) total += s.length_m;
    return total;
  }

  void validate() const
  {
    if (segments.empty() || length_m() <= 0.0) throw Error("scenario: empty geometry");
    for (const auto & s : segments)
      if (s.length_m <= 0.0) throw Error("scenario: segment lengths must be positive");
    if (width <= 0.0 || km_per_m <= 0.0) throw Error("scenario: bad fairway dimensions");
    if (p_empty < 0.0 || p_overtaking < 0.0 || p_empty + p_overtaking > 1.0)
      throw Error("scenario: scene probabilities must be a sub-distribution");
    for (double v : {up_speed_lo, down_speed_lo, slow_speed_lo})
      if (v <= 0.0) throw Error("scenario: speeds must be positive");
    if (up_speed_hi < up_speed_lo || down_speed_hi < down_speed_lo ||
        slow_speed_hi < slow_speed_lo)
      throw Error("scenario: speed ranges inverted");
    if (trigger_m <= 0.0 || trigger_m > pipe::SelectionWindow{}.ahead_km * 1000.0)
      throw Error("scenario: trigger must lie within the neighbor-selection span");
    if (sidestep_m <= 0.0 || return_rate <= 0.0) throw Error("scenario: bad sidestep rule");
    if (lane_lo - sidestep_m <= 0.0 || lane_hi >= width)
      throw Error("scenario: lanes must keep the sidestep inside the fairway");
    if (speed_noise < 0.0 || lateral_noise < 0.0) throw Error("scenario: negative noise");
    if (fix_dt <= 0.0 || duration_s < 2.0 * fix_dt) throw Error("scenario: bad timing");
    if (pass_time_lo <= 0.0 || pass_time_hi < pass_time_lo ||
        pass_time_hi > duration_s)
      throw Error("scenario: passing times must fall inside the scene");
  }
};

inline nav::FairwayGeometry make_geometry(const ScenarioConfig & cfg)
{
  std::vector<Vec2> center;
  Vec2 p{0.0, 0.0};
  double heading = 0.0;
  const double step = 25.0;
  center.push_back(p);
  for (const auto & s : cfg.segments) {
    double done = 0.0;
    while (done < s.length_m) {
      const double d = std::min(step, s.length_m - done);
      heading += s.curvature * d;
      p += Vec2{std::cos(heading), std::sin(heading)} * d;
      center.push_back(p);
      done += d;
    }
  }
  auto offset = [&](double off) {
    std::vector<Vec2> pts(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
      const Vec2 t =
        (i + 1 < center.size() ? center[i + 1] - center[i] : center[i] - center[i - 1])
          .normalized();
      pts[i] = center[i] + off * t.perp_left();
    }
    return nav::Polyline(pts);
  };
  nav::FairwayGeometry g;
  g.centerline = nav::Polyline(center);
  g.right_border = offset(-cfg.width / 2.0);
  g.left_border = offset(cfg.width / 2.0);
  g.km_origin = cfg.km_origin;
  g.km_per_m = cfg.km_per_m;
  g.validate();
  return g;
}

/// Ground-truth crossing between a scene's target and its neighbor. The time
/// is the linear interpolation of the longitudinal offset's zero crossing.
struct InteractionEvent
{
  std::string target_id;
  std::string neighbor_id;
  bool encounter = false;  // false means overtaking
  double t = 0.0;
};

struct GeneratedTraffic
{
  std::vector<pipe::RawFix> fixes;
  std::vector<InteractionEvent> events;
};

namespace detail
{

enum class SceneKind
{
  empty,
  overtaking,
  encounter,
};

inline pipe::RawFix make_fix(
  const std::string & id, double t, const nav::NavFrameState & s, pipe::Direction dir,
  const nav::FairwayGeometry & g)
{
  pipe::RawFix fx;
  fx.agent_id = id;
  fx.t = t;
  fx.p = g.from_nav(s);
  fx.dir = dir;
  return fx;
}

inline void run_scene(
  const ScenarioConfig & cfg, const nav::FairwayGeometry & g, int index,
  GeneratedTraffic & out)
{
  auto rng = std::mt19937_64(cfg.seed + 0x9e3779b97f4a7c15ULL * (index + 1));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double roll = u01(rng);
  const SceneKind kind = roll < cfg.p_empty ? SceneKind::empty
    : roll < cfg.p_empty + cfg.p_overtaking ? SceneKind::overtaking
                                            : SceneKind::encounter;

  const std::string ta_id = "syn-" + std::to_string(index) + "-ta";
  const std::string nb_id = "syn-" + std::to_string(index) + "-nb";
  const double t_start = cfg.scene_gap_s * index;

  double ta_km = uni(cfg.start_km_lo, cfg.start_km_hi);
  const double ta_pref = uni(cfg.lane_lo, cfg.lane_hi);
  double ta_f = ta_pref;
  double ta_speed = uni(cfg.up_speed_lo, cfg.up_speed_hi);

  const bool has_nb = kind != SceneKind::empty;
  const bool oncoming = kind == SceneKind::encounter;
  double nb_speed = oncoming ? uni(cfg.down_speed_lo, cfg.down_speed_hi)
                             : uni(cfg.slow_speed_lo, cfg.slow_speed_hi);
  const double closing = oncoming ? ta_speed + nb_speed : ta_speed - nb_speed;
  const double pass_t = uni(cfg.pass_time_lo, cfg.pass_time_hi);
  double nb_km = ta_km + closing * pass_t / 1000.0;
  const double nb_pref = uni(cfg.lane_lo, cfg.lane_hi);
  double nb_f = nb_pref;

  const int n_fix = static_cast<int>(std::floor(cfg.duration_s / cfg.fix_dt)) + 1;
  double prev_off = nb_km - ta_km;
  bool crossed = false;
  for (int k = 0; k < n_fix; ++k) {
    const double t = t_start + k * cfg.fix_dt;
    out.fixes.push_back(make_fix(ta_id, t, {ta_km, ta_f}, pipe::Direction::upstream, g));
    if (has_nb) {
      const auto nb_dir = oncoming ? pipe::Direction::downstream : pipe::Direction::upstream;
      out.fixes.push_back(make_fix(nb_id, t, {nb_km, nb_f}, nb_dir, g));
      const double off = nb_km - ta_km;
      if (k > 0 && !crossed && (off > 0.0) != (prev_off > 0.0)) {
        crossed = true;
        const double tau =
          t - cfg.fix_dt + cfg.fix_dt * prev_off / (prev_off - off);
        out.events.push_back({ta_id, nb_id, oncoming, tau});
      }
      prev_off = off;
    }

    // Integrate to the next fix.
    ta_speed = std::clamp(
      ta_speed + cfg.speed_noise * gauss(rng), cfg.up_speed_lo, cfg.up_speed_hi);
    const double gap_m = (nb_km - ta_km) * 1000.0;
    const bool evading = has_nb && gap_m > 0.0 && gap_m <= cfg.trigger_m;
    const double ta_target = ta_pref - (evading ? cfg.sidestep_m : 0.0);
    ta_f += std::clamp(ta_target - ta_f, -cfg.return_rate, cfg.return_rate) +
            cfg.lateral_noise * gauss(rng);
    ta_km += ta_speed * cfg.fix_dt / 1000.0;
    if (has_nb) {
      if (oncoming) {
        nb_speed = std::clamp(
          nb_speed + cfg.speed_noise * gauss(rng), cfg.down_speed_lo, cfg.down_speed_hi);
        nb_km -= nb_speed * cfg.fix_dt / 1000.0;
      } else {
        nb_speed = std::clamp(
          nb_speed + cfg.speed_noise * gauss(rng), cfg.slow_speed_lo, cfg.slow_speed_hi);
        nb_km += nb_speed * cfg.fix_dt / 1000.0;
      }
      nb_f += std::clamp(nb_pref - nb_f, -cfg.return_rate, cfg.return_rate) +
              cfg.lateral_noise * gauss(rng);
    }
  }
}

}  // namespace detail

/// Simulates `count` independent scenes. Deterministic for a given config;
/// scenes are separated in time and carry unique agent ids.
inline GeneratedTraffic generate(const ScenarioConfig & cfg, int count)
{
  cfg.validate();
  const nav::FairwayGeometry g = make_geometry(cfg);
  GeneratedTraffic out;
  for (int i = 0; i < count; ++i) detail::run_scene(cfg, g, i, out);
  return out;
}

/// Overwrites each sample's interaction flags from the generator's event log:
/// an event marks a sample when either participant is the sample's target and
/// the crossing falls inside the sample's prediction span.
inline void apply_ground_truth(
  std::vector<pipe::SequenceSample> & samples, const std::vector<InteractionEvent> & events)
{
  for (auto & s : samples) {
    s.encounter = false;
    s.overtaking = false;
    const double lo = s.t0 + s.t_obs * s.dt;
    const double hi = s.t0 + (s.t_obs + s.horizon) * s.dt;
    for (const auto & e : events) {
      if (e.target_id != s.agent_id && e.neighbor_id != s.agent_id) continue;
      if (e.t <= lo || e.t > hi) continue;
      (e.encounter ? s.encounter : s.overtaking) = true;
    }
  }
}

inline void to_json(nlohmann::json & j, const SegmentSpec & s)
{
  j = {{"length_m", s.length_m}, {"curvature", s.curvature}};
}

inline void from_json(const nlohmann::json & j, SegmentSpec & s)
{
  s.length_m = j.at("length_m").get<double>();
  s.curvature = j.at("curvature").get<double>();
}

inline void to_json(nlohmann::json & j, const ScenarioConfig & c)
{
  j = {
    {"segments", c.segments},
    {"width", c.width},
    {"km_origin", c.km_origin},
    {"km_per_m", c.km_per_m},
    {"p_empty", c.p_empty},
    {"p_overtaking", c.p_overtaking},
    {"up_speed", {c.up_speed_lo, c.up_speed_hi}},
    {"down_speed", {c.down_speed_lo, c.down_speed_hi}},
    {"slow_speed", {c.slow_speed_lo, c.slow_speed_hi}},
    {"lane", {c.lane_lo, c.lane_hi}},
    {"trigger_m", c.trigger_m},
    {"sidestep_m", c.sidestep_m},
    {"return_rate", c.return_rate},
    {"speed_noise", c.speed_noise},
    {"lateral_noise", c.lateral_noise},
    {"fix_dt", c.fix_dt},
    {"duration_s", c.duration_s},
    {"scene_gap_s", c.scene_gap_s},
    {"start_km", {c.start_km_lo, c.start_km_hi}},
    {"pass_time", {c.pass_time_lo, c.pass_time_hi}},
    {"seed", c.seed},
  };
}

inline void from_json(const nlohmann::json & j, ScenarioConfig & c)
{
  c = ScenarioConfig{};
  auto range = [&](const char * key, double & lo, double & hi) {
    if (!j.contains(key)) return;
    lo = j.at(key).at(0).get<double>();
    hi = j.at(key).at(1).get<double>();
  };
  if (j.contains("segments")) c.segments = j.at("segments").get<std::vector<SegmentSpec>>();
  c.width = j.value("width", c.width);
  c.km_origin = j.value("km_origin", c.km_origin);
  c.km_per_m = j.value("km_per_m", c.km_per_m);
  c.p_empty = j.value("p_empty", c.p_empty);
  c.p_overtaking = j.value("p_overtaking", c.p_overtaking);
  range("up_speed", c.up_speed_lo, c.up_speed_hi);
  range("down_speed", c.down_speed_lo, c.down_speed_hi);
  range("slow_speed", c.slow_speed_lo, c.slow_speed_hi);
  range("lane", c.lane_lo, c.lane_hi);
  c.trigger_m = j.value("trigger_m", c.trigger_m);
  c.sidestep_m = j.value("sidestep_m", c.sidestep_m);
  c.return_rate = j.value("return_rate", c.return_rate);
  c.speed_noise = j.value("speed_noise", c.speed_noise);
  c.lateral_noise = j.value("lateral_noise", c.lateral_noise);
  c.fix_dt = j.value("fix_dt", c.fix_dt);
  c.duration_s = j.value("duration_s", c.duration_s);
  c.scene_gap_s = j.value("scene_gap_s", c.scene_gap_s);
  range("start_km", c.start_km_lo, c.start_km_hi);
  range("pass_time", c.pass_time_lo, c.pass_time_hi);
  c.seed = j.value("seed", c.seed);
}

inline ScenarioConfig load_scenario(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  ScenarioConfig c = j.get<ScenarioConfig>();
  c.validate();
  return c;
}

inline void save_scenario(const ScenarioConfig & c, const std::string & path)
{
  std::ofstream out(path);
  out << nlohmann::json(c).dump(2) << "\n";
  if (!out) throw Error("cannot write " + path);
}

}  // namespace fairway::synth

#endif  // FAIRWAY__SYNTH_HPP_
