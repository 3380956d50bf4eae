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

#ifndef FAIRWAY__PIPELINE_HPP_
#define FAIRWAY__PIPELINE_HPP_

#include "fairway/codec.hpp"
#include "fairway/geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fairway::pipe
{

enum class Direction { upstream, downstream };

inline const char * to_string(Direction d)
{
  return d == Direction::upstream ? "upstream" : "downstream";
}

inline Direction direction_from_string(const std::string & s)
{
  if (s == "upstream") return Direction::upstream;
  if (s == "downstream") return Direction::downstream;
  throw Error("unknown direction: " + s);
}

/// One received position report.
struct RawFix
{
  std::string agent_id;
  double t = 0.0;  // seconds
  Vec2 p{};
  std::optional<Vec2> v;
  std::optional<double> heading;  // rad
  Direction dir = Direction::upstream;
};

/// A contiguous single-direction run of fixes from one agent.
struct Trip
{
  std::string agent_id;
  int ordinal = 0;
  Direction dir = Direction::upstream;
  std::vector<RawFix> fixes;

  std::string trip_id() const { return agent_id + "#" + std::to_string(ordinal); }

  double mean_speed() const
  {
    if (fixes.size() < 2) return 0.0;
    double dist = 0.0;
    for (std::size_t i = 1; i < fixes.size(); ++i) dist += (fixes[i].p - fixes[i - 1].p).norm();
    const double span = fixes.back().t - fixes.front().t;
    return span > 0.0 ? dist / span : 0.0;
  }
};

// ---------------------------------------------------------------------------
// Trip splitting
// ---------------------------------------------------------------------------

/// Groups fixes by agent and cuts at direction changes or at time gaps
/// strictly greater than max_gap_s (default one hour). Duplicate timestamps
/// within an agent keep the first fix. Single-fix trips are emitted; later
/// stages discard them.
inline std::vector<Trip> split_trips(std::vector<RawFix> fixes, double max_gap_s = 3600.0)
{
  std::stable_sort(fixes.begin(), fixes.end(), [](const RawFix & a, const RawFix & b) {
    return a.agent_id != b.agent_id ? a.agent_id < b.agent_id : a.t < b.t;
  });
  std::vector<Trip> trips;
  std::map<std::string, int> ordinals;
  for (const auto & fx : fixes) {
    const bool fresh = trips.empty() || trips.back().agent_id != fx.agent_id;
    if (!fresh) {
      const RawFix & last = trips.back().fixes.back();
      if (fx.t == last.t) continue;
      if (fx.dir == trips.back().dir && fx.t - last.t <= max_gap_s) {
        trips.back().fixes.push_back(fx);
        continue;
      }
    }
    Trip t;
    t.agent_id = fx.agent_id;
    t.ordinal = ordinals[fx.agent_id]++;
    t.dir = fx.dir;
    t.fixes.push_back(fx);
    trips.push_back(std::move(t));
  }
  return trips;
}

// ---------------------------------------------------------------------------
// Outlier rejection
// ---------------------------------------------------------------------------

/// Drops fixes that imply a speed above max_speed against the last kept fix,
/// or a change of that speed above max_accel per second. The first fix is
/// always kept. The result is stable under re-filtering.
inline Trip filter_outliers(const Trip & trip, double max_speed = 8.0, double max_accel = 0.5)
{
  Trip out;
  out.agent_id = trip.agent_id;
  out.ordinal = trip.ordinal;
  out.dir = trip.dir;
  std::optional<double> prev_speed;
  for (const auto & fx : trip.fixes) {
    if (out.fixes.empty()) {
      out.fixes.push_back(fx);
      continue;
    }
    const RawFix & kept = out.fixes.back();
    const double dt = fx.t - kept.t;
    const double speed = (fx.p - kept.p).norm() / dt;
    if (speed > max_speed) continue;
    if (prev_speed && std::abs(speed - *prev_speed) / dt > max_accel) continue;
    prev_speed = speed;
    out.fixes.push_back(fx);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hermite resampling
// ---------------------------------------------------------------------------

inline Vec2 hermite_eval(
  const Vec2 & p0, const Vec2 & v0, double t0, const Vec2 & p1, const Vec2 & v1, double t1,
  double t)
{
  const double h = t1 - t0;
  const double u = (t - t0) / h;
  const double u2 = u * u, u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return p0 * h00 + v0 * (h10 * h) + p1 * h01 + v1 * (h11 * h);
}

inline Vec2 hermite_deriv(
  const Vec2 & p0, const Vec2 & v0, double t0, const Vec2 & p1, const Vec2 & v1, double t1,
  double t)
{
  const double h = t1 - t0;
  const double u = (t - t0) / h;
  const double u2 = u * u;
  const double d00 = (6 * u2 - 6 * u) / h;
  const double d10 = 3 * u2 - 4 * u + 1;
  const double d01 = (-6 * u2 + 6 * u) / h;
  const double d11 = 3 * u2 - 2 * u;
  return p0 * d00 + v0 * d10 + p1 * d01 + v1 * d11;
}

/// Per-fix tangents for the interpolant: reported velocity when present,
/// otherwise finite differences (central inside, one-sided at the ends).
inline std::vector<Vec2> tangents(const std::vector<RawFix> & fixes)
{
  const std::size_t n = fixes.size();
  std::vector<Vec2> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (fixes[i].v) {
      v[i] = *fixes[i].v;
      continue;
    }
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == n ? i : i + 1;
    v[i] = (fixes[b].p - fixes[a].p) * (1.0 / (fixes[b].t - fixes[a].t));
  }
  return v;
}

/// Resamples a trip onto the global grid t = k * dt. Grid points falling in
/// a source gap longer than max_gap_s are omitted; a gap of exactly
/// max_gap_s still interpolates. Points at source timestamps reproduce the
/// source positions. Output velocities are the analytic spline derivatives.
inline Trip hermite_resample(const Trip & trip, double dt, double max_gap_s = 120.0)
{
  if (trip.fixes.size() < 2) throw TooShort("resample needs at least 2 fixes");
  const std::vector<Vec2> tan = tangents(trip.fixes);
  Trip out;
  out.agent_id = trip.agent_id;
  out.ordinal = trip.ordinal;
  out.dir = trip.dir;
  const double t_first = trip.fixes.front().t;
  const double t_last = trip.fixes.back().t;
  long k = static_cast<long>(std::ceil(t_first / dt - 1e-9));
  std::size_t seg = 0;
  for (; k * dt <= t_last + 1e-9; ++k) {
    const double tq = k * dt;
    while (seg + 2 < trip.fixes.size() && trip.fixes[seg + 1].t < tq) ++seg;
    const RawFix & a = trip.fixes[seg];
    const RawFix & b = trip.fixes[seg + 1];
    if (b.t - a.t > max_gap_s) continue;
    RawFix fx;
    fx.agent_id = trip.agent_id;
    fx.t = tq;
    fx.dir = trip.dir;
    if (tq <= a.t) {
      fx.p = a.p;
      fx.v = tan[seg];
    } else if (tq >= b.t) {
      fx.p = b.p;
      fx.v = tan[seg + 1];
    } else {
      fx.p = hermite_eval(a.p, tan[seg], a.t, b.p, tan[seg + 1], b.t, tq);
      fx.v = hermite_deriv(a.p, tan[seg], a.t, b.p, tan[seg + 1], b.t, tq);
    }
    if (fx.v->norm2() > 0.0) fx.heading = std::atan2(fx.v->y, fx.v->x);
    out.fixes.push_back(fx);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Neighbor selection
// ---------------------------------------------------------------------------

/// Longitudinal offset of a neighbor relative to the target, in km, signed so
/// that positive means ahead in the target's direction of navigation.
inline double directed_km_offset(double target_km, double neighbor_km, Direction target_dir)
{
  const double d = neighbor_km - target_km;
  return target_dir == Direction::upstream ? d : -d;
}

/// Window of longitudinal eligibility around the target, closed on both ends.
struct SelectionWindow
{
  double behind_km = 0.75;
  double ahead_km = 1.5;

  bool contains(double directed_offset_km) const
  {
    return directed_offset_km >= -behind_km && directed_offset_km <= ahead_km;
  }
};

struct NeighborHit
{
  std::size_t trip_index;
  nav::NavFrameState state;
  double offset_km;  // directed
};

/// Picks the trips with a fix exactly at grid time t whose directed km offset
/// to the target lies within the window. Moored (zero-speed) vessels qualify
/// like any other. Agent ids play no role beyond excluding the target's own
/// trip.
inline std::vector<NeighborHit> select_neighbors(
  const Trip & target, double target_km, const std::vector<Trip> & others, double t,
  const nav::FairwayGeometry & g, const SelectionWindow & win = {})
{
  std::vector<NeighborHit> hits;
  for (std::size_t i = 0; i < others.size(); ++i) {
    const Trip & o = others[i];
    if (o.agent_id == target.agent_id && o.ordinal == target.ordinal) continue;
    auto it = std::lower_bound(
      o.fixes.begin(), o.fixes.end(), t - 1e-9,
      [](const RawFix & f, double tq) { return f.t < tq; });
    if (it == o.fixes.end() || std::abs(it->t - t) > 1e-9) continue;
    nav::NavFrameState s;
    try {
      s = g.to_nav(it->p);
    } catch (const ProjectionOutOfRange &) {
      continue;
    }
    const double off = directed_km_offset(target_km, s.km, target.dir);
    if (win.contains(off)) hits.push_back({i, s, off});
  }
  return hits;
}

// ---------------------------------------------------------------------------
// Sequence extraction
// ---------------------------------------------------------------------------

struct PipelineConfig
{
  double dt = 60.0;
  int t_obs = 5;
  int horizon = 5;
  int stride = 5;
  SelectionWindow window{};
  double min_nav_speed = 0.5;  // m/s over the window for target eligibility
  bool upstream_targets_only = true;
  bool require_interaction = true;
  int ctx_segments = 8;
  double ctx_spacing = 250.0;  // m between lookahead probes
};

struct TrackPoint
{
  Vec2 p{};
  nav::NavFrameState s{};
};

struct NeighborTrack
{
  std::string agent_id;
  Direction dir = Direction::downstream;
  std::vector<std::optional<TrackPoint>> steps;  // length t_obs + horizon + 1

  int observed_count() const
  {
    int n = 0;
    for (const auto & s : steps) n += s.has_value() ? 1 : 0;
    return n;
  }
};

/// One training window: t_obs + horizon dislocation steps over
/// t_obs + horizon + 1 track points, with per-step neighbor observations and
/// the lookahead context of the last observed position.
struct SequenceSample
{
  std::string trip_id;
  std::string agent_id;
  Direction dir = Direction::upstream;
  double t0 = 0.0;
  double dt = 60.0;
  int t_obs = 5;
  int horizon = 5;
  std::vector<TrackPoint> target;
  std::vector<double> context;
  std::vector<NeighborTrack> neighbors;
  bool encounter = false;
  bool overtaking = false;

  int steps() const { return t_obs + horizon; }
};

/// Fairway shape ahead of a state: per probe k = 1..segments at spacing s,
/// width / 100 and curvature * 1000 at the probe arclength, clamped to the
/// geometry span. "Ahead" follows the direction of navigation.
inline std::vector<double> navigation_context(
  const nav::NavFrameState & at, Direction dir, const nav::FairwayGeometry & g, int segments,
  double spacing)
{
  const double s0 = g.km_to_arclength(at.km);
  const double sign = dir == Direction::upstream ? 1.0 : -1.0;
  std::vector<double> ctx;
  ctx.reserve(2 * segments);
  for (int k = 1; k <= segments; ++k) {
    double s = s0 + sign * spacing * k;
    s = std::clamp(s, 0.0, g.centerline.length());
    ctx.push_back(g.width_at(s) / 100.0);
    ctx.push_back(g.curvature_at(s) * 1000.0);
  }
  return ctx;
}

/// Sign-change test on directed offsets; crossing zero exactly counts once.
inline bool offset_crosses(double before, double after)
{
  return (before > 0.0) != (after > 0.0);
}

/// Cuts sliding windows from one resampled target trip. A window survives if
/// the target is continuously observed and navigating, every point maps into
/// the fairway, and (when required) at least one encounter or overtaking
/// falls inside the prediction horizon.
inline std::vector<SequenceSample> extract_sequences(
  const Trip & target, const std::vector<Trip> & others, const PipelineConfig & cfg,
  const nav::FairwayGeometry & g)
{
  std::vector<SequenceSample> out;
  if (cfg.stride < 1) throw Error("extract_sequences: stride must be positive");
  if (cfg.upstream_targets_only && target.dir != Direction::upstream) return out;
  const int total = cfg.t_obs + cfg.horizon;  // dislocation steps
  const int points = total + 1;
  if (static_cast<int>(target.fixes.size()) < points) return out;

  for (std::size_t w0 = 0; w0 + points <= target.fixes.size();
       w0 += static_cast<std::size_t>(cfg.stride)) {
    const double t0 = target.fixes[w0].t;
    bool contiguous = true;
    for (int i = 0; i < points; ++i)
      if (std::abs(target.fixes[w0 + i].t - (t0 + i * cfg.dt)) > 1e-6) {
        contiguous = false;
        break;
      }
    if (!contiguous) continue;

    SequenceSample smp;
    smp.trip_id = target.trip_id();
    smp.agent_id = target.agent_id;
    smp.dir = target.dir;
    smp.t0 = t0;
    smp.dt = cfg.dt;
    smp.t_obs = cfg.t_obs;
    smp.horizon = cfg.horizon;
    smp.target.resize(points);
    bool in_fairway = true;
    double dist = 0.0;
    for (int i = 0; i < points && in_fairway; ++i) {
      const RawFix & fx = target.fixes[w0 + i];
      try {
        smp.target[i] = {fx.p, g.to_nav(fx.p)};
      } catch (const ProjectionOutOfRange &) {
        in_fairway = false;
      }
      if (i > 0) dist += (fx.p - target.fixes[w0 + i - 1].p).norm();
    }
    if (!in_fairway) continue;
    if (dist / (total * cfg.dt) < cfg.min_nav_speed) continue;

    // Per-step neighbor observations inside the selection window.
    std::map<std::size_t, NeighborTrack> found;
    for (int i = 0; i < points; ++i) {
      const auto hits = select_neighbors(
        target, smp.target[i].s.km, others, t0 + i * cfg.dt, g, cfg.window);
      for (const auto & h : hits) {
        auto [it, fresh] = found.try_emplace(h.trip_index);
        if (fresh) {
          it->second.agent_id = others[h.trip_index].agent_id;
          it->second.dir = others[h.trip_index].dir;
          it->second.steps.resize(points);
        }
        const auto & of = others[h.trip_index].fixes;
        auto fit = std::lower_bound(
          of.begin(), of.end(), t0 + i * cfg.dt - 1e-9,
          [](const RawFix & f, double tq) { return f.t < tq; });
        it->second.steps[i] = TrackPoint{fit->p, h.state};
      }
    }
    for (auto & [idx, nb] : found) smp.neighbors.push_back(std::move(nb));

    // Interaction flags over the prediction horizon.
    for (const auto & nb : smp.neighbors) {
      for (int j = cfg.t_obs + 1; j <= total; ++j) {
        if (!nb.steps[j - 1] || !nb.steps[j]) continue;
        const double ob = directed_km_offset(smp.target[j - 1].s.km, nb.steps[j - 1]->s.km,
                                             target.dir);
        const double oa = directed_km_offset(smp.target[j].s.km, nb.steps[j]->s.km, target.dir);
        if (!offset_crosses(ob, oa)) continue;
        if (nb.dir != target.dir)
          smp.encounter = true;
        else
          smp.overtaking = true;
      }
    }
    if (cfg.require_interaction && !smp.encounter && !smp.overtaking) continue;

    smp.context =
      navigation_context(smp.target[cfg.t_obs].s, target.dir, g, cfg.ctx_segments,
                         cfg.ctx_spacing);
    out.push_back(std::move(smp));
  }
  return out;
}

/// Runs extraction over every eligible trip, in (agent_id, ordinal) order so
/// the output is independent of input trip ordering.
inline std::vector<SequenceSample> extract_all(
  const std::vector<Trip> & trips, const PipelineConfig & cfg, const nav::FairwayGeometry & g)
{
  std::vector<std::size_t> order(trips.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Trip & ta = trips[a];
    const Trip & tb = trips[b];
    return ta.agent_id != tb.agent_id ? ta.agent_id < tb.agent_id : ta.ordinal < tb.ordinal;
  });
  std::vector<SequenceSample> out;
  for (std::size_t i : order) {
    auto part = extract_sequences(trips[i], trips, cfg, g);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

/// Full preprocessing chain: trip splitting, outlier rejection, resampling
/// onto the dt grid, and window extraction.
inline std::vector<SequenceSample> preprocess(
  std::vector<RawFix> fixes, const PipelineConfig & cfg, const nav::FairwayGeometry & g)
{
  std::vector<Trip> resampled;
  for (const auto & trip : split_trips(std::move(fixes))) {
    const Trip clean = filter_outliers(trip);
    if (clean.fixes.size() < 2) continue;
    Trip rs = hermite_resample(clean, cfg.dt);
    if (rs.fixes.size() >= 2) resampled.push_back(std::move(rs));
  }
  return extract_all(resampled, cfg, g);
}

/// Independent re-check of the SequenceSample invariants.
inline void validate_sample(const SequenceSample & s, const PipelineConfig & cfg)
{
  const int points = s.t_obs + s.horizon + 1;
  if (static_cast<int>(s.target.size()) != points) throw Error("sample: bad target length");
  for (const auto & tp : s.target)
    if (!is_finite(tp.p) || !std::isfinite(tp.s.km) || !std::isfinite(tp.s.f))
      throw NonFinite("sample: non-finite target state");
  if (static_cast<int>(s.context.size()) != 2 * cfg.ctx_segments)
    throw Error("sample: bad context length");
  for (double c : s.context)
    if (!std::isfinite(c)) throw NonFinite("sample: non-finite context");
  for (const auto & nb : s.neighbors) {
    if (static_cast<int>(nb.steps.size()) != points) throw Error("sample: bad neighbor length");
    if (nb.observed_count() < 1) throw Error("sample: neighbor never observed");
    for (int i = 0; i < points; ++i) {
      if (!nb.steps[i]) continue;
      const double off = directed_km_offset(s.target[i].s.km, nb.steps[i]->s.km, s.dir);
      if (off < -cfg.window.behind_km - 1e-9 || off > cfg.window.ahead_km + 1e-9)
        throw Error("sample: neighbor outside selection window");
    }
  }
}

// ---------------------------------------------------------------------------
// JSONL input/output
// ---------------------------------------------------------------------------

inline nlohmann::json fix_to_json(const RawFix & f)
{
  nlohmann::json j{
    {"agent_id", f.agent_id}, {"t", f.t}, {"x", f.p.x}, {"y", f.p.y},
    {"direction", to_string(f.dir)}};
  if (f.v) {
    j["vx"] = f.v->x;
    j["vy"] = f.v->y;
  }
  if (f.heading) j["heading"] = *f.heading;
  return j;
}

inline RawFix fix_from_json(const nlohmann::json & j)
{
  RawFix f;
  f.agent_id = j.at("agent_id").get<std::string>();
  f.t = j.at("t").get<double>();
  f.p = {j.at("x").get<double>(), j.at("y").get<double>()};
  if (j.contains("vx")) f.v = Vec2{j.at("vx").get<double>(), j.at("vy").get<double>()};
  if (j.contains("heading")) f.heading = j.at("heading").get<double>();
  f.dir = direction_from_string(j.at("direction").get<std::string>());
  return f;
}

inline void save_raw_fixes(const std::string & path, const std::vector<RawFix> & fixes)
{
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  for (const auto & f : fixes) out << fix_to_json(f).dump() << "\n";
}

inline std::vector<RawFix> load_raw_fixes(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path);
  std::vector<RawFix> fixes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    fixes.push_back(fix_from_json(nlohmann::json::parse(line)));
  }
  return fixes;
}

inline nlohmann::json track_point_to_json(const TrackPoint & tp)
{
  return nlohmann::json{tp.p.x, tp.p.y, tp.s.km, tp.s.f};
}

inline TrackPoint track_point_from_json(const nlohmann::json & j)
{
  return {{j.at(0).get<double>(), j.at(1).get<double>()},
          {j.at(2).get<double>(), j.at(3).get<double>()}};
}

inline nlohmann::json sample_to_json(const SequenceSample & s)
{
  nlohmann::json j{
    {"trip_id", s.trip_id}, {"agent_id", s.agent_id},   {"direction", to_string(s.dir)},
    {"t0", s.t0},           {"dt", s.dt},               {"t_obs", s.t_obs},
    {"horizon", s.horizon}, {"encounter", s.encounter}, {"overtaking", s.overtaking}};
  j["target"] = nlohmann::json::array();
  for (const auto & tp : s.target) j["target"].push_back(track_point_to_json(tp));
  j["context"] = s.context;
  j["neighbors"] = nlohmann::json::array();
  for (const auto & nb : s.neighbors) {
    nlohmann::json n{{"agent_id", nb.agent_id}, {"direction", to_string(nb.dir)}};
    n["steps"] = nlohmann::json::array();
    for (const auto & st : nb.steps)
      n["steps"].push_back(st ? track_point_to_json(*st) : nlohmann::json());
    j["neighbors"].push_back(std::move(n));
  }
  return j;
}

inline SequenceSample sample_from_json(const nlohmann::json & j)
{
  SequenceSample s;
  s.trip_id = j.at("trip_id").get<std::string>();
  s.agent_id = j.at("agent_id").get<std::string>();
  s.dir = direction_from_string(j.at("direction").get<std::string>());
  s.t0 = j.at("t0").get<double>();
  s.dt = j.at("dt").get<double>();
  s.t_obs = j.at("t_obs").get<int>();
  s.horizon = j.at("horizon").get<int>();
  s.encounter = j.at("encounter").get<bool>();
  s.overtaking = j.at("overtaking").get<bool>();
  for (const auto & tp : j.at("target")) s.target.push_back(track_point_from_json(tp));
  s.context = j.at("context").get<std::vector<double>>();
  for (const auto & n : j.at("neighbors")) {
    NeighborTrack nb;
    nb.agent_id = n.at("agent_id").get<std::string>();
    nb.dir = direction_from_string(n.at("direction").get<std::string>());
    for (const auto & st : n.at("steps"))
      nb.steps.push_back(
        st.is_null() ? std::optional<TrackPoint>{} : track_point_from_json(st));
    s.neighbors.push_back(std::move(nb));
  }
  return s;
}

inline void save_samples(const std::string & path, const std::vector<SequenceSample> & samples)
{
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  for (const auto & s : samples) out << sample_to_json(s).dump() << "\n";
}

inline std::vector<SequenceSample> load_samples(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path);
  std::vector<SequenceSample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    samples.push_back(sample_from_json(nlohmann::json::parse(line)));
  }
  return samples;
}

}  // namespace fairway::pipe

#endif  // FAIRWAY__PIPELINE_HPP_
