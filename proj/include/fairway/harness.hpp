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

#ifndef FAIRWAY__HARNESS_HPP_
#define FAIRWAY__HARNESS_HPP_

#include "fairway/model.hpp"
#include "fairway/social.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fairway::harness
{

inline int threads_from_env()
{
  if (const char * v = std::getenv("FAIRWAY_THREADS")) {
    const int n = std::atoi(v);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct TrainConfig
{
  int epochs = 30;
  int batch = 32;
  double lr = 3e-4;
  double clip = 1.0;
  std::uint64_t seed = 1;
  double test_fraction = 0.2;
};

struct EpochStats
{
  double loss = 0.0;
  double loss_lat = 0.0;
  double loss_lon = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
};

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

struct Split
{
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Splits by target trip so correlated windows of one trip never straddle the
/// boundary. Trips are shuffled with the given seed; the first (1 - fraction)
/// share trains.
inline Split split_by_trip(
  const std::vector<pipe::SequenceSample> & samples, double test_fraction, std::uint64_t seed)
{
  if (test_fraction < 0.0 || test_fraction >= 1.0)
    throw Error("split: test fraction must lie in [0, 1)");
  std::vector<std::string> trips;
  for (const auto & s : samples) trips.push_back(s.trip_id);
  std::sort(trips.begin(), trips.end());
  trips.erase(std::unique(trips.begin(), trips.end()), trips.end());
  auto rng = std::mt19937_64(seed);
  std::shuffle(trips.begin(), trips.end(), rng);
  const std::size_t n_test = static_cast<std::size_t>(
    std::llround(test_fraction * static_cast<double>(trips.size())));
  std::set<std::string> test_trips(trips.end() - n_test, trips.end());
  Split sp;
  for (std::size_t i = 0; i < samples.size(); ++i)
    (test_trips.count(samples[i].trip_id) ? sp.test : sp.train).push_back(i);
  return sp;
}

inline std::vector<pipe::SequenceSample> take(
  const std::vector<pipe::SequenceSample> & samples, const std::vector<std::size_t> & idx)
{
  std::vector<pipe::SequenceSample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(samples[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace detail
{

struct PreparedSample
{
  model::LabelStreams streams;
  std::vector<nav::DislocationLabel> dec;  // future minus its last label
  std::vector<double> ctx;
  social::SocialTensor tensor;  // empty unless the variant fuses it
};

inline void check_compat(
  const model::ModelConfig & cfg, const std::vector<pipe::SequenceSample> & samples)
{
  for (const auto & s : samples) {
    if (s.t_obs != cfg.t_obs || s.horizon != cfg.horizon)
      throw ManifestMismatch("sample spans do not match the model configuration");
    if (std::abs(s.dt - cfg.dt) > 1e-9)
      throw ManifestMismatch("sample step width does not match the model configuration");
    if (static_cast<int>(s.context.size()) != cfg.ctx_features())
      throw ManifestMismatch("sample context length does not match the model configuration");
  }
}

inline PreparedSample prepare(
  const pipe::SequenceSample & s, const model::ModelConfig & cfg, const nav::LabelCodec & codec)
{
  PreparedSample p;
  p.streams = model::label_streams(s, cfg.variant, codec);
  p.dec.assign(p.streams.future.begin(), p.streams.future.end() - 1);
  p.ctx = s.context;
  if (cfg.variant == model::Variant::sosp_ct) p.tensor = social::build(s, cfg.grid);
  return p;
}

inline const social::SocialTensor * tensor_of(
  const model::ModelConfig & cfg, const PreparedSample & p)
{
  return cfg.variant == model::Variant::sosp_ct ? &p.tensor : nullptr;
}

}  // namespace detail

struct TrainResult
{
  model::Model model;
  std::vector<EpochStats> curve;
  int steps = 0;  // optimizer steps taken
};

/// Teacher-forced training with gradient accumulation over mini batches and
/// global-norm clipping. Sequential and deterministic for a fixed seed.
inline TrainResult train(
  const std::vector<pipe::SequenceSample> & samples, const model::ModelConfig & cfg,
  const TrainConfig & tcfg)
{
  if (samples.empty()) throw Error("train: empty dataset");
  detail::check_compat(cfg, samples);
  const nav::LabelCodec codec = cfg.codec();

  std::vector<detail::PreparedSample> prepared;
  prepared.reserve(samples.size());
  for (const auto & s : samples) prepared.push_back(detail::prepare(s, cfg, codec));

  TrainResult result{model::build_variant(cfg, tcfg.seed), {}, 0};
  model::Model & m = result.model;
  ad::Adam opt(m.pm, tcfg.lr);
  auto order_rng = std::mt19937_64(tcfg.seed ^ 0x5deece66dULL);
  std::vector<std::size_t> order(prepared.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < tcfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), order_rng);
    EpochStats stats;
    std::size_t seen = 0;
    for (std::size_t at = 0; at < order.size(); at += tcfg.batch) {
      const std::size_t end = std::min(order.size(), at + tcfg.batch);
      try {
        m.pm.zero_grad();
        ad::Tensor lat_sum, lon_sum;
        for (std::size_t k = at; k < end; ++k) {
          const detail::PreparedSample & p = prepared[order[k]];
          model::Logits lg =
            model::forward(m, p.streams.obs, detail::tensor_of(cfg, p), p.ctx, p.dec);
          model::LossParts parts = model::loss_parts(lg, p.streams.future);
          lat_sum = k == at ? parts.lat : ad::add(lat_sum, parts.lat);
          lon_sum = k == at ? parts.lon : ad::add(lon_sum, parts.lon);
        }
        const double inv = 1.0 / static_cast<double>(end - at);
        model::LossParts batch_parts{ad::scale(lat_sum, inv), ad::scale(lon_sum, inv)};
        ad::Tensor total = model::weighted_loss(batch_parts, m.s_x, m.s_y);
        if (!std::isfinite(total.item())) throw NonFinite("training loss diverged");
        ad::backward(total);
        ad::clip_global_norm(m.pm, tcfg.clip);
        opt.step();
        stats.loss += total.item() * static_cast<double>(end - at);
        stats.loss_lat += batch_parts.lat.item() * static_cast<double>(end - at);
        stats.loss_lon += batch_parts.lon.item() * static_cast<double>(end - at);
      } catch (const NonFinite & e) {
        throw NonFinite(
          std::string(e.what()) + " at optimizer step " + std::to_string(result.steps));
      }
      ++result.steps;
      seen += end - at;
    }
    stats.loss /= static_cast<double>(seen);
    stats.loss_lat /= static_cast<double>(seen);
    stats.loss_lon /= static_cast<double>(seen);
    stats.sigma_x = std::exp(m.s_x.item() / 2.0);
    stats.sigma_y = std::exp(m.s_y.item() / 2.0);
    result.curve.push_back(stats);
  }
  return result;
}

/// Share of steps whose teacher-forced argmax reproduces both true labels.
inline double teacher_forced_accuracy(
  const model::Model & m, const std::vector<pipe::SequenceSample> & samples)
{
  detail::check_compat(m.cfg, samples);
  const nav::LabelCodec codec = m.cfg.codec();
  ad::NoGradGuard ng;
  std::size_t hits = 0, total = 0;
  for (const auto & s : samples) {
    const detail::PreparedSample p = detail::prepare(s, m.cfg, codec);
    const auto picked = model::argmax_labels(
      model::forward(m, p.streams.obs, detail::tensor_of(m.cfg, p), p.ctx, p.dec));
    for (std::size_t j = 0; j < picked.size(); ++j) {
      hits += picked[j] == p.streams.future[j] ? 1 : 0;
      ++total;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct SampleEval
{
  std::string trip_id;
  double t0 = 0.0;
  bool encounter = false;
  bool overtaking = false;
  std::vector<double> step_err;  // m, one per horizon step
  double ade = 0.0;
  double fde = 0.0;
};

struct Stratum
{
  int count = 0;
  double fde_mean = 0.0;
  double fde_std = 0.0;
  double ade_mean = 0.0;
};

struct EvalReport
{
  int horizon = 0;
  std::vector<SampleEval> samples;
  double ade_mean = 0.0, ade_std = 0.0;
  double fde_mean = 0.0, fde_std = 0.0;
  std::vector<double> fde_by_step;              // mean error at each horizon step
  std::vector<double> quantile_levels;          // probed FDE quantiles
  std::vector<double> fde_quantiles;
  double share_le_50 = 0.0, share_gt_100 = 0.0;
  Stratum encounter, overtaking, unaffected;
};

namespace detail
{

inline std::pair<double, double> mean_std(const std::vector<double> & xs)
{
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

// Order-statistic quantile with linear interpolation between ranks.
inline double quantile(std::vector<double> sorted, double q)
{
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

}  // namespace detail

/// Recomputes every aggregate from the per-sample table, in index order.
inline void finalize(EvalReport & r)
{
  std::vector<double> ades, fdes;
  for (const auto & s : r.samples) {
    ades.push_back(s.ade);
    fdes.push_back(s.fde);
  }
  std::tie(r.ade_mean, r.ade_std) = detail::mean_std(ades);
  std::tie(r.fde_mean, r.fde_std) = detail::mean_std(fdes);

  r.fde_by_step.assign(static_cast<std::size_t>(r.horizon), 0.0);
  if (!r.samples.empty()) {
    for (const auto & s : r.samples)
      for (int j = 0; j < r.horizon; ++j) r.fde_by_step[j] += s.step_err[j];
    for (auto & v : r.fde_by_step) v /= static_cast<double>(r.samples.size());
  }

  r.quantile_levels = {0.05, 0.25, 0.5, 0.75, 0.95};
  std::vector<double> sorted = fdes;
  std::sort(sorted.begin(), sorted.end());
  r.fde_quantiles.clear();
  for (double q : r.quantile_levels) r.fde_quantiles.push_back(detail::quantile(sorted, q));

  int le50 = 0, gt100 = 0;
  for (double f : fdes) {
    if (f <= 50.0) ++le50;
    if (f > 100.0) ++gt100;
  }
  const double n = std::max<std::size_t>(1, fdes.size());
  r.share_le_50 = le50 / n;
  r.share_gt_100 = gt100 / n;

  auto stratum = [&](auto pred) {
    Stratum st;
    std::vector<double> f, a;
    for (const auto & s : r.samples)
      if (pred(s)) {
        f.push_back(s.fde);
        a.push_back(s.ade);
      }
    st.count = static_cast<int>(f.size());
    std::tie(st.fde_mean, st.fde_std) = detail::mean_std(f);
    st.ade_mean = detail::mean_std(a).first;
    return st;
  };
  r.encounter = stratum([](const SampleEval & s) { return s.encounter; });
  r.overtaking = stratum([](const SampleEval & s) { return s.overtaking && !s.encounter; });
  r.unaffected = stratum([](const SampleEval & s) { return !s.encounter && !s.overtaking; });
}

/// Greedy-decodes each sample, reconstructs the metric trajectory, and scores
/// it against ground truth. Parallel over samples; per-sample results land in
/// index order, so the report does not depend on the thread count.
inline EvalReport evaluate(
  const model::Model & m, const std::vector<pipe::SequenceSample> & samples,
  const nav::FairwayGeometry & g, int threads = 1)
{
  detail::check_compat(m.cfg, samples);
  const nav::LabelCodec codec = m.cfg.codec();
  EvalReport report;
  report.horizon = m.cfg.horizon;
  report.samples.resize(samples.size());

  auto score = [&](std::size_t i) {
    const pipe::SequenceSample & s = samples[i];
    const detail::PreparedSample p = detail::prepare(s, m.cfg, codec);
    const auto pred =
      model::greedy_decode(m, p.streams.obs, detail::tensor_of(m.cfg, p), p.ctx);
    std::vector<Vec2> pts;
    if (m.cfg.variant == model::Variant::ct)
      pts = nav::reconstruct_heading(
        s.target[s.t_obs - 1].p, s.target[s.t_obs].p, pred, codec);
    else
      pts = nav::reconstruct(s.target[s.t_obs].s, pred, codec, g);
    SampleEval ev;
    ev.trip_id = s.trip_id;
    ev.t0 = s.t0;
    ev.encounter = s.encounter;
    ev.overtaking = s.overtaking;
    for (int j = 0; j < s.horizon; ++j)
      ev.step_err.push_back((pts[j] - s.target[s.t_obs + 1 + j].p).norm());
    double sum = 0.0;
    for (double e : ev.step_err) sum += e;
    ev.ade = sum / static_cast<double>(s.horizon);
    ev.fde = ev.step_err.back();
    report.samples[i] = std::move(ev);
  };

  if (threads <= 1 || samples.size() < 2) {
    for (std::size_t i = 0; i < samples.size(); ++i) score(i);
  } else {
    const int n_threads = std::min<int>(threads, static_cast<int>(samples.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < samples.size(); i += n_threads) score(i);
      });
    for (auto & th : pool) th.join();
  }
  finalize(report);
  return report;
}

inline void to_json(nlohmann::json & j, const SampleEval & s)
{
  j = {{"trip_id", s.trip_id}, {"t0", s.t0},       {"encounter", s.encounter},
       {"overtaking", s.overtaking}, {"step_err", s.step_err}, {"ade", s.ade},
       {"fde", s.fde}};
}

inline void to_json(nlohmann::json & j, const Stratum & s)
{
  j = {{"count", s.count}, {"fde_mean", s.fde_mean}, {"fde_std", s.fde_std},
       {"ade_mean", s.ade_mean}};
}

inline void to_json(nlohmann::json & j, const EvalReport & r)
{
  j = {
    {"horizon", r.horizon},
    {"ade_mean", r.ade_mean},
    {"ade_std", r.ade_std},
    {"fde_mean", r.fde_mean},
    {"fde_std", r.fde_std},
    {"fde_by_step", r.fde_by_step},
    {"quantile_levels", r.quantile_levels},
    {"fde_quantiles", r.fde_quantiles},
    {"share_le_50", r.share_le_50},
    {"share_gt_100", r.share_gt_100},
    {"encounter", r.encounter},
    {"overtaking", r.overtaking},
    {"unaffected", r.unaffected},
    {"samples", r.samples},
  };
}

// ---------------------------------------------------------------------------
// Ablation
// ---------------------------------------------------------------------------

struct AblationRow
{
  model::Variant variant = model::Variant::ct;
  std::uint64_t seed = 0;
  EvalReport report;
};

struct AblationResult
{
  std::vector<AblationRow> rows;  // variant-major, seeds inner

  std::vector<const EvalReport *> reports_of(model::Variant v) const
  {
    std::vector<const EvalReport *> out;
    for (const auto & r : rows)
      if (r.variant == v) out.push_back(&r.report);
    return out;
  }

  // Mean over seeds of a per-report summary value.
  double mean_of(model::Variant v, double (*f)(const EvalReport &)) const
  {
    const auto rs = reports_of(v);
    if (rs.empty()) return 0.0;
    double sum = 0.0;
    for (const auto * r : rs) sum += f(*r);
    return sum / static_cast<double>(rs.size());
  }

  std::vector<double> mean_curve(model::Variant v) const
  {
    const auto rs = reports_of(v);
    std::vector<double> out;
    if (rs.empty()) return out;
    out.assign(rs.front()->fde_by_step.size(), 0.0);
    for (const auto * r : rs)
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += r->fde_by_step[j];
    for (auto & v2 : out) v2 /= static_cast<double>(rs.size());
    return out;
  }
};

/// Trains and evaluates every variant on identical per-seed splits.
inline AblationResult ablate(
  const std::vector<pipe::SequenceSample> & samples, const model::ModelConfig & base,
  const std::vector<std::uint64_t> & seeds, const TrainConfig & base_tcfg, const nav::FairwayGeometry & g,
  int eval_threads = 1)
{
  AblationResult result;
  for (model::Variant v :
       {model::Variant::ct, model::Variant::sp_ct, model::Variant::sosp_ct}) {
    for (std::uint64_t seed : seeds) {
      const Split split = split_by_trip(samples, base_tcfg.test_fraction, seed);
      model::ModelConfig cfg = base;
      cfg.variant = v;
      TrainConfig tcfg = base_tcfg;
      tcfg.seed = seed;
      TrainResult tr = train(take(samples, split.train), cfg, tcfg);
      EvalReport rep = evaluate(tr.model, take(samples, split.test), g, eval_threads);
      result.rows.push_back({v, seed, std::move(rep)});
    }
  }
  return result;
}

inline std::string ablation_csv(const AblationResult & a)
{
  std::ostringstream out;
  out << "variant,seed,n_test,ade_mean,fde_mean,encounter_n,encounter_fde,"
         "overtaking_n,overtaking_fde,unaffected_fde\n";
  out.precision(17);
  for (const auto & r : a.rows) {
    out << model::to_string(r.variant) << ',' << r.seed << ',' << r.report.samples.size()
        << ',' << r.report.ade_mean << ',' << r.report.fde_mean << ','
        << r.report.encounter.count << ',' << r.report.encounter.fde_mean << ','
        << r.report.overtaking.count << ',' << r.report.overtaking.fde_mean << ','
        << r.report.unaffected.fde_mean << '\n';
  }
  return out.str();
}

/// Horizon curves (mean FDE when step j is treated as final), one column per
/// variant; plot-ready.
inline std::string horizon_csv(const AblationResult & a)
{
  std::ostringstream out;
  out << "step,ct,sp-ct,sosp-ct\n";
  out.precision(17);
  const auto ct = a.mean_curve(model::Variant::ct);
  const auto sp = a.mean_curve(model::Variant::sp_ct);
  const auto so = a.mean_curve(model::Variant::sosp_ct);
  const std::size_t n = std::max({ct.size(), sp.size(), so.size()});
  auto cell = [&out](const std::vector<double> & v, std::size_t j) {
    if (j < v.size()) out << v[j];
    else out << "nan";
  };
  for (std::size_t j = 0; j < n; ++j) {
    out << (j + 1) << ',';
    cell(ct, j);
    out << ',';
    cell(sp, j);
    out << ',';
    cell(so, j);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Prediction dump
// ---------------------------------------------------------------------------

inline void save_predictions(
  const model::Model & m, const std::vector<pipe::SequenceSample> & samples,
  const nav::FairwayGeometry & g, const std::string & path)
{
  detail::check_compat(m.cfg, samples);
  const nav::LabelCodec codec = m.cfg.codec();
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  for (const auto & s : samples) {
    const detail::PreparedSample p = detail::prepare(s, m.cfg, codec);
    const auto pred =
      model::greedy_decode(m, p.streams.obs, detail::tensor_of(m.cfg, p), p.ctx);
    std::vector<Vec2> pts;
    if (m.cfg.variant == model::Variant::ct)
      pts = nav::reconstruct_heading(
        s.target[s.t_obs - 1].p, s.target[s.t_obs].p, pred, codec);
    else
      pts = nav::reconstruct(s.target[s.t_obs].s, pred, codec, g);
    nlohmann::json pj = nlohmann::json::array();
    nlohmann::json tj = nlohmann::json::array();
    for (int j = 0; j < s.horizon; ++j) {
      pj.push_back({pts[j].x, pts[j].y});
      const Vec2 & t = s.target[s.t_obs + 1 + j].p;
      tj.push_back({t.x, t.y});
    }
    out << nlohmann::json{{"trip_id", s.trip_id}, {"t0", s.t0}, {"predicted", pj},
                          {"truth", tj}}
             .dump()
        << "\n";
  }
}

// ---------------------------------------------------------------------------
// Flat key-value configuration
// ---------------------------------------------------------------------------

/// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
inline std::map<std::string, std::string> parse_kv(std::istream & in)
{
  std::map<std::string, std::string> out;
  std::string line;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error("config line without a key: " + line);
    out[key] = value;
  }
  return out;
}

inline std::map<std::string, std::string> load_kv(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return parse_kv(in);
}

/// Applies recognized keys to the two configs and errors on unknown ones.
inline void apply_kv(
  const std::map<std::string, std::string> & kv, model::ModelConfig & cfg, TrainConfig & tcfg)
{
  for (const auto & [key, value] : kv) {
    const auto i = [&] { return std::stoi(value); };
    const auto d = [&] { return std::stod(value); };
    if (key == "variant") cfg.variant = model::variant_from_string(value);
    else if (key == "d") cfg.d = i();
    else if (key == "heads") cfg.heads = i();
    else if (key == "enc_layers") cfg.enc_layers = i();
    else if (key == "dec_layers") cfg.dec_layers = i();
    else if (key == "stt_layers") cfg.stt_layers = i();
    else if (key == "ff_mult") cfg.ff_mult = i();
    else if (key == "t_obs") cfg.t_obs = i();
    else if (key == "horizon") cfg.horizon = i();
    else if (key == "c1") cfg.c1 = i();
    else if (key == "c2") cfg.c2 = i();
    else if (key == "lat_span") cfg.lat_span = d();
    else if (key == "lon_min") cfg.lon_min = d();
    else if (key == "lon_max") cfg.lon_max = d();
    else if (key == "dt") cfg.dt = d();
    else if (key == "ctx_segments") cfg.ctx_segments = i();
    else if (key == "ctx_spacing") cfg.ctx_spacing = d();
    else if (key == "grid_w") cfg.grid.w = i();
    else if (key == "grid_l") cfg.grid.l = i();
    else if (key == "grid_lat_cell") cfg.grid.lat_cell = d();
    else if (key == "grid_lon_cell") cfg.grid.lon_cell = d();
    else if (key == "grid_ahead_fraction") cfg.grid.ahead_fraction = d();
    else if (key == "epochs") tcfg.epochs = i();
    else if (key == "batch") tcfg.batch = i();
    else if (key == "lr") tcfg.lr = d();
    else if (key == "clip") tcfg.clip = d();
    else if (key == "seed") tcfg.seed = std::stoull(value);
    else if (key == "test_fraction") tcfg.test_fraction = d();
    else throw Error("unknown config key: " + key);
  }
}

}  // namespace fairway::harness

#endif  // FAIRWAY__HARNESS_HPP_
