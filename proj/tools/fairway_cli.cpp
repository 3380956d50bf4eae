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

// Command-line front end: data preprocessing, synthetic traffic generation,
// training, evaluation, prediction dumps, and the variant ablation.

#include "fairway/checkpoint.hpp"
#include "fairway/harness.hpp"
#include "fairway/synth.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace
{

using namespace fairway;

void write_text(const std::string & path, const std::string & text)
{
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

int run_preprocess(
  const std::string & fixes_path, const std::string & geometry_path, const std::string & out_path,
  pipe::PipelineConfig pcfg)
{
  const auto g = nav::load_geometry(geometry_path);
  const auto fixes = pipe::load_raw_fixes(fixes_path);
  const auto samples = pipe::preprocess(fixes, pcfg, g);
  pipe::save_samples(out_path, samples);
  std::cout << "kept " << samples.size() << " windows from " << fixes.size() << " fixes\n";
  return 0;
}

int run_generate(
  const std::string & config_path, int count, std::int64_t seed, const std::string & fixes_out,
  const std::string & geometry_out, const std::string & events_out)
{
  synth::ScenarioConfig cfg;
  if (!config_path.empty()) cfg = synth::load_scenario(config_path);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.validate();

  const auto traffic = synth::generate(cfg, count);
  pipe::save_raw_fixes(fixes_out, traffic.fixes);
  nav::save_geometry(synth::make_geometry(cfg), geometry_out);
  if (!events_out.empty()) {
    std::ofstream out(events_out);
    if (!out) throw Error("cannot write " + events_out);
    for (const auto & e : traffic.events)
      out << nlohmann::json{{"target_id", e.target_id},
                            {"neighbor_id", e.neighbor_id},
                            {"kind", e.encounter ? "encounter" : "overtaking"},
                            {"t", e.t}}
               .dump()
          << "\n";
  }
  std::cout << "generated " << count << " scenes: " << traffic.fixes.size() << " fixes, "
            << traffic.events.size() << " interactions\n";
  return 0;
}

std::string curve_csv(const std::vector<harness::EpochStats> & curve)
{
  std::ostringstream out;
  out << "epoch,loss,loss_lat,loss_lon,sigma_x,sigma_y\n";
  out.precision(17);
  for (std::size_t i = 0; i < curve.size(); ++i)
    out << (i + 1) << ',' << curve[i].loss << ',' << curve[i].loss_lat << ','
        << curve[i].loss_lon << ',' << curve[i].sigma_x << ',' << curve[i].sigma_y << '\n';
  return out.str();
}

int run_train(
  const std::string & samples_path, const std::string & config_path,
  const std::string & checkpoint_base, const std::string & curve_out)
{
  model::ModelConfig cfg;
  harness::TrainConfig tcfg;
  if (!config_path.empty()) harness::apply_kv(harness::load_kv(config_path), cfg, tcfg);

  const auto samples = pipe::load_samples(samples_path);
  const harness::Split split = harness::split_by_trip(samples, tcfg.test_fraction, tcfg.seed);
  const auto tr = harness::train(harness::take(samples, split.train), cfg, tcfg);

  ckpt::save_checkpoint(tr.model, checkpoint_base);
  if (!curve_out.empty()) write_text(curve_out, curve_csv(tr.curve));
  const auto & last = tr.curve.back();
  std::cout << "trained " << model::to_string(cfg.variant) << " on " << split.train.size()
            << " windows (" << tr.steps << " steps); final loss " << last.loss << ", sigma ("
            << last.sigma_x << ", " << last.sigma_y << ")\n"
            << "checkpoint written to " << checkpoint_base << ".json/.bin\n";
  return 0;
}

int run_evaluate(
  const std::string & samples_path, const std::string & geometry_path,
  const std::string & checkpoint_base, const std::string & report_out, bool deterministic)
{
  const auto m = ckpt::load_checkpoint(checkpoint_base);
  const auto g = nav::load_geometry(geometry_path);
  const auto samples = pipe::load_samples(samples_path);
  const int threads = deterministic ? 1 : harness::threads_from_env();
  const harness::EvalReport r = harness::evaluate(m, samples, g, threads);
  if (!report_out.empty()) write_text(report_out, nlohmann::json(r).dump(2) + "\n");
  std::cout << "evaluated " << r.samples.size() << " windows: ADE " << r.ade_mean << " m, FDE "
            << r.fde_mean << " m (encounter " << r.encounter.fde_mean << " m over "
            << r.encounter.count << ")\n";
  return 0;
}

int run_predict(
  const std::string & samples_path, const std::string & geometry_path,
  const std::string & checkpoint_base, const std::string & out_path)
{
  const auto m = ckpt::load_checkpoint(checkpoint_base);
  const auto g = nav::load_geometry(geometry_path);
  const auto samples = pipe::load_samples(samples_path);
  harness::save_predictions(m, samples, g, out_path);
  std::cout << "wrote " << samples.size() << " predictions to " << out_path << "\n";
  return 0;
}

int run_ablate(
  const std::string & samples_path, const std::string & geometry_path,
  const std::string & config_path, std::vector<std::uint64_t> seeds,
  const std::string & table_out, const std::string & curves_out,
  const std::string & reports_out, bool deterministic)
{
  model::ModelConfig cfg;
  harness::TrainConfig tcfg;
  if (!config_path.empty()) harness::apply_kv(harness::load_kv(config_path), cfg, tcfg);
  if (seeds.empty()) seeds = {tcfg.seed};

  const auto g = nav::load_geometry(geometry_path);
  const auto samples = pipe::load_samples(samples_path);
  const int threads = deterministic ? 1 : harness::threads_from_env();
  const harness::AblationResult a = harness::ablate(samples, cfg, seeds, tcfg, g, threads);

  const std::string table = harness::ablation_csv(a);
  if (!table_out.empty()) write_text(table_out, table);
  if (!curves_out.empty()) write_text(curves_out, harness::horizon_csv(a));
  if (!reports_out.empty()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto & row : a.rows)
      j.push_back({{"variant", model::to_string(row.variant)},
                   {"seed", row.seed},
                   {"report", row.report}});
    write_text(reports_out, j.dump(2) + "\n");
  }
  std::cout << table;
  return 0;
}

int run_plot_fde(const std::vector<std::string> & report_paths, const std::string & out_path)
{
  std::vector<std::string> names;
  std::vector<std::vector<double>> curves;
  for (const auto & path : report_paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    const nlohmann::json j = nlohmann::json::parse(in);
    std::string name = path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
      name = name.substr(slash + 1);
    if (const auto dot = name.find_last_of('.'); dot != std::string::npos) name.resize(dot);
    names.push_back(name);
    curves.push_back(j.at("fde_by_step").get<std::vector<double>>());
  }

  std::ostringstream out;
  out << "step";
  for (const auto & n : names) out << ',' << n;
  out << '\n';
  out.precision(17);
  std::size_t steps = 0;
  for (const auto & c : curves) steps = std::max(steps, c.size());
  for (std::size_t s = 0; s < steps; ++s) {
    out << (s + 1);
    for (const auto & c : curves) {
      out << ',';
      if (s < c.size()) out << c[s];
    }
    out << '\n';
  }
  write_text(out_path, out.str());
  std::cout << "wrote " << steps << "-step FDE curves for " << names.size() << " reports to "
            << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"fairway: vessel trajectory prediction over inland waterways"};
  app.require_subcommand(1);

  // preprocess
  std::string pp_fixes, pp_geometry, pp_out;
  pipe::PipelineConfig pcfg;
  bool pp_all = false;
  auto * pp = app.add_subcommand("preprocess", "turn raw fix JSONL into training windows");
  pp->add_option("--fixes", pp_fixes, "input RawFix JSONL")->required();
  pp->add_option("--geometry", pp_geometry, "fairway geometry JSON")->required();
  pp->add_option("--out", pp_out, "output SequenceSample JSONL")->required();
  pp->add_option("--dt", pcfg.dt, "resampling step, s");
  pp->add_option("--tobs", pcfg.t_obs, "observed steps per window");
  pp->add_option("--horizon", pcfg.horizon, "predicted steps per window");
  pp->add_option("--stride", pcfg.stride, "window stride, steps");
  pp->add_flag("--all-windows", pp_all, "keep windows without interactions too");

  // generate-synthetic
  std::string gs_config, gs_fixes = "synthetic_fixes.jsonl";
  std::string gs_geometry = "synthetic_geometry.json", gs_events = "synthetic_events.jsonl";
  int gs_count = 100;
  std::int64_t gs_seed = -1;
  auto * gs = app.add_subcommand("generate-synthetic", "emit rule-based waterway traffic");
  gs->add_option("--config", gs_config, "scenario JSON (defaults when omitted)");
  gs->add_option("--count", gs_count, "number of scenes")->check(CLI::PositiveNumber);
  gs->add_option("--seed", gs_seed, "overrides the scenario seed");
  gs->add_option("--fixes-out", gs_fixes, "output RawFix JSONL");
  gs->add_option("--geometry-out", gs_geometry, "output geometry JSON");
  gs->add_option("--events-out", gs_events, "output interaction JSONL ('' to skip)");

  // train
  std::string tr_samples, tr_config, tr_ckpt, tr_curve;
  auto * tr = app.add_subcommand("train", "fit a variant and write a checkpoint");
  tr->add_option("--samples", tr_samples, "SequenceSample JSONL")->required();
  tr->add_option("--config", tr_config, "flat key-value config file");
  tr->add_option("--checkpoint", tr_ckpt, "checkpoint base path (.json/.bin)")->required();
  tr->add_option("--curve-out", tr_curve, "per-epoch training CSV");

  // evaluate
  std::string ev_samples, ev_geometry, ev_ckpt, ev_report;
  bool ev_det = false;
  auto * ev = app.add_subcommand("evaluate", "score a checkpoint on held-out windows");
  ev->add_option("--samples", ev_samples, "SequenceSample JSONL")->required();
  ev->add_option("--geometry", ev_geometry, "fairway geometry JSON")->required();
  ev->add_option("--checkpoint", ev_ckpt, "checkpoint base path")->required();
  ev->add_option("--report-out", ev_report, "evaluation report JSON");
  ev->add_flag("--deterministic", ev_det, "single-threaded reductions");

  // predict
  std::string pr_samples, pr_geometry, pr_ckpt, pr_out;
  auto * pr = app.add_subcommand("predict", "dump decoded trajectories as JSONL");
  pr->add_option("--samples", pr_samples, "SequenceSample JSONL")->required();
  pr->add_option("--geometry", pr_geometry, "fairway geometry JSON")->required();
  pr->add_option("--checkpoint", pr_ckpt, "checkpoint base path")->required();
  pr->add_option("--out", pr_out, "prediction JSONL")->required();

  // ablate
  std::string ab_samples, ab_geometry, ab_config, ab_table, ab_curves, ab_reports;
  std::vector<std::uint64_t> ab_seeds;
  bool ab_det = false;
  auto * ab = app.add_subcommand("ablate", "train and score every variant per seed");
  ab->add_option("--samples", ab_samples, "SequenceSample JSONL")->required();
  ab->add_option("--geometry", ab_geometry, "fairway geometry JSON")->required();
  ab->add_option("--config", ab_config, "flat key-value config file");
  ab->add_option("--seeds", ab_seeds, "training seeds")->delimiter(',');
  ab->add_option("--table-out", ab_table, "summary CSV");
  ab->add_option("--curves-out", ab_curves, "per-step FDE CSV");
  ab->add_option("--reports-out", ab_reports, "full reports JSON");
  ab->add_flag("--deterministic", ab_det, "single-threaded reductions");

  // plot-fde
  std::vector<std::string> pf_reports;
  std::string pf_out;
  auto * pf = app.add_subcommand("plot-fde", "merge report FDE curves into plot-ready CSV");
  pf->add_option("--report", pf_reports, "evaluation report JSON (repeatable)")->required();
  pf->add_option("--out", pf_out, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (pp->parsed()) {
      pcfg.require_interaction = !pp_all;
      return run_preprocess(pp_fixes, pp_geometry, pp_out, pcfg);
    }
    if (gs->parsed())
      return run_generate(gs_config, gs_count, gs_seed, gs_fixes, gs_geometry, gs_events);
    if (tr->parsed()) return run_train(tr_samples, tr_config, tr_ckpt, tr_curve);
    if (ev->parsed()) return run_evaluate(ev_samples, ev_geometry, ev_ckpt, ev_report, ev_det);
    if (pr->parsed()) return run_predict(pr_samples, pr_geometry, pr_ckpt, pr_out);
    if (ab->parsed())
      return run_ablate(
        ab_samples, ab_geometry, ab_config, ab_seeds, ab_table, ab_curves, ab_reports, ab_det);
    if (pf->parsed()) return run_plot_fde(pf_reports, pf_out);
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
