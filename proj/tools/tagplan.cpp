// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
// tagplan: fiducial-tag placement planning from declarative scene files.
// Subcommands: plan, render, validate, eval. Exit codes: 0 success,
// 2 input error, 3 infeasible project, 4 validation failure.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tagplan/fixtures.hpp"
#include "tagplan/ga.hpp"
#include "tagplan/plan_io.hpp"
#include "tagplan/project_io.hpp"
#include "tagplan/render_svg.hpp"
#include "tagplan/table_cache.hpp"
#include "tagplan/thread_pool.hpp"
#include "tagplan/valuation.hpp"
#include "tagplan/validation.hpp"

namespace fs = std::filesystem;
using namespace tagplan;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitValidation = 4;

struct PlanOptions {
  std::string project_path;
  std::string out_dir = "tagplan_out";
  std::string cache_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string metric;
  bool no_cost = false;
  int ga_iters = -1;
  int ga_population = -1;
  int ga_stall = -1;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void apply_overrides(model::ProjectSpec& spec, const PlanOptions& opt) {
  if (opt.seed_set) spec.ga.seed = opt.seed;
  if (!opt.metric.empty()) spec.planning.metric = sensing::metric_from_string(opt.metric);
  if (opt.no_cost) spec.cost_enabled = false;
  if (opt.ga_iters > 0) spec.ga.max_iters = opt.ga_iters;
  if (opt.ga_population > 0) spec.ga.population = opt.ga_population;
  if (opt.ga_stall >= 0) spec.ga.stall_window = opt.ga_stall;
}

void prepare_table(valuation::FimTable& table, const model::ProjectModel& m,
                   const std::string& cache_path) {
  const std::uint64_t hash = io::table_hash(m.spec);
  if (!cache_path.empty() && io::load_table_cache(table, hash, cache_path)) {
    std::cerr << "FIM cache loaded from " << cache_path << "\n";
    return;
  }
  table.precompute_all();
  if (!cache_path.empty()) {
    const fs::path parent = fs::path(cache_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    io::save_table_cache(table, hash, cache_path);
    std::cerr << "FIM cache written to " << cache_path << "\n";
  }
}

std::string history_csv(const std::vector<ga::HistoryRecord>& history) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,best,mean,evaluations,cache_hit_rate\n";
  for (const ga::HistoryRecord& h : history)
    os << h.iteration << ',' << h.best << ',' << h.mean << ',' << h.evaluations << ','
       << h.cache_hit_rate << '\n';
  return os.str();
}

ga::Problem make_problem(const model::ProjectModel& m, const valuation::Evaluator& eval) {
  ga::Problem problem;
  problem.n_phases = m.n_phases();
  problem.n_slots = m.n_slots();
  problem.n_sizes = m.n_sizes();
  problem.max_tags_per_phase = m.spec.planning.max_tags_per_phase;
  problem.feasible = m.slot_feasible;
  problem.fitness = [&eval](const ga::Chromosome& c) { return eval.score(c); };
  return problem;
}

int cmd_plan(const PlanOptions& opt) {
  model::ProjectSpec spec = io::load_project(opt.project_path);
  apply_overrides(spec, opt);
  const model::ProjectModel m = model::build_project_model(spec);
  for (const std::string& w : m.warnings) std::cerr << "warning: " << w << "\n";

  valuation::FimTable table(m);
  prepare_table(table, m, opt.cache_path);
  const valuation::Evaluator eval(m, table, m.spec.planning.metric, m.spec.planning.normalize,
                                  m.spec.cost_enabled);

  const ga::Problem problem = make_problem(m, eval);
  const ga::RunResult result =
      ga::run(problem, m.spec.ga, [&table] { return table.hit_rate(); });

  const double utility = eval.total_utility(result.best);
  const double cost = eval.total_cost(result.best);
  const io::PlanFile plan =
      io::build_plan(m, result.best, utility, cost, utility - cost, m.spec.ga.seed);

  fs::create_directories(opt.out_dir);
  io::save_plan(plan, (fs::path(opt.out_dir) / "plan.json").string());
  write_text(fs::path(opt.out_dir) / "history.csv", history_csv(result.history));
  for (std::size_t pi = 0; pi < m.n_phases(); ++pi) {
    const std::vector<double> values = eval.phase_cell_utilities(result.best, pi);
    write_text(fs::path(opt.out_dir) / ("phase_" + std::to_string(pi) + ".svg"),
               render::render_phase_svg(m, pi, values, result.best));
  }

  std::cout << "plan written to " << opt.out_dir << "\n"
            << "score " << plan.score << " (utility " << plan.utility << ", cost " << plan.cost
            << "), placements " << valuation::ChangeCounts{plan.placements, 0, 0}.total_placements()
            << ", removals " << plan.removals << "\n";
  return 0;
}

int cmd_render(const std::string& plan_path, const std::string& project_path,
               const std::string& out_dir, const std::string& cache_path) {
  const io::PlanFile plan = io::load_plan(plan_path);
  const model::ProjectSpec spec = io::load_project(project_path);
  if (plan.project_hash != spec.content_hash)
    throw model::ProjectSchemaError("plan does not match project (content hash mismatch)");
  const model::ProjectModel m = model::build_project_model(spec);
  if (plan.chromosome.genes.size() != m.gene_count())
    throw model::ProjectSchemaError("plan gene count does not match project");

  valuation::FimTable table(m);
  prepare_table(table, m, cache_path);
  const valuation::Evaluator eval(m, table, m.spec.planning.metric, m.spec.planning.normalize,
                                  m.spec.cost_enabled);

  fs::create_directories(out_dir);
  for (std::size_t pi = 0; pi < m.n_phases(); ++pi) {
    const std::vector<double> values = eval.phase_cell_utilities(plan.chromosome, pi);
    write_text(fs::path(out_dir) / ("phase_" + std::to_string(pi) + ".svg"),
               render::render_phase_svg(m, pi, values, plan.chromosome));
  }
  std::cout << "renders written to " << out_dir << "\n";
  return 0;
}

// --------------------------------------------------------------------------
// validate suites

int suite_jacobian(std::uint64_t seed) {
  Rng rng(seed);
  sensing::CameraModel cam;
  cam.t_cv = sensing::forward_camera_extrinsics();
  const auto t0 = std::chrono::steady_clock::now();
  int ok = 0;
  const int cases = 100;
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    // Random pose looking at a random corner in front of the camera.
    const double yaw = rng.uniform01() * 2.0 * M_PI;
    const spatial::Vec3 pos(rng.uniform01() * 4.0 - 2.0, rng.uniform01() * 4.0 - 2.0,
                            1.0 + rng.uniform01());
    const spatial::Pose t_vw = spatial::yaw_pose(yaw, pos);
    const double ahead = 0.5 + rng.uniform01() * 4.0;
    const double side = rng.uniform01() * 2.0 - 1.0;
    const double up = rng.uniform01() * 2.0 - 1.0;
    // Place the corner in the camera frame, then map it back to the world.
    const spatial::HomPoint p_c(side, up, ahead, 1.0);
    const spatial::Pose t_cw = spatial::compose(cam.t_cv, t_vw);
    const spatial::HomPoint p_w = spatial::apply(spatial::invert(t_cw), p_c);

    const auto analytic = sensing::corner_jacobian(t_vw, cam, p_w);
    const auto fd = validation::fd_jacobian(t_vw, cam, p_w);
    const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
    const double rel = (analytic - fd).cwiseAbs().maxCoeff() / scale;
    worst = std::max(worst, rel);
    if (rel < 1e-5) ++ok;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "jacobian\t" << ok << "/" << cases << " within 1e-5\tworst " << worst << "\t"
            << secs << " s\n";
  return ok == cases && secs < 5.0 ? 0 : kExitValidation;
}

int suite_crlb(std::uint64_t seed, int trials) {
  const validation::CrlbFixture fx = validation::make_crlb_fixture();
  const validation::CrlbResult res =
      validation::crlb_check(fx.t_vw, fx.slots, fx.scn, fx.cam, fx.noise, trials, seed);
  const bool pass = res.ratio >= 0.8 && res.ratio <= 1.25;
  std::cout << "crlb\tratio " << res.ratio << " (empirical " << res.empirical_trace << " / bound "
            << res.crlb_trace << ")\ttrials " << res.trials_used << "\tfailures " << res.failures
            << "\t" << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : kExitValidation;
}

int suite_oracle(std::uint64_t seed) {
  const model::ProjectModel m = model::build_project_model(validation::make_tiny_spec());
  valuation::FimTable table(m);
  table.precompute_all();
  const valuation::Evaluator eval(m, table, m.spec.planning.metric, true, false);
  ga::Problem problem = make_problem(m, eval);

  const validation::OracleResult oracle = validation::exhaustive_oracle(problem);
  int hits = 0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    ga::GaParams params = m.spec.ga;
    params.seed = seed + static_cast<std::uint64_t>(s);
    params.max_iters = 500;
    const ga::RunResult run = ga::run(problem, params);
    const double gap = oracle.best_score > 0.0
                           ? (oracle.best_score - run.best_score) / oracle.best_score
                           : 0.0;
    if (gap <= 0.01) ++hits;
  }
  const bool pass = hits >= 9;
  std::cout << "oracle\tstates " << oracle.states << "\toptimum " << oracle.best_score << "\t"
            << hits << "/" << seeds << " seeds within 1%\t" << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : kExitValidation;
}

int suite_rmse(std::uint64_t seed) {
  const model::ProjectModel m = model::build_project_model(validation::make_room_spec());
  const ga::Chromosome all = m.all_occupied();
  const std::vector<sensing::ActiveSlot> slots = m.active_slots(all, 0);
  const scene::Scene& scn = m.phases[0].scenes.front();
  const geom::Polygon& region = m.spec.phases[0].rois[0].polygon;

  bool pass = true;
  for (const auto kind : {validation::TrajectoryKind::Cwk, validation::TrajectoryKind::Lsa,
                          validation::TrajectoryKind::Spn}) {
    const validation::Trajectory traj =
        validation::gen_trajectory(kind, region, m.phases[0].scenes.front().altitude, {});

    sensing::NoiseModel noiseless;
    noiseless.sigma_px = 1e-12;
    const validation::EvalReport clean =
        validation::rmse_eval(traj, slots, scn, m.spec.camera, noiseless, seed);
    const validation::EvalReport noisy =
        validation::rmse_eval(traj, slots, scn, m.spec.camera, m.spec.noise, seed);

    const bool ok = clean.rmse < 1e-6 && clean.estimated > 0 && noisy.rmse < 0.5;
    pass = pass && ok;
    std::cout << "rmse\t" << validation::to_string(kind) << "\tnoiseless " << clean.rmse
              << "\tsigma1 " << noisy.rmse << "\testimated " << noisy.estimated << "\tskipped "
              << noisy.skipped << "\t" << (ok ? "PASS" : "FAIL") << "\n";
  }
  return pass ? 0 : kExitValidation;
}

// --------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& project_path, const std::string& plan_a_path,
             const std::string& plan_b_path, const std::string& trajectories, int n_seeds,
             std::uint64_t seed, std::size_t phase) {
  const model::ProjectSpec spec = io::load_project(project_path);
  const model::ProjectModel m = model::build_project_model(spec);
  const io::PlanFile plan_a = io::load_plan(plan_a_path);
  const io::PlanFile plan_b = io::load_plan(plan_b_path);
  for (const io::PlanFile* p : {&plan_a, &plan_b}) {
    if (p->project_hash != spec.content_hash)
      throw model::ProjectSchemaError("plan does not match project (content hash mismatch)");
    if (p->chromosome.genes.size() != m.gene_count())
      throw model::ProjectSchemaError("plan gene count does not match project");
  }
  if (phase >= m.n_phases()) throw model::ProjectSchemaError("eval: phase index out of range");

  struct Entry {
    std::string label;
    std::vector<sensing::ActiveSlot> slots;
  };
  std::vector<Entry> entries;
  entries.push_back({"planA", m.active_slots(plan_a.chromosome, phase)});
  entries.push_back({"planB", m.active_slots(plan_b.chromosome, phase)});
  entries.push_back({"all_occupied", m.active_slots(m.all_occupied(), phase)});

  const scene::Scene& scn = m.phases[phase].scenes.front();
  const geom::Polygon& region = m.spec.phases[phase].rois[0].polygon;

  std::vector<validation::TrajectoryKind> kinds;
  std::stringstream ss(trajectories);
  std::string token;
  while (std::getline(ss, token, ',')) kinds.push_back(validation::trajectory_from_string(token));

  std::cout << "trajectory\tplan\ttags\trmse_median\testimated\tskipped\tfailures\n";
  for (const auto kind : kinds) {
    const validation::Trajectory traj = validation::gen_trajectory(kind, region, scn.altitude, {});
    for (const Entry& e : entries) {
      std::vector<double> rmses;
      std::size_t skipped = 0, failures = 0, estimated = 0;
      for (int s = 0; s < n_seeds; ++s) {
        const validation::EvalReport rep = validation::rmse_eval(
            traj, e.slots, scn, m.spec.camera, m.spec.noise, seed + static_cast<std::uint64_t>(s));
        rmses.push_back(rep.rmse);
        skipped += rep.skipped;
        failures += rep.failures;
        estimated += rep.estimated;
      }
      std::sort(rmses.begin(), rmses.end());
      const double median = rmses[rmses.size() / 2];
      std::cout << validation::to_string(kind) << '\t' << e.label << '\t' << e.slots.size() << '\t'
                << median << '\t' << estimated << '\t' << skipped << '\t' << failures << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fiducial tag placement planner"};
  app.set_version_flag("--version", io::kToolVersion);
  app.require_subcommand(1);

  PlanOptions plan_opt;
  CLI::App* plan = app.add_subcommand("plan", "plan tag placement for a project");
  plan->add_option("project", plan_opt.project_path, "project JSON file")->required();
  plan->add_option("--seed", plan_opt.seed, "GA seed override")
      ->each([&plan_opt](const std::string&) { plan_opt.seed_set = true; });
  plan->add_option("--metric", plan_opt.metric, "trace|logdet|mineig");
  plan->add_flag("--no-cost,--cost.w-plc-zero", plan_opt.no_cost, "disable the cost term");
  plan->add_option("--out", plan_opt.out_dir, "output directory");
  plan->add_option("--cache", plan_opt.cache_path, "FIM table cache file");
  plan->add_option("--ga-iters", plan_opt.ga_iters, "max GA generations override");
  plan->add_option("--ga-population", plan_opt.ga_population, "population size override");
  plan->add_option("--ga-stall", plan_opt.ga_stall, "stall window override");

  std::string render_plan_path, render_project_path, render_out = "tagplan_out",
              render_cache;
  CLI::App* render_cmd = app.add_subcommand("render", "render plan heatmaps to SVG");
  render_cmd->add_option("plan", render_plan_path, "plan JSON file")->required();
  render_cmd->add_option("project", render_project_path, "project JSON file")->required();
  render_cmd->add_option("--out", render_out, "output directory");
  render_cmd->add_option("--cache", render_cache, "FIM table cache file");

  std::string suite;
  std::uint64_t validate_seed = 7;
  int crlb_trials = 2000;
  CLI::App* validate_cmd = app.add_subcommand("validate", "run a validation suite");
  validate_cmd->add_option("suite", suite, "jacobian|crlb|oracle|rmse")->required();
  validate_cmd->add_option("--seed", validate_seed, "suite seed");
  validate_cmd->add_option("--trials", crlb_trials, "Monte Carlo trials (crlb)");

  std::string eval_project, eval_plan_a, eval_plan_b, eval_trajectories = "cwk,lsa,spn";
  int eval_seeds = 10;
  std::uint64_t eval_seed = 7;
  std::size_t eval_phase = 0;
  CLI::App* eval_cmd = app.add_subcommand("eval", "compare plans by trajectory RMSE");
  eval_cmd->add_option("project", eval_project, "project JSON file")->required();
  eval_cmd->add_option("planA", eval_plan_a, "first plan")->required();
  eval_cmd->add_option("planB", eval_plan_b, "second plan")->required();
  eval_cmd->add_option("--trajectories", eval_trajectories, "comma list of cwk,lsa,spn");
  eval_cmd->add_option("--seeds", eval_seeds, "number of noise seeds");
  eval_cmd->add_option("--seed", eval_seed, "base seed");
  eval_cmd->add_option("--phase", eval_phase, "phase index");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(plan_opt);
    if (render_cmd->parsed())
      return cmd_render(render_plan_path, render_project_path, render_out, render_cache);
    if (validate_cmd->parsed()) {
      if (suite == "jacobian") return suite_jacobian(validate_seed);
      if (suite == "crlb") return suite_crlb(validate_seed, crlb_trials);
      if (suite == "oracle") return suite_oracle(validate_seed);
      if (suite == "rmse") return suite_rmse(validate_seed);
      std::cerr << "unknown suite: " << suite << "\n";
      return kExitInput;
    }
    if (eval_cmd->parsed())
      return cmd_eval(eval_project, eval_plan_a, eval_plan_b, eval_trajectories, eval_seeds,
                      eval_seed, eval_phase);
  } catch (const model::InfeasibleProject& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const model::ProjectSchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
