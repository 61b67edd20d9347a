// catnav command line: scene generation, closed-loop trials, cache ablation,
// replay inspection and a local mock adapter server.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <thread>

#include "catnav/core/encoding.hpp"
#include "catnav/core/error.hpp"
#include "catnav/core/raster.hpp"
#include "catnav/planner/proposals.hpp"
#include "catnav/providers/mock.hpp"
#include "catnav/providers/mock_server.hpp"
#include "catnav/providers/remote.hpp"
#include "catnav/reasoning/overlay.hpp"
#include "catnav/sim/ablation.hpp"
#include "catnav/sim/episode.hpp"
#include "catnav/sim/render.hpp"
#include "catnav/sim/tasks.hpp"

namespace fs = std::filesystem;
using namespace catnav;

namespace {

std::atomic<bool> g_stop{false};

sim::Scene resolve_scene(const std::string& scene_path, const std::string& task, std::uint64_t seed) {
  if (!scene_path.empty()) return sim::load_scene(scene_path);
  return sim::make_task(task, seed);
}

sim::PipelineConfig resolve_config(const std::string& path) {
  if (path.empty()) return {};
  return sim::pipeline_config_from_json(parse_text(read_file(path)));
}

std::vector<providers::PaletteEntry> palette_of(const sim::Scene& scene) {
  std::vector<providers::PaletteEntry> out;
  for (const auto& c : scene.classes) out.push_back({c.label, c.color});
  return out;
}

struct RunArgs {
  std::string scene, task = "footpath-right", config, providers, out = "runs";
  std::uint64_t seed = 1;
  int trials = 10;
  bool no_replay = false;
};

int cmd_run(const RunArgs& a) {
  const auto config = resolve_config(a.config);
  std::optional<providers::ProviderEndpointConfig> endpoint;
  if (!a.providers.empty()) endpoint = providers::endpoint_config_from_json(parse_text(read_file(a.providers)));

  fs::create_directories(a.out);
  std::vector<sim::EpisodeMetrics> trials;
  for (int i = 0; i < a.trials; ++i) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
    auto scene = std::make_shared<sim::Scene>(resolve_scene(a.scene, a.task, seed));
    sim::EpisodeOptions opts;
    opts.record_replay = !a.no_replay;
    if (endpoint) {
      auto remote = std::make_shared<providers::RemoteProvider>(*endpoint);
      opts.providers = providers::make_remote_providers(remote);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto result = sim::run_episode(*scene, config, seed, opts);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& m = result.metrics;
    std::cout << m.task << " seed=" << seed << " reached=" << m.goal_reached << " dist=" << m.dist_to_goal
              << " collisions=" << m.collisions << " violation=" << m.behavior_violation_length
              << " queries=" << m.scene_queries << " hits=" << m.cache_hits << " wall=" << wall << "s\n";
    if (!a.no_replay)
      sim::write_replay(result, fs::path(a.out) / (m.task + "_seed" + std::to_string(seed) + ".jsonl"));
    trials.push_back(m);
  }
  write_file(fs::path(a.out) / "trials.csv", sim::trials_csv(trials));
  const std::vector<sim::TaskSummary> summary{sim::compute_metrics(trials)};
  write_file(fs::path(a.out) / "summary.csv", sim::summary_csv(summary));
  std::cout << sim::summary_csv(summary);
  return 0;
}

struct AblateArgs {
  std::string stream;
  double gamma = 0.55;
  int k = 5;
  int frames = 2000;
  std::uint64_t seed = 1;
};

int cmd_ablate(const AblateArgs& a) {
  std::vector<sim::StreamFrame> stream;
  if (!a.stream.empty()) {
    stream = sim::load_stream(a.stream);
  } else {
    sim::StreamConfig sc;
    sc.frames = a.frames;
    sc.seed = a.seed;
    stream = sim::make_ablation_stream(sc);
  }
  cache::CacheConfig cc;
  cc.gamma = a.gamma;
  cc.k = a.k;
  const auto r = sim::run_cache_ablation(stream, cc);
  const Json out{{"gamma", a.gamma},
                 {"k", a.k},
                 {"frames", r.frames},
                 {"scene_queries", r.scene_queries},
                 {"cache_hits", r.cache_hits},
                 {"hit_rate", r.hit_rate},
                 {"query_reduction_pct", r.query_reduction_pct}};
  std::cout << out.dump() << "\n";
  return 0;
}

struct ReplayArgs {
  std::string log, out;
  bool overlays = false;
  bool verify = false;
};

int cmd_replay(const ReplayArgs& a) {
  const auto lines = sim::read_replay(a.log);
  if (lines.empty() || lines.front().value("type", "") != "header")
    throw Error(ErrorCode::kParseError, a.log + " has no header record");
  const Json& header = lines.front();
  check_schema_version(header);
  const auto scene = sim::scene_from_json(header.at("scene"));
  const auto config = sim::pipeline_config_from_json(header.at("config"));
  const std::uint64_t seed = header.at("seed").get<std::uint64_t>();

  int ticks = 0, grids = 0, overlays = 0;
  const fs::path out = a.out.empty() ? fs::path(a.log).parent_path() / (fs::path(a.log).stem().string() + "_render")
                                     : fs::path(a.out);
  for (const auto& rec : lines) {
    const std::string type = rec.value("type", "");
    if (type == "tick") {
      ++ticks;
      if (!a.overlays || !rec.contains("proposals")) continue;
      const int tick = rec.at("tick").get<int>();
      const Pose2D pose = pose_from_json(rec.at("pose"));
      std::vector<sim::AgentPose> agents;
      for (std::size_t i = 0; i < rec.at("agents").size(); ++i)
        agents.push_back({i, rec["agents"][i][0].get<double>(), rec["agents"][i][1].get<double>()});
      const auto obs = sim::render_observation(scene, agents, pose, config.camera, tick);
      const auto set = planner::proposal_set_from_json(rec.at("proposals"));
      const auto overlay = reasoning::render_overlay(obs.rgb, set, config.camera, pose);
      write_file(out / ("overlay_" + std::to_string(tick) + ".ppm"), encode_ppm(overlay.pixels));
      ++overlays;
    } else if (type == "grid" && a.overlays) {
      const int tick = rec.at("tick").get<int>();
      write_file(out / ("grid_" + std::to_string(tick) + ".pgm"), base64_decode(rec.at("pgm_b64").get<std::string>()));
      ++grids;
    }
  }
  if (a.overlays) write_file(out / "scene.ppm", encode_ppm(sim::scene_map(scene)));

  const auto& last = lines.back();
  if (last.value("type", "") == "metrics") {
    std::cout << "metrics " << last.at("metrics").dump() << "\n";
  } else {
    std::cout << "log is truncated: no metrics record\n";
  }
  std::cout << "ticks " << ticks;
  if (a.overlays) std::cout << " overlays " << overlays << " grids " << grids << " -> " << out.string();
  std::cout << "\n";

  if (a.verify) {
    const auto rerun = sim::run_episode(scene, config, seed);
    std::string text;
    for (const auto& rec : lines) text += rec.dump() + "\n";
    const bool same = rerun.replay_text() == text;
    std::cout << "verify " << (same ? "identical" : "DIVERGED") << "\n";
    return same ? 0 : 3;
  }
  return 0;
}

int cmd_serve(const std::string& scene_path, const std::string& task, int port, double epsilon) {
  const auto scene = resolve_scene(scene_path, task, 1);
  providers::MockAdapterServer::Options opts;
  opts.palette = palette_of(scene);
  opts.segment_epsilon = epsilon;
  providers::MockAdapterServer server(opts);
  server.start(port);
  std::cout << "mock adapter listening on " << server.base_url() << std::endl;
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  std::cout << "served " << server.requests_served() << " requests\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catnav: semantic risk costmaps and reasoning-guided path selection"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "run closed-loop trials and write metrics and replays");
  run_cmd->add_option("--scene", run.scene, "scene JSON file");
  run_cmd->add_option("--task", run.task, "generated task when no scene file is given")
      ->check(CLI::IsMember(sim::task_names()));
  run_cmd->add_option("--config", run.config, "pipeline config JSON (partial overrides)");
  run_cmd->add_option("--providers", run.providers, "adapter endpoint JSON; mock providers when omitted");
  run_cmd->add_option("--seed", run.seed, "first seed");
  run_cmd->add_option("--trials", run.trials, "number of seeds")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out, "output directory");
  run_cmd->add_flag("--no-replay", run.no_replay, "skip writing replay logs");

  AblateArgs ab;
  auto* ab_cmd = app.add_subcommand("ablate-cache", "replay a frame stream through the novelty gate");
  ab_cmd->add_option("--stream", ab.stream, "stream JSONL; generated when omitted");
  ab_cmd->add_option("--gamma", ab.gamma, "novelty threshold");
  ab_cmd->add_option("--k", ab.k, "neighbors to aggregate")->check(CLI::PositiveNumber);
  ab_cmd->add_option("--frames", ab.frames, "generated stream length");
  ab_cmd->add_option("--seed", ab.seed, "generated stream seed");

  ReplayArgs rp;
  auto* rp_cmd = app.add_subcommand("replay", "summarize a replay log and render its rasters");
  rp_cmd->add_option("--log", rp.log, "replay JSONL")->required()->check(CLI::ExistingFile);
  rp_cmd->add_flag("--render-overlays", rp.overlays, "write proposal overlays, grid snapshots and a scene map");
  rp_cmd->add_option("--out", rp.out, "raster directory");
  rp_cmd->add_flag("--verify", rp.verify, "re-run the episode and compare byte for byte");

  std::string ms_task = "footpath-right", ms_out;
  std::uint64_t ms_seed = 1;
  auto* ms_cmd = app.add_subcommand("make-scene", "write a generated task scene");
  ms_cmd->add_option("--task", ms_task)->check(CLI::IsMember(sim::task_names()));
  ms_cmd->add_option("--seed", ms_seed);
  ms_cmd->add_option("--out", ms_out)->required();

  sim::StreamConfig st;
  std::string st_out;
  auto* st_cmd = app.add_subcommand("make-stream", "write a synthetic frame stream for cache ablation");
  st_cmd->add_option("--frames", st.frames);
  st_cmd->add_option("--clusters", st.clusters);
  st_cmd->add_option("--seed", st.seed);
  st_cmd->add_option("--out", st_out)->required();

  std::string sv_scene, sv_task = "footpath-right";
  int sv_port = 8765;
  double sv_eps = 0.1;
  auto* sv_cmd = app.add_subcommand("serve-mock", "serve the adapter protocol with mock models");
  sv_cmd->add_option("--scene", sv_scene, "scene JSON whose palette decodes frames");
  sv_cmd->add_option("--task", sv_task)->check(CLI::IsMember(sim::task_names()));
  sv_cmd->add_option("--port", sv_port);
  sv_cmd->add_option("--epsilon", sv_eps, "segmentation noise");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*ab_cmd) return cmd_ablate(ab);
    if (*rp_cmd) return cmd_replay(rp);
    if (*ms_cmd) {
      sim::save_scene(sim::make_task(ms_task, ms_seed), ms_out);
      return 0;
    }
    if (*st_cmd) {
      sim::save_stream(sim::make_ablation_stream(st), st_out);
      return 0;
    }
    if (*sv_cmd) return cmd_serve(sv_scene, sv_task, sv_port, sv_eps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
