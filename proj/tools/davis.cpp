// davis: build, verify and search the Seiberg-Witten basic class candidates
// of the Davis manifold.

#include <atomic>
#include <csignal>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "davis/pipeline.hpp"

namespace {

std::atomic<bool> g_interrupt{false};

extern "C" void on_sigint(int) { g_interrupt.store(true); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Davis manifold intersection data and basic class search"};
  app.require_subcommand(1);
  std::string dir = ".";
  app.add_option("--dir", dir, "Working directory for stage files")->capture_default_str();

  std::uint64_t seed = 0;
  auto* geometry = app.add_subcommand("build-geometry", "120-cell, side pairing and great circles");
  geometry->add_option("--orientation-seed", seed, "0 for canonical orientations, else random flips")
      ->capture_default_str();

  auto* matrices = app.add_subcommand("build-matrices", "Q, Mb and MB from geometry.txt");
  auto* group = app.add_subcommand("gen-group", "Signed permutation group from the polytope symmetries");
  auto* verify = app.add_subcommand("verify", "Recheck every stage file and invariant");

  davis::SearchCommand cmd;
  std::string shard;
  std::string order = "identity";
  bool no_parity = false;
  auto* search = app.add_subcommand("search", "Enumerate minimal admissible vectors");
  search->add_option("--free-support", cmd.free_support, "Cap on the number of nonzero coordinates");
  search->add_option("--shard-depth", cmd.shard_depth, "Prefix depth for sharding");
  search->add_option("--shard-index", shard, "Shard m/n");
  search->add_option("--resume", cmd.resume, "Checkpoint file to resume from");
  search->add_option("--threads", cmd.threads, "Worker threads")->capture_default_str();
  search->add_option("--checkpoint-every", cmd.checkpoint_every, "Nodes between checkpoints");
  search->add_option("--stop-after", cmd.stop_after, "Stop with a checkpoint after this many nodes");
  search->add_option("--order", order, "Variable order")
      ->check(CLI::IsMember({"identity", "greedy"}))
      ->capture_default_str();
  search->add_flag("--no-parity", no_parity, "Drop the evenness condition on pairings");
  search->add_option("--output", cmd.output, "Certificate file name");

  std::vector<std::string> certificates;
  auto* report = app.add_subcommand("report", "Merge certificates and decide vanishing");
  report->add_option("certificates", certificates, "Certificate files")->required();

  CLI11_PARSE(app, argc, argv);

  std::signal(SIGINT, on_sigint);
  cmd.interrupt = &g_interrupt;
  cmd.greedy_order = order == "greedy";
  cmd.require_even = !no_parity;
  if (!shard.empty()) {
    const auto slash = shard.find('/');
    try {
      if (slash == std::string::npos) throw std::invalid_argument("missing /");
      cmd.shard_index = std::stoi(shard.substr(0, slash));
      cmd.shard_count = std::stoi(shard.substr(slash + 1));
    } catch (const std::exception&) {
      std::cerr << "--shard-index expects m/n\n";
      return davis::kExitVerification;
    }
    if (cmd.shard_count < 1 || cmd.shard_index < 0 || cmd.shard_index >= cmd.shard_count ||
        cmd.shard_depth < 1) {
      std::cerr << "--shard-index m/n needs 0 <= m < n and --shard-depth >= 1\n";
      return davis::kExitVerification;
    }
  }

  try {
    if (*geometry) return davis::run_build_geometry(dir, seed, std::cout);
    if (*matrices) return davis::run_build_matrices(dir, std::cout);
    if (*group) return davis::run_gen_group(dir, std::cout);
    if (*verify) return davis::run_verify(dir, std::cout);
    if (*search) return davis::run_search(dir, cmd, std::cout);
    if (*report) return davis::run_report(dir, certificates, std::cout);
  } catch (const davis::StaleInput& e) {
    std::cerr << "stale or missing input: " << e.what() << '\n';
    return davis::kExitStale;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return davis::kExitVerification;
  }
  return davis::kExitOk;
}
