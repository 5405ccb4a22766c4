// SPDX-License-Identifier: Apache-2.0
// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "soccerdqn/soccerdqn.h"

namespace {

struct CliError {
  sdqn_status status;
};

void check(sdqn_status st) {
  if (st != SDQN_OK) {
    std::cerr << "error (" << sdqn_status_name(st) << "): " << sdqn_last_error() << '\n';
    throw CliError{st};
  }
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ~Handle() { Free(p); }
};
using ConfigHandle = Handle<sdqn_config, sdqn_config_free>;
using PolicyHandle = Handle<sdqn_policy, sdqn_policy_free>;
using EvalHandle = Handle<sdqn_eval, sdqn_eval_free>;

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

ConfigHandle load_config(const Common& c) {
  ConfigHandle cfg;
  if (c.config_path.empty()) {
    check(sdqn_config_default(&cfg.p));
  } else {
    check(sdqn_config_load(c.config_path.c_str(), &cfg.p));
  }
  return cfg;
}

void patch(ConfigHandle& cfg, const nlohmann::json& j) { check(sdqn_config_patch(cfg.p, j.dump().c_str())); }

PolicyHandle make_policy(const std::string& spec) {
  PolicyHandle p;
  check(sdqn_policy_create(spec.c_str(), &p.p));
  return p;
}

std::string text_of(sdqn_status (*get)(const sdqn_eval*, char*, size_t, size_t*), const sdqn_eval* e) {
  size_t n = 0;
  check(get(e, nullptr, 0, &n));
  std::string s(n + 1, '\0');
  check(get(e, s.data(), s.size(), &n));
  s.resize(n);
  return s;
}

const char* outcome_name(int o) {
  switch (o) {
    case SDQN_WIN: return "Win";
    case SDQN_LOSE: return "Lose";
    default: return "Tie";
  }
}

void print_metrics(const sdqn_train_metrics*, const char* line, void*) {
  std::fputs(line, stdout);
  std::fputc('\n', stdout);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robot-soccer simulator with a deep Q-network agent"};
  app.require_subcommand(0, 1);
  bool print_config = false;
  Common common;
  app.add_flag("--print-config", print_config, "Print the effective configuration as JSON");
  app.add_option("--config", common.config_path, "Configuration file (JSON)")->check(CLI::ExistingFile);

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Configuration file (JSON)")->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& s) { common.seed = s; common.seed_set = true; }, "Random seed");
  };

  // train
  auto* train = app.add_subcommand("train", "Train the agent and write a checkpoint");
  add_seed(train);
  std::int64_t steps = -1;
  std::string train_ckpt = "agent.ckpt";
  std::string train_opponent;
  std::string resume;
  train->add_option("--steps", steps, "Total environment frames")->check(CLI::NonNegativeNumber);
  train->add_option("--checkpoint", train_ckpt, "Checkpoint output path")->capture_default_str();
  train->add_option("--opponent", train_opponent, "random | chaser | checkpoint:PATH");
  train->add_option("--resume", resume, "Continue from this checkpoint")->check(CLI::ExistingFile);

  // play
  auto* play = app.add_subcommand("play", "Play one match and print the score");
  add_seed(play);
  std::string play_ckpt;
  std::string play_home;
  std::string play_opponent = "random";
  std::string replay_out;
  play->add_option("--checkpoint", play_ckpt, "Agent checkpoint playing home")->check(CLI::ExistingFile);
  play->add_option("--home", play_home, "Home policy instead of a checkpoint (zero | random | chaser)");
  play->add_option("--opponent", play_opponent, "random | chaser | checkpoint:PATH")->capture_default_str();
  play->add_option("--replay-out", replay_out, "Write a replay log");

  // eval
  auto* eval = app.add_subcommand("eval", "Seeded matches against each opponent, as a table");
  add_seed(eval);
  std::string eval_ckpt;
  std::string eval_policy;
  std::vector<std::string> eval_opponents;
  int matches = 20;
  int threads = 1;
  eval->add_option("--checkpoint", eval_ckpt, "Agent checkpoint")->check(CLI::ExistingFile);
  eval->add_option("--policy", eval_policy, "Evaluated policy instead of a checkpoint");
  eval->add_option("--opponent", eval_opponents, "Opponent, repeatable (default: random and chaser)");
  eval->add_option("--matches", matches, "Matches per opponent")->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--threads", threads, "Parallel match workers")->check(CLI::PositiveNumber)->capture_default_str();

  // inspect-checkpoint
  auto* inspect = app.add_subcommand("inspect-checkpoint", "Print a checkpoint's header");
  std::string inspect_path;
  inspect->add_option("checkpoint,--checkpoint", inspect_path, "Checkpoint file")->required();

  // verify-replay
  auto* verify = app.add_subcommand("verify-replay", "Recompute every reward in a replay log");
  std::string verify_path;
  verify->add_option("replay,--replay", verify_path, "Replay log")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_config || app.get_subcommands().empty()) {
      if (!print_config) {
        std::cout << app.help();
        return 0;
      }
      auto cfg = load_config(common);
      size_t n = 0;
      check(sdqn_config_to_json(cfg.p, nullptr, 0, &n));
      std::string s(n + 1, '\0');
      check(sdqn_config_to_json(cfg.p, s.data(), s.size(), &n));
      s.resize(n);
      std::cout << s << '\n';
      return 0;
    }

    if (train->parsed()) {
      auto cfg = load_config(common);
      nlohmann::json t = nlohmann::json::object();
      if (common.seed_set) t["seed"] = common.seed;
      if (steps >= 0) t["total_steps"] = steps;
      if (!train_opponent.empty()) t["opponent"] = train_opponent;
      if (!t.empty()) patch(cfg, {{"trainer", t}});
      sdqn_train_summary summary{};
      check(sdqn_train(cfg.p, train_ckpt.c_str(), resume.empty() ? nullptr : resume.c_str(),
                       print_metrics, nullptr, &summary));
      std::cerr << "trained " << summary.steps_run << " frames (total " << summary.step << ", "
                << summary.updates << " updates, epsilon " << summary.epsilon << ")"
                << (summary.stopped_on_plateau ? ", stopped on loss plateau" : "") << "; wrote "
                << train_ckpt << '\n';
      return 0;
    }

    if (play->parsed()) {
      auto cfg = load_config(common);
      std::string home_spec = play_home;
      if (home_spec.empty()) home_spec = play_ckpt.empty() ? "chaser" : "checkpoint:" + play_ckpt;
      auto home = make_policy(home_spec);
      auto away = make_policy(play_opponent);
      sdqn_match_result r{};
      check(sdqn_run_match(home.p, away.p, cfg.p, common.seed,
                           replay_out.empty() ? nullptr : replay_out.c_str(), &r));
      std::printf("%s vs %s  %d:%d %s  (halves %d:%d, %d:%d; seed %llu)\n", home_spec.c_str(),
                  play_opponent.c_str(), r.home_goals, r.away_goals, outcome_name(r.outcome),
                  r.half_scores[0][0], r.half_scores[0][1], r.half_scores[1][0], r.half_scores[1][1],
                  static_cast<unsigned long long>(r.seed));
      return 0;
    }

    if (eval->parsed()) {
      auto cfg = load_config(common);
      std::string spec = eval_policy;
      if (spec.empty()) {
        if (eval_ckpt.empty()) {
          std::cerr << "eval: give --checkpoint or --policy\n";
          return SDQN_ERR_INVALID_ARGUMENT;
        }
        spec = "checkpoint:" + eval_ckpt;
      }
      if (eval_opponents.empty()) eval_opponents = {"random", "chaser"};
      auto policy = make_policy(spec);
      std::vector<PolicyHandle> opps;
      std::vector<const sdqn_policy*> raw;
      for (const auto& o : eval_opponents) {
        opps.push_back(make_policy(o));
        raw.push_back(opps.back().p);
      }
      EvalHandle e;
      check(sdqn_evaluate(policy.p, raw.data(), raw.size(), matches, common.seed, threads, cfg.p, &e.p));
      std::cout << text_of(sdqn_eval_table, e.p);
      return 0;
    }

    if (inspect->parsed()) {
      sdqn_checkpoint_info info{};
      check(sdqn_checkpoint_inspect(inspect_path.c_str(), &info));
      std::printf("format version  %u\n", info.version);
      std::printf("layers          ");
      for (std::uint32_t i = 0; i < info.n_dims; ++i) std::printf(i ? "-%u" : "%u", info.dims[i]);
      std::printf("\nparameters      %llu\n", static_cast<unsigned long long>(info.param_count));
      std::printf("step            %llu\n", static_cast<unsigned long long>(info.step));
      std::printf("updates         %llu\n", static_cast<unsigned long long>(info.updates));
      std::printf("epsilon         %.6g\n", info.epsilon);
      std::printf("crc32           %08x\n", info.crc32);
      std::printf("file size       %llu bytes\n", static_cast<unsigned long long>(info.file_size));
      return 0;
    }

    if (verify->parsed()) {
      sdqn_replay_report rep{};
      const sdqn_status st = sdqn_replay_verify(verify_path.c_str(), &rep);
      if (st != SDQN_OK && st != SDQN_ERR_REPLAY_MISMATCH) check(st);
      std::printf("records %llu, reward mismatches %llu, config digest %s\n",
                  static_cast<unsigned long long>(rep.records),
                  static_cast<unsigned long long>(rep.mismatches), rep.digest_ok ? "ok" : "MISMATCH");
      if (st != SDQN_OK) {
        std::printf("first mismatch at frame %lld\n", static_cast<long long>(rep.first_mismatch_frame));
        return st;
      }
      std::printf("replay verified\n");
      return 0;
    }
  } catch (const CliError& e) {
    return static_cast<int>(e.status);
  }
  return 0;
}
