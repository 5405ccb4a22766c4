// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/soccerdqn.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <new>
#include <string>
#include <vector>

#include "json.hpp"
#include "soccerdqn/actions.hpp"
#include "soccerdqn/checkpoint.hpp"
#include "soccerdqn/config.hpp"
#include "soccerdqn/error.hpp"
#include "soccerdqn/match.hpp"
#include "soccerdqn/percept.hpp"
#include "soccerdqn/replay.hpp"
#include "soccerdqn/rewards.hpp"
#include "soccerdqn/training.hpp"
#include "soccerdqn/world.hpp"

struct sdqn_config {
  sdqn::Config cfg;
};

struct sdqn_policy {
  std::unique_ptr<sdqn::Policy> policy;
};

struct sdqn_world {
  sdqn::Config cfg;
  sdqn::WorldState world;
};

struct sdqn_eval {
  sdqn::EvalTable table;
  std::string text;
};

namespace {

thread_local std::string g_last_error;

sdqn_status fail(sdqn_status status, const char* what) {
  g_last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
sdqn_status guarded(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return SDQN_OK;
  } catch (const sdqn::Error& e) {
    return fail(static_cast<sdqn_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SDQN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SDQN_ERR_INTERNAL, e.what());
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) sdqn::throw_error(sdqn::ErrorCode::kInvalidArgument, what);
}

void copy_text(const std::string& text, char* buffer, std::size_t capacity, std::size_t* needed) {
  if (needed) *needed = text.size();
  if (capacity == 0) return;
  need(buffer, "null output buffer");
  const std::size_t n = std::min(text.size(), capacity - 1);
  std::memcpy(buffer, text.data(), n);
  buffer[n] = '\0';
}

sdqn::Team team_arg(int team) {
  if (team != SDQN_TEAM_HOME && team != SDQN_TEAM_AWAY) {
    sdqn::throw_error(sdqn::ErrorCode::kInvalidArgument, "team must be 0 (home) or 1 (away)");
  }
  return team == SDQN_TEAM_HOME ? sdqn::Team::kHome : sdqn::Team::kAway;
}

int outcome_code(sdqn::Outcome o) {
  switch (o) {
    case sdqn::Outcome::kWin: return SDQN_WIN;
    case sdqn::Outcome::kLose: return SDQN_LOSE;
    case sdqn::Outcome::kTie: return SDQN_TIE;
  }
  return SDQN_TIE;
}

sdqn_match_result to_c(const sdqn::MatchResult& r) {
  sdqn_match_result out{};
  out.home_goals = r.home_goals;
  out.away_goals = r.away_goals;
  out.outcome = outcome_code(r.outcome);
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 2; ++s) out.half_scores[h][s] = r.half_scores[h][s];
  }
  out.seed = r.seed;
  return out;
}

std::uint32_t read_u32(const std::vector<std::uint8_t>& bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | bytes[at + static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

extern "C" {

const char* sdqn_last_error(void) { return g_last_error.c_str(); }

const char* sdqn_status_name(sdqn_status status) {
  switch (status) {
    case SDQN_OK: return "ok";
    case SDQN_ERR_INTERNAL: return "internal error";
    default:
      if (status >= SDQN_ERR_CONTRACT && status <= SDQN_ERR_REPLAY_MISMATCH) {
        return sdqn::to_string(static_cast<sdqn::ErrorCode>(static_cast<int>(status)));
      }
      return "unknown status";
  }
}

sdqn_status sdqn_config_default(sdqn_config** out) {
  return guarded([&] {
    need(out, "null output handle");
    *out = new sdqn_config{};
  });
}

sdqn_status sdqn_config_load(const char* path, sdqn_config** out) {
  return guarded([&] {
    need(path, "null path");
    need(out, "null output handle");
    *out = new sdqn_config{sdqn::load_config(path)};
  });
}

sdqn_status sdqn_config_parse(const char* json_text, sdqn_config** out) {
  return guarded([&] {
    need(json_text, "null config text");
    need(out, "null output handle");
    *out = new sdqn_config{sdqn::config_from_json(json_text)};
  });
}

sdqn_status sdqn_config_patch(sdqn_config* cfg, const char* json_patch) {
  return guarded([&] {
    need(cfg, "null config");
    need(json_patch, "null patch");
    auto base = nlohmann::json::parse(sdqn::config_to_json(cfg->cfg, -1));
    nlohmann::json patch;
    try {
      patch = nlohmann::json::parse(json_patch);
    } catch (const nlohmann::json::exception& e) {
      sdqn::throw_error(sdqn::ErrorCode::kParse, std::string("config patch: ") + e.what());
    }
    base.merge_patch(patch);
    cfg->cfg = sdqn::config_from_json(base.dump());
  });
}

sdqn_status sdqn_config_to_json(const sdqn_config* cfg, char* buffer, size_t capacity,
                                size_t* needed) {
  return guarded([&] {
    need(cfg, "null config");
    copy_text(sdqn::config_to_json(cfg->cfg), buffer, capacity, needed);
  });
}

sdqn_status sdqn_config_digest(const sdqn_config* cfg, char out[17]) {
  return guarded([&] {
    need(cfg, "null config");
    need(out, "null output");
    copy_text(sdqn::config_digest(cfg->cfg), out, 17, nullptr);
  });
}

void sdqn_config_free(sdqn_config* cfg) { delete cfg; }

sdqn_status sdqn_policy_create(const char* spec, sdqn_policy** out) {
  return guarded([&] {
    need(spec, "null policy spec");
    need(out, "null output handle");
    *out = new sdqn_policy{sdqn::make_policy(spec)};
  });
}

sdqn_status sdqn_policy_name(const sdqn_policy* policy, char* buffer, size_t capacity,
                             size_t* needed) {
  return guarded([&] {
    need(policy, "null policy");
    copy_text(policy->policy->name(), buffer, capacity, needed);
  });
}

void sdqn_policy_free(sdqn_policy* policy) { delete policy; }

sdqn_status sdqn_world_create(const sdqn_config* cfg, int kickoff_team, sdqn_world** out) {
  return guarded([&] {
    need(cfg, "null config");
    need(out, "null output handle");
    const auto team = team_arg(kickoff_team);
    *out = new sdqn_world{cfg->cfg, sdqn::initial_world(cfg->cfg, team)};
  });
}

sdqn_status sdqn_world_advance(sdqn_world* world, const double wheels[20], int* goal_out) {
  return guarded([&] {
    need(world, "null world");
    need(wheels, "null wheel commands");
    std::array<sdqn::WheelCommand, sdqn::kRobotCount> commands{};
    for (std::size_t i = 0; i < commands.size(); ++i) {
      commands[i] = {wheels[2 * i], wheels[2 * i + 1]};
    }
    const auto ev = sdqn::advance(world->world, commands, world->cfg);
    if (goal_out) *goal_out = ev.goal ? static_cast<int>(*ev.goal) : -1;
  });
}

sdqn_status sdqn_world_encode(const sdqn_world* world, int team, float out[22]) {
  return guarded([&] {
    need(world, "null world");
    need(out, "null output");
    const auto s = sdqn::encode_state(world->world, team_arg(team), world->cfg.field);
    std::copy(s.begin(), s.end(), out);
  });
}

sdqn_status sdqn_world_reward(const sdqn_world* world, int team, double* out) {
  return guarded([&] {
    need(world, "null world");
    need(out, "null output");
    *out = sdqn::team_reward(world->world, team_arg(team), world->cfg.field, world->cfg.reward);
  });
}

sdqn_status sdqn_world_ball(const sdqn_world* world, double out[2], int64_t* frame) {
  return guarded([&] {
    need(world, "null world");
    need(out, "null output");
    out[0] = world->world.ball.pos.x;
    out[1] = world->world.ball.pos.y;
    if (frame) *frame = world->world.frame;
  });
}

void sdqn_world_free(sdqn_world* world) { delete world; }

sdqn_status sdqn_action_decode(int action, int dirs[4]) {
  return guarded([&] {
    need(dirs, "null output");
    const auto d = sdqn::decode_action(sdqn::JointAction{action});
    for (std::size_t i = 0; i < d.size(); ++i) dirs[i] = static_cast<int>(d[i]);
  });
}

sdqn_status sdqn_action_encode(const int dirs[4], int* action) {
  return guarded([&] {
    need(dirs, "null directions");
    need(action, "null output");
    sdqn::Dirs d{};
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (dirs[i] < 0 || dirs[i] > 3) {
        sdqn::throw_error(sdqn::ErrorCode::kInvalidArgument, "direction must lie in [0, 3]");
      }
      d[i] = static_cast<sdqn::Dir>(dirs[i]);
    }
    *action = sdqn::encode_action(d).index;
  });
}

sdqn_status sdqn_run_match(sdqn_policy* home, sdqn_policy* away, const sdqn_config* cfg,
                           uint64_t seed, const char* replay_path, sdqn_match_result* out) {
  return guarded([&] {
    need(home, "null home policy");
    need(away, "null away policy");
    need(cfg, "null config");
    need(out, "null output");
    std::ofstream replay;
    if (replay_path) {
      replay.open(replay_path, std::ios::binary | std::ios::trunc);
      if (!replay) {
        sdqn::throw_error(sdqn::ErrorCode::kIo, std::string("cannot write replay '") + replay_path + "'");
      }
    }
    // The same policy object may play both sides; give it an independent copy.
    std::unique_ptr<sdqn::Policy> away_copy;
    sdqn::Policy* away_policy = away->policy.get();
    if (home == away) {
      away_copy = away->policy->clone();
      away_policy = away_copy.get();
    }
    const auto r = sdqn::run_match(*home->policy, *away_policy, cfg->cfg, seed,
                                   replay_path ? &replay : nullptr);
    if (replay_path) {
      replay.flush();
      if (!replay) sdqn::throw_error(sdqn::ErrorCode::kIo, "failed writing replay");
    }
    *out = to_c(r);
  });
}

sdqn_status sdqn_evaluate(const sdqn_policy* policy, const sdqn_policy* const* opponents,
                          size_t n_opponents, int n_matches, uint64_t seed, int threads,
                          const sdqn_config* cfg, sdqn_eval** out) {
  return guarded([&] {
    need(policy, "null policy");
    need(cfg, "null config");
    need(out, "null output handle");
    if (n_opponents > 0) need(opponents, "null opponent list");
    std::vector<const sdqn::Policy*> opps;
    for (std::size_t i = 0; i < n_opponents; ++i) {
      need(opponents[i], "null opponent");
      opps.push_back(opponents[i]->policy.get());
    }
    auto table = sdqn::evaluate(*policy->policy, opps, n_matches, seed, cfg->cfg, threads);
    auto text = sdqn::format_table(table);
    *out = new sdqn_eval{std::move(table), std::move(text)};
  });
}

sdqn_status sdqn_eval_summary_get(const sdqn_eval* eval, sdqn_eval_summary* out) {
  return guarded([&] {
    need(eval, "null evaluation");
    need(out, "null output");
    const auto& t = eval->table;
    *out = {t.played(), t.wins, t.losses, t.ties, t.goals_for, t.goals_against};
  });
}

size_t sdqn_eval_match_count(const sdqn_eval* eval) {
  return eval ? eval->table.matches.size() : 0;
}

sdqn_status sdqn_eval_match(const sdqn_eval* eval, size_t index, sdqn_match_result* out) {
  return guarded([&] {
    need(eval, "null evaluation");
    need(out, "null output");
    if (index >= eval->table.matches.size()) {
      sdqn::throw_error(sdqn::ErrorCode::kInvalidArgument, "match index out of range");
    }
    *out = to_c(eval->table.matches[index]);
  });
}

sdqn_status sdqn_eval_table(const sdqn_eval* eval, char* buffer, size_t capacity, size_t* needed) {
  return guarded([&] {
    need(eval, "null evaluation");
    copy_text(eval->text, buffer, capacity, needed);
  });
}

void sdqn_eval_free(sdqn_eval* eval) { delete eval; }

sdqn_status sdqn_train(const sdqn_config* cfg, const char* checkpoint_path, const char* resume_from,
                       sdqn_metrics_callback callback, void* user, sdqn_train_summary* out) {
  return guarded([&] {
    need(cfg, "null config");
    sdqn::TrainOptions options;
    if (checkpoint_path) options.checkpoint_path = checkpoint_path;
    if (resume_from) options.resume_from = resume_from;
    if (callback) {
      options.on_metrics = [callback, user](const sdqn::TrainMetrics& m) {
        sdqn_train_metrics c{m.step,
                             m.updates,
                             m.epsilon,
                             m.loss ? 1 : 0,
                             m.loss.value_or(0.0),
                             m.mean_reward,
                             m.goals_for,
                             m.goals_against};
        const std::string line = sdqn::metrics_json(m);
        callback(&c, line.c_str(), user);
      };
    }
    const auto summary = sdqn::train(cfg->cfg, options);
    if (out) {
      *out = {summary.steps_run, summary.checkpoint.step, summary.checkpoint.updates,
              summary.checkpoint.epsilon, summary.stopped_on_plateau ? 1 : 0};
    }
  });
}

sdqn_status sdqn_checkpoint_inspect(const char* path, sdqn_checkpoint_info* out) {
  return guarded([&] {
    need(path, "null path");
    need(out, "null output");
    std::ifstream in(path, std::ios::binary);
    if (!in) sdqn::throw_error(sdqn::ErrorCode::kIo, std::string("cannot open '") + path + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    const auto ckpt = sdqn::parse_checkpoint(bytes);
    if (ckpt.dims.size() > SDQN_MAX_LAYERS) {
      sdqn::throw_error(sdqn::ErrorCode::kInvalidArgument, "too many layers to report");
    }
    sdqn_checkpoint_info info{};
    info.version = read_u32(bytes, 8);
    info.n_dims = static_cast<std::uint32_t>(ckpt.dims.size());
    for (std::size_t i = 0; i < ckpt.dims.size(); ++i) {
      info.dims[i] = static_cast<std::uint32_t>(ckpt.dims[i]);
    }
    info.step = ckpt.step;
    info.updates = ckpt.updates;
    info.epsilon = ckpt.epsilon;
    info.param_count = ckpt.params.size();
    info.crc32 = read_u32(bytes, bytes.size() - 4);
    info.file_size = bytes.size();
    *out = info;
  });
}

sdqn_status sdqn_replay_verify(const char* path, sdqn_replay_report* out) {
  sdqn::ReplayVerification v;
  const sdqn_status st = guarded([&] {
    need(path, "null path");
    v = sdqn::verify_replay(sdqn::read_replay_file(path));
  });
  if (st != SDQN_OK) return st;
  if (out) {
    *out = {v.records, v.mismatches, v.first_mismatch_frame, v.digest_ok ? 1 : 0};
  }
  if (!v.ok()) {
    return fail(SDQN_ERR_REPLAY_MISMATCH,
                v.digest_ok ? "recorded rewards differ from recomputed rewards"
                            : "config digest does not match the embedded config");
  }
  return SDQN_OK;
}

}  // extern "C"
