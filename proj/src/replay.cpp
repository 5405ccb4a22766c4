// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/replay.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "soccerdqn/error.hpp"
#include "soccerdqn/rewards.hpp"

namespace sdqn {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "soccerdqn-replay";

json vec(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 to_vec(const json& j) {
  if (!j.is_array() || j.size() != 2) throw_error(ErrorCode::kParse, "replay: expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

PhaseKind phase_from(const std::string& s) {
  for (const auto k : {PhaseKind::kKickoff, PhaseKind::kDefault, PhaseKind::kGoalKick,
                       PhaseKind::kCornerKick, PhaseKind::kPenaltyKick, PhaseKind::kRelocation}) {
    if (to_string(k) == s) return k;
  }
  throw_error(ErrorCode::kParse, "replay: unknown phase '" + s + "'");
}

Team team_from(const std::string& s) {
  if (s == "home") return Team::kHome;
  if (s == "away") return Team::kAway;
  throw_error(ErrorCode::kParse, "replay: unknown team '" + s + "'");
}

ReplayRecord record_from(const json& j) {
  ReplayRecord r;
  r.frame = j.at("frame").get<std::int64_t>();
  r.half = j.at("half").get<int>();
  r.side = team_from(j.at("side").get<std::string>());
  r.phase = phase_from(j.at("phase").get<std::string>());
  r.phase_team = team_from(j.at("phase_team").get<std::string>());
  r.score = j.at("score").get<std::array<int, 2>>();
  const auto& b = j.at("ball");
  r.ball_pos = to_vec(b.at("pos"));
  r.ball_vel = to_vec(b.at("vel"));
  r.ball_prev2 = to_vec(b.at("prev2"));
  const auto& robots = j.at("robots");
  if (!robots.is_array() || robots.size() != kRobotCount) {
    throw_error(ErrorCode::kParse, "replay: expected 10 robot poses");
  }
  for (std::size_t i = 0; i < kRobotCount; ++i) {
    const auto& p = robots[i];
    if (!p.is_array() || p.size() != 4) throw_error(ErrorCode::kParse, "replay: bad robot pose");
    r.robots[i] = {p[0].get<double>(), p[1].get<double>(), p[2].get<double>(), p[3].get<int>() != 0};
  }
  r.action = j.at("action").get<int>();
  r.reward = j.at("reward").get<double>();
  return r;
}

}  // namespace

ReplayRecord make_record(const WorldState& world, std::int64_t frame, int half, Team side,
                         std::array<int, 2> score, int action, double reward) {
  ReplayRecord r;
  r.frame = frame;
  r.half = half;
  r.side = side;
  r.phase = world.phase.kind;
  r.phase_team = world.phase.team;
  r.score = score;
  r.ball_pos = world.ball.pos;
  r.ball_vel = world.ball.vel;
  r.ball_prev2 = world.ball.history[2];
  for (std::size_t i = 0; i < kRobotCount; ++i) {
    const auto& rb = world.robots[i];
    r.robots[i] = {rb.pos.x, rb.pos.y, rb.heading, rb.active};
  }
  r.action = action;
  r.reward = reward;
  return r;
}

ReplayWriter::ReplayWriter(std::ostream& out, const ReplayHeader& header) : out_(out) {
  json h = {{"format", kFormat},
            {"version", kReplayVersion},
            {"seed", header.seed},
            {"home", header.home},
            {"away", header.away},
            {"config_digest", config_digest(header.config)},
            {"config", json::parse(config_to_json(header.config, -1))}};
  out_ << h.dump() << '\n';
}

void ReplayWriter::write(const ReplayRecord& rec) {
  json robots = json::array();
  for (const auto& p : rec.robots) robots.push_back({p.x, p.y, p.heading, p.active ? 1 : 0});
  json j = {{"frame", rec.frame},
            {"half", rec.half},
            {"side", to_string(rec.side)},
            {"phase", to_string(rec.phase)},
            {"phase_team", to_string(rec.phase_team)},
            {"score", rec.score},
            {"ball", {{"pos", vec(rec.ball_pos)}, {"vel", vec(rec.ball_vel)}, {"prev2", vec(rec.ball_prev2)}}},
            {"robots", std::move(robots)},
            {"action", rec.action},
            {"reward", rec.reward}};
  out_ << j.dump() << '\n';
}

ReplayLog read_replay(std::istream& in) {
  ReplayLog log;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (!have_header) {
        if (j.value("format", "") != kFormat) throw_error(ErrorCode::kParse, "replay: missing header");
        if (j.at("version").get<int>() != kReplayVersion) {
          throw_error(ErrorCode::kVersionMismatch, "replay: unsupported version");
        }
        log.header.seed = j.at("seed").get<std::uint64_t>();
        log.header.home = j.at("home").get<std::string>();
        log.header.away = j.at("away").get<std::string>();
        log.header.config_digest = j.at("config_digest").get<std::string>();
        log.header.config = config_from_json(j.at("config").dump());
        have_header = true;
        continue;
      }
      auto rec = record_from(j);
      if (!log.records.empty() && rec.frame <= log.records.back().frame) {
        throw_error(ErrorCode::kParse, "replay: frame numbers must increase (line " +
                                           std::to_string(line_no) + ")");
      }
      log.records.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw_error(ErrorCode::kParse, "replay line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header) throw_error(ErrorCode::kParse, "replay: empty log");
  return log;
}

ReplayLog read_replay_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::kIo, "cannot open replay '" + path + "'");
  return read_replay(in);
}

double recompute_reward(const ReplayRecord& rec, const Config& cfg) {
  std::array<Vec2, 4> players{};
  for (std::size_t i = 0; i < kFieldPlayers.size(); ++i) {
    const auto& p = rec.robots[slot_of(rec.side, kFieldPlayers[i])];
    players[i] = {p.x, p.y};
  }
  return team_reward(rec.ball_prev2, rec.ball_pos, players, rec.side, cfg.field, cfg.reward);
}

ReplayVerification verify_replay(const ReplayLog& log) {
  ReplayVerification v;
  v.digest_ok = config_digest(log.header.config) == log.header.config_digest;
  for (const auto& rec : log.records) {
    ++v.records;
    const double r = recompute_reward(rec, log.header.config);
    if (std::bit_cast<std::uint64_t>(r) != std::bit_cast<std::uint64_t>(rec.reward)) {
      if (v.mismatches == 0) v.first_mismatch_frame = rec.frame;
      ++v.mismatches;
    }
  }
  return v;
}

}  // namespace sdqn
