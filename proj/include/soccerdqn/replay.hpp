// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "soccerdqn/config.hpp"
#include "soccerdqn/world.hpp"

namespace sdqn {

// Replay logs are JSON Lines. The first line is the header:
//
//   {"format":"soccerdqn-replay","version":1,"seed":..,"home":"..","away":"..",
//    "config_digest":"<16 hex>","config":{...full config...}}
//
// followed by one record per simulated frame:
//
//   {"frame":n,"half":0|1,"side":"home"|"away","phase":"default","phase_team":"home",
//    "score":[home_goals,away_goals],
//    "ball":{"pos":[x,y],"vel":[vx,vy],"prev2":[x,y]},
//    "robots":[[x,y,theta,active]x10],"action":a,"reward":r}
//
// `side` is the world side played by the home policy during that half (teams
// swap at halftime), `score` is from the home policy's point of view,
// `action` is -1 for non-learned policies, and `reward` is the shaped team
// reward of the home policy's side after the frame. Numbers are printed with
// round-trip precision.

inline constexpr int kReplayVersion = 1;

struct ReplayHeader {
  std::uint64_t seed = 0;
  std::string home;
  std::string away;
  std::string config_digest;
  Config config;
};

struct RobotPose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
  bool active = true;
};

struct ReplayRecord {
  std::int64_t frame = 0;
  int half = 0;
  Team side = Team::kHome;
  PhaseKind phase = PhaseKind::kKickoff;
  Team phase_team = Team::kHome;
  std::array<int, 2> score = {0, 0};
  Vec2 ball_pos;
  Vec2 ball_vel;
  Vec2 ball_prev2;
  std::array<RobotPose, kRobotCount> robots{};
  int action = -1;
  double reward = 0.0;
};

ReplayRecord make_record(const WorldState& world, std::int64_t frame, int half, Team side,
                         std::array<int, 2> score, int action, double reward);

class ReplayWriter {
 public:
  ReplayWriter(std::ostream& out, const ReplayHeader& header);
  void write(const ReplayRecord& rec);

 private:
  std::ostream& out_;
};

struct ReplayLog {
  ReplayHeader header;
  std::vector<ReplayRecord> records;
};

/// Throws kParse on malformed lines or non-increasing frame numbers.
ReplayLog read_replay(std::istream& in);
ReplayLog read_replay_file(const std::string& path);

/// Reward of a record recomputed from its logged positions alone.
double recompute_reward(const ReplayRecord& rec, const Config& cfg);

struct ReplayVerification {
  std::size_t records = 0;
  std::size_t mismatches = 0;
  std::int64_t first_mismatch_frame = -1;
  bool digest_ok = true;

  bool ok() const { return mismatches == 0 && digest_ok; }
};

/// Recomputes every reward with the embedded config and compares bit-for-bit.
ReplayVerification verify_replay(const ReplayLog& log);

}  // namespace sdqn
