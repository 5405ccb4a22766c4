// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace sdqn {

enum class Team { kHome = 0, kAway = 1 };
enum class Owner { kHome = 0, kAway = 1, kNone = 2 };
enum class Role { kGoalkeeper = 0, kDefender1, kDefender2, kForward1, kForward2 };

inline constexpr std::size_t kRobotsPerTeam = 5;
inline constexpr std::size_t kRobotCount = 2 * kRobotsPerTeam;

/// Field players in observation/action order.
inline constexpr std::array<Role, 4> kFieldPlayers = {Role::kForward1, Role::kForward2,
                                                      Role::kDefender1, Role::kDefender2};

constexpr Team opponent(Team t) { return t == Team::kHome ? Team::kAway : Team::kHome; }

/// +1 when the team attacks toward +x, -1 otherwise. Home always attacks +x.
constexpr double attack_sign(Team t) { return t == Team::kHome ? 1.0 : -1.0; }

constexpr std::size_t slot_of(Team t, Role r) {
  return static_cast<std::size_t>(t) * kRobotsPerTeam + static_cast<std::size_t>(r);
}

constexpr Team team_of_slot(std::size_t slot) {
  return slot < kRobotsPerTeam ? Team::kHome : Team::kAway;
}

constexpr Role role_of_slot(std::size_t slot) {
  return static_cast<Role>(slot % kRobotsPerTeam);
}

constexpr Owner owner_of(Team t) { return t == Team::kHome ? Owner::kHome : Owner::kAway; }

std::string_view to_string(Team t);
std::string_view to_string(Role r);

}  // namespace sdqn
