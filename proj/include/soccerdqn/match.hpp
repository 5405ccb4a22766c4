// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soccerdqn/config.hpp"
#include "soccerdqn/policies.hpp"

namespace sdqn {

enum class Outcome { kWin, kLose, kTie };

std::string_view to_string(Outcome o);
Outcome outcome_of(int goals_for, int goals_against);

/// Result from the home policy's point of view.
struct MatchResult {
  int home_goals = 0;
  int away_goals = 0;
  Outcome outcome = Outcome::kTie;
  std::array<std::array<int, 2>, 2> half_scores{};  ///< [half][home, away]
  std::uint64_t seed = 0;

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Two halves of `frames_per_half` frames. The home policy plays the Home
/// side in the first half and the Away side in the second; the side playing
/// Home kicks off each half. Each policy is reset at every half with a seed
/// derived from (seed, world side), so a policy facing an identical copy of
/// itself meets a mirrored game. Writes a replay log when `replay` is given.
MatchResult run_match(Policy& home, Policy& away, const Config& cfg, std::uint64_t seed,
                      std::ostream* replay = nullptr);

struct EvalRow {
  std::string opponent;
  int goals_for = 0;
  int goals_against = 0;
  int wins = 0;
  int losses = 0;
  int ties = 0;

  Outcome outcome() const { return outcome_of(goals_for, goals_against); }
};

struct EvalTable {
  std::vector<EvalRow> rows;
  std::vector<MatchResult> matches;  ///< opponent-major, seed order
  int wins = 0;
  int losses = 0;
  int ties = 0;
  int goals_for = 0;
  int goals_against = 0;

  int played() const { return wins + losses + ties; }
};

/// Seed of the i-th evaluation match.
std::uint64_t eval_seed(std::uint64_t base, int i);

/// `n_matches` seeded matches against every opponent. Matches may run on up
/// to `threads` workers; results are merged in seed order.
EvalTable evaluate(const Policy& policy, std::span<const Policy* const> opponents, int n_matches,
                   std::uint64_t seed, const Config& cfg, int threads = 1);

/// One row, e.g. "Ours vs Team 1 (chaser)          13:8 Win".
std::string format_row(std::string_view label, int goals_for, int goals_against);
/// Row per opponent plus a summary line.
std::string format_table(const EvalTable& table);

/// "zero", "random", "chaser" or "checkpoint:PATH" (greedy Q-network agent).
std::unique_ptr<Policy> make_policy(std::string_view spec);

}  // namespace sdqn
