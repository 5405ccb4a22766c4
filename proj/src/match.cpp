// SPDX-License-Identifier: Apache-2.0
#include "soccerdqn/match.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "soccerdqn/checkpoint.hpp"
#include "soccerdqn/error.hpp"
#include "soccerdqn/replay.hpp"
#include "soccerdqn/rewards.hpp"

namespace sdqn {

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kWin: return "Win";
    case Outcome::kLose: return "Lose";
    case Outcome::kTie: return "Tie";
  }
  return "?";
}

Outcome outcome_of(int goals_for, int goals_against) {
  if (goals_for > goals_against) return Outcome::kWin;
  if (goals_for < goals_against) return Outcome::kLose;
  return Outcome::kTie;
}

MatchResult run_match(Policy& home, Policy& away, const Config& cfg, std::uint64_t seed,
                      std::ostream* replay) {
  MatchResult result;
  result.seed = seed;
  std::unique_ptr<ReplayWriter> writer;
  if (replay) {
    ReplayHeader header{seed, home.name(), away.name(), config_digest(cfg), cfg};
    writer = std::make_unique<ReplayWriter>(*replay, header);
  }

  std::array<WheelCommand, kRobotCount> commands{};
  for (int half = 0; half < 2; ++half) {
    const Team home_side = half == 0 ? Team::kHome : Team::kAway;
    Policy& on_home = half == 0 ? home : away;
    Policy& on_away = half == 0 ? away : home;
    on_home.reset(Rng::derive(seed, static_cast<std::uint64_t>(Team::kHome)));
    on_away.reset(Rng::derive(seed, static_cast<std::uint64_t>(Team::kAway)));

    WorldState world = initial_world(cfg, Team::kHome);
    auto& hs = result.half_scores[static_cast<std::size_t>(half)];
    for (std::int64_t f = 0; f < cfg.field.frames_per_half; ++f) {
      const TeamCommands hc = on_home.act(world, Team::kHome, cfg);
      const TeamCommands ac = on_away.act(world, Team::kAway, cfg);
      std::copy(hc.begin(), hc.end(), commands.begin());
      std::copy(ac.begin(), ac.end(), commands.begin() + kRobotsPerTeam);
      const TickEvents ev = advance(world, commands, cfg);
      if (ev.goal) {
        if (*ev.goal == home_side) {
          ++hs[0];
        } else {
          ++hs[1];
        }
      }
      if (writer) {
        const double reward = team_reward(world, home_side, cfg.field, cfg.reward);
        const auto action = home.last_action();
        writer->write(make_record(world, half * cfg.field.frames_per_half + world.frame, half,
                                  home_side,
                                  {result.half_scores[0][0] + result.half_scores[1][0],
                                   result.half_scores[0][1] + result.half_scores[1][1]},
                                  action ? *action : -1, reward));
      }
    }
  }
  result.home_goals = result.half_scores[0][0] + result.half_scores[1][0];
  result.away_goals = result.half_scores[0][1] + result.half_scores[1][1];
  result.outcome = outcome_of(result.home_goals, result.away_goals);
  return result;
}

std::uint64_t eval_seed(std::uint64_t base, int i) {
  return Rng::derive(base, 0xe7a1u, static_cast<std::uint64_t>(i));
}

EvalTable evaluate(const Policy& policy, std::span<const Policy* const> opponents, int n_matches,
                   std::uint64_t seed, const Config& cfg, int threads) {
  require(n_matches >= 1, "evaluate: need at least one match per opponent");
  const std::size_t n_jobs = opponents.size() * static_cast<std::size_t>(n_matches);
  std::vector<MatchResult> results(n_jobs);

  auto run_job = [&](std::size_t job) {
    const std::size_t opp = job / static_cast<std::size_t>(n_matches);
    const int i = static_cast<int>(job % static_cast<std::size_t>(n_matches));
    auto ours = policy.clone();
    auto theirs = opponents[opp]->clone();
    results[job] = run_match(*ours, *theirs, cfg, eval_seed(seed, i));
  };

  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, std::max<std::size_t>(n_jobs, 1));
  if (workers <= 1) {
    for (std::size_t j = 0; j < n_jobs; ++j) run_job(j);
  } else {
    // Static interleaved assignment: each job writes only its own slot.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t j = w; j < n_jobs; j += workers) run_job(j);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EvalTable table;
  table.matches = results;
  for (std::size_t opp = 0; opp < opponents.size(); ++opp) {
    EvalRow row;
    row.opponent = opponents[opp]->name();
    for (int i = 0; i < n_matches; ++i) {
      const auto& m = results[opp * static_cast<std::size_t>(n_matches) + static_cast<std::size_t>(i)];
      row.goals_for += m.home_goals;
      row.goals_against += m.away_goals;
      switch (m.outcome) {
        case Outcome::kWin: ++row.wins; break;
        case Outcome::kLose: ++row.losses; break;
        case Outcome::kTie: ++row.ties; break;
      }
    }
    table.wins += row.wins;
    table.losses += row.losses;
    table.ties += row.ties;
    table.goals_for += row.goals_for;
    table.goals_against += row.goals_against;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_row(std::string_view label, int goals_for, int goals_against) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-32.*s %d:%d %s", static_cast<int>(label.size()), label.data(),
                goals_for, goals_against, std::string(to_string(outcome_of(goals_for, goals_against))).c_str());
  return buf;
}

std::string format_table(const EvalTable& table) {
  std::ostringstream out;
  char head[160];
  std::snprintf(head, sizeof head, "%-32s %s", "Opponent", "Score Victory");
  out << head << '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    const std::string label = "Ours vs Team " + std::to_string(i + 1) + " (" + r.opponent + ")";
    out << format_row(label, r.goals_for, r.goals_against) << '\n';
  }
  out << "Summary: " << table.wins << " win, " << table.losses << " lose, " << table.ties
      << " tie over " << table.played() << " matches; goals " << table.goals_for << ":"
      << table.goals_against << '\n';
  return out.str();
}

std::unique_ptr<Policy> make_policy(std::string_view spec) {
  if (spec == "zero") return std::make_unique<ZeroPolicy>();
  if (spec == "random") return std::make_unique<BaselinePolicy>(BaselineKind::kRandom);
  if (spec == "chaser") return std::make_unique<BaselinePolicy>(BaselineKind::kBallChaser);
  constexpr std::string_view kPrefix = "checkpoint:";
  if (spec.starts_with(kPrefix)) {
    const std::string path(spec.substr(kPrefix.size()));
    auto ckpt = load_checkpoint(path);
    return std::make_unique<DqnPolicy>(network_from(ckpt), 0.0, "dqn");
  }
  throw_error(ErrorCode::kInvalidArgument,
              "unknown policy '" + std::string(spec) + "' (expected zero|random|chaser|checkpoint:PATH)");
}

}  // namespace sdqn
